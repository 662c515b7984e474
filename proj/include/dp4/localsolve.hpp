#pragma once

// Local solubility of X_a at every place: closed-form criteria at the real
// place and at odd primes, and a certified level-by-level p-adic search
// (used exclusively at p = 2, and for cross-validation elsewhere).

#include "dp4/surface.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

namespace dp4 {

/// p-adic valuations of a0..a4.
using ValVec = std::array<int, 5>;

/// Canonical representative of the valuation-vector class. Two vectors are
/// equivalent under the moves: swap a0<->a1, swap the pairs (a0,a1)<->(a2,a3),
/// change a4 by an even amount, add (2k,2l,2m,2n,0) with k+l = m+n, and add
/// the same integer to all five entries. The representative minimizes the
/// coordinate sum, ties going to the lexicographically largest vector.
ValVec normalize_valvec(const ValVec& v);

enum class PropLabel { ii, iii, iv };

const char* to_string(PropLabel l);

struct SignCase {
    bool mixed;  // true iff not all a_i share one sign
};

/// A matched insolubility case of the odd-prime criteria. idx holds (i,j)
/// for case iii and (i,j,k) for case iv; `strict` records the branch
/// v(a_i a_j) > v(a_l a_m) of case iii.
struct PropCase {
    PropLabel label;
    std::array<int, 3> idx{-1, -1, -1};
    bool strict = false;
};

/// Odd prime where none of the insolubility cases match.
struct NoCaseMatched {};

/// Prime outside the bad set; soluble by good reduction.
struct GoodReduction {};

/// Primitive point mod p^k on both equations whose Jacobian minor
/// (minor.first, minor.second) has valuation e with k > 2e.
struct OracleWitness {
    std::array<Int, 5> point;
    int k;
    std::pair<int, int> minor;
    int e;
};

/// No primitive solution mod p^k.
struct OracleEmpty {
    int k;
};

using Certificate = std::variant<SignCase, PropCase, NoCaseMatched, GoodReduction, OracleWitness, OracleEmpty>;

struct LocalVerdict {
    Place place;
    bool soluble;
    Certificate certificate;
};

struct Undecided {
    Place place;
    int k_max;
    std::size_t frontier;  // frontier size when the search stopped
};

using OracleResult = std::variant<LocalVerdict, Undecided>;

class UndecidedError : public std::runtime_error {
public:
    explicit UndecidedError(Undecided u);
    const Undecided& info() const { return info_; }

private:
    Undecided info_;
};

struct OracleOptions {
    std::size_t frontier_cap = 4'000'000;
};

LocalVerdict real_soluble(const Surface& S);

/// Valuations and unit characters of the coefficients at an odd prime p;
/// everything the odd-prime criteria look at.
struct OddPrimeData {
    ValVec val;
    std::array<int, 5> chi;  // Legendre symbol of a_i / p^{v_i}
    int chi_minus_one;       // (-1 / p)
    int val_d;               // v_p(a0 a1 - a2 a3)

    /// Bracket symbol [-a_i a_j / p].
    int neg_bracket(int i, int j) const
    {
        return chi_minus_one * chi[static_cast<std::size_t>(i)] * chi[static_cast<std::size_t>(j)];
    }
};

OddPrimeData odd_prime_data(const std::array<Int, 5>& a, const Int& p);
OddPrimeData odd_prime_data(const std::array<std::int64_t, 5>& a, std::int64_t p);

/// The insolubility case matched by the data, if any. Case ii applies at
/// every odd p once v_p(d) > v_p(a0 a1) is required; at p = 3 that
/// inequality follows from the other conditions.
std::optional<PropCase> odd_prime_insoluble_case(const OddPrimeData& data);

LocalVerdict odd_p_soluble(const Surface& S, const Int& p);

OracleResult padic_oracle(const Surface& S, const Int& p, int k_max, const OracleOptions& opts = {});

/// Oracle on residues a mod p^precision (p^precision < 2^62). Frontier
/// points whose best Jacobian minor has known valuation e are settled by a
/// search of their residue disk down to level 2e + 1 (if within precision);
/// the breadth-first search itself stops at k_max. The outcome depends only
/// on a mod p^consulted.
struct ResidueOracleRun {
    enum class Status { Soluble, Insoluble, Undecided } status;
    int level;
    int consulted = 0;
    std::array<std::int64_t, 5> point{};
    std::pair<int, int> minor{-1, -1};
    int e = -1;
    std::size_t frontier = 0;
};

/// Largest L <= 2 k_max + 1 with p^L < 2^62.
int oracle_precision(std::int64_t p, int k_max);

ResidueOracleRun padic_oracle_residues(const std::array<std::int64_t, 5>& a_mod, std::int64_t p, int k_max,
                                       int precision, std::size_t frontier_cap);

/// Independent re-check of a witness against the exact coefficients.
bool validate_witness(const Surface& S, const Int& p, const OracleWitness& w);

/// {R, 2} and every odd prime dividing a0 a1 a2 a3 a4 d, in increasing order
/// (R first).
std::vector<Place> bad_places(const Surface& S);

struct LocalSolubilityOptions {
    int k_max_two = 12;
    bool force_oracle = false;  // audit: use the oracle at odd bad primes too
    int k_max_odd = 10;
    OracleOptions oracle;
};

struct LocalSolubility {
    bool soluble;
    std::vector<LocalVerdict> verdicts;  // one per bad place
};

/// Throws UndecidedError when the oracle cannot decide within its bounds.
LocalSolubility everywhere_locally_soluble(const Surface& S, const LocalSolubilityOptions& opts = {});

}  // namespace dp4
