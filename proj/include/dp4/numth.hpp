#pragma once

// Exact integer and rational arithmetic over Q, plus the number-theoretic
// primitives (valuations, factorization, square classes, Hilbert symbols)
// used by every other module. Arbitrary precision is GMP (mpz/mpq); a small
// set of int64 helpers serves the census hot loops.

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dp4 {

using Int = mpz_class;
using Rat = mpq_class;

/// Build a canonical rational num/den. Throws on a zero denominator.
Rat make_rat(const Int& num, const Int& den);

struct FactoredInt {
    int sign = 1;
    std::map<Int, unsigned> factors;

    Int value() const;
};

struct SquarefreeSplit {
    Int core;  // squarefree, sign(core) = sign(n)
    Int root;  // positive, n = core * root^2
};

/// Representative of a class in Q*/Q*^2: a squarefree integer, sign kept.
struct SquareClass {
    Int rep;

    bool is_trivial() const { return rep == 1; }
    friend bool operator==(const SquareClass& x, const SquareClass& y) { return x.rep == y.rep; }
};

/// A place of Q: the real place, or the p-adic place for a prime p.
class Place {
public:
    static Place real() { return Place(Int(0)); }
    static Place finite(const Int& p);

    bool is_real() const { return p_ == 0; }
    const Int& prime() const;
    std::string to_string() const;

    friend bool operator==(const Place& x, const Place& y) { return x.p_ == y.p_; }
    friend bool operator<(const Place& x, const Place& y) { return x.p_ < y.p_; }

private:
    explicit Place(Int p) : p_(std::move(p)) {}
    Int p_;  // 0 encodes the real place
};

bool is_prime(const Int& n);

int vp(const Int& n, const Int& p);
int vp(const Rat& q, const Int& p);

FactoredInt factorize(const Int& n);
std::vector<Int> prime_divisors(const Int& n);

SquarefreeSplit squarefree_part(const Int& n);
SquareClass square_class(const Rat& q);

int legendre(const Int& a, const Int& p);
int bracket_symbol(const Int& a, const Int& p);

bool is_rational_square(const Rat& q);
bool is_square_in_quad(const Rat& a, const Rat& m);

int hilbert(const Rat& a, const Rat& b, const Place& v);

Int gcd_all(const std::array<Int, 5>& xs);

/// Primes p with lo <= p <= hi (sieve).
std::vector<long> primes_between(long lo, long hi);

// -- int64 helpers for hot loops -------------------------------------------

namespace small {

/// Exponent of p in n != 0.
inline int vp(std::int64_t n, std::int64_t p)
{
    int e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    return e;
}

inline std::int64_t mod(std::int64_t a, std::int64_t m)
{
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}

std::int64_t powmod(std::int64_t b, std::int64_t e, std::int64_t m);

/// Legendre symbol for an odd prime p < 2^31.
int legendre(std::int64_t a, std::int64_t p);

bool is_square(std::int64_t n);

/// Squarefree kernel with sign; n != 0.
std::int64_t squarefree_core(std::int64_t n);

inline bool square_in_quad(std::int64_t x, std::int64_t m)
{
    if (is_square(x)) return true;
    return !is_square(m) && is_square(x * m);
}

}  // namespace small

// Overloads so templated cores can run on either Int or int64.
inline bool is_square(std::int64_t n) { return small::is_square(n); }
inline bool is_square(const Int& n) { return n > 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0; }
inline bool square_in_quad(std::int64_t x, std::int64_t m) { return small::square_in_quad(x, m); }
inline bool square_in_quad(const Int& x, const Int& m) { return is_square_in_quad(Rat(x), Rat(m)); }

}  // namespace dp4
