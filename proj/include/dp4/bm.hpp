#pragma once

// Brauer-Manin evaluation for the Z/2 generator (a0 (s/t)^2 + a2, -a0 a4 d):
// local invariants on fibres of the first conic bundle, their value sets
// per place, the resulting HP/WA verdict, and rational point search through
// the fibre conics.

#include "dp4/brauer.hpp"
#include "dp4/localsolve.hpp"

#include <optional>
#include <set>
#include <stdexcept>
#include <variant>
#include <vector>

namespace dp4 {

/// Local invariant in (1/2)Z/Z, stored as 0 or 1 half-units.
struct InvariantValue {
    int half = 0;

    static InvariantValue from_hilbert(int h) { return InvariantValue{h == 1 ? 0 : 1}; }
    std::string to_string() const { return half ? "1/2" : "0"; }
    friend bool operator==(InvariantValue x, InvariantValue y) { return x.half == y.half; }
    friend bool operator<(InvariantValue x, InvariantValue y) { return x.half < y.half; }
};

struct WrongBrauerClass : std::invalid_argument {
    WrongBrauerClass() : std::invalid_argument("Brauer class of the surface is not Z/2") {}
};

struct EmptyValueSet : std::runtime_error {
    explicit EmptyValueSet(const Place& v)
        : std::runtime_error("no locally soluble fibre found at place " + v.to_string() + "; raise the depth")
    {
    }
};

/// Fibre parameter (s:t), s,t coprime.
struct FiberParam {
    Int s, t;
};

struct ValueSet {
    std::set<InvariantValue> attained;
    std::vector<std::pair<InvariantValue, FiberParam>> witnesses;  // one per attained value

    bool surjective() const { return attained.size() == 2; }
};

/// Ax^2 + By^2 + Cz^2 = 0 has a nontrivial Q_v-point. Requires ABC != 0.
bool conic_soluble_local(const FiberConic& c, const Place& v);

/// Soluble at every place (checked at R, 2 and the primes dividing ABC).
bool conic_soluble_everywhere(const FiberConic& c);

/// inv_v of the generator at a point of the first-bundle fibre over (s:t).
/// nullopt when a0 s^2 + a2 t^2 = 0 or the fibre has no Q_v-point.
/// Throws WrongBrauerClass unless Br X/Br Q = Z/2.
std::optional<InvariantValue> fiber_invariant(const Surface& S, const Place& v, const Int& s, const Int& t);

/// Default p-adic depth: v_p(2 a0 a2 a4 d) + 3.
int default_depth(const Surface& S, const Int& p);

/// Invariants attained over fibre parameters representing P^1(Z/p^depth);
/// depth <= 0 selects default_depth. At the real place the set is decided by
/// the sign pattern of a0 s^2 + a2 t^2, a3 s^2 + a1 t^2 and a4, each witnessed
/// by an exact rational parameter. Throws EmptyValueSet if nothing is found.
ValueSet invariant_value_set(const Surface& S, const Place& v, int depth = 0);

/// Smallest prime p > 7 with v_p(a4) odd and p not dividing a0 a1 a2 a3 d.
std::optional<Int> no_obstruction_certificate(const Surface& S);

struct NoObstructionWAFails {
    Place place;     // place where the invariant takes both values
    bool certified;  // place found by no_obstruction_certificate
};

struct HPFails {
    std::vector<std::pair<Place, InvariantValue>> constants;
};

struct AllTrivial {};

struct NotApplicable {
    enum class Reason { NotLocallySoluble, BrauerOrderFour } reason;
    std::optional<ProjPoint> point;
};

using BMVerdict = std::variant<NoObstructionWAFails, HPFails, AllTrivial, NotApplicable>;

const char* verdict_tag(const BMVerdict& v);
const char* to_string(NotApplicable::Reason r);

struct BMOptions {
    LocalSolubilityOptions local;
    int depth = 0;  // p-adic value-set depth, 0 = default_depth
};

/// Verdict for the surface. A trivial Brauer group yields AllTrivial; order
/// four yields NotApplicable carrying the forced rational point.
BMVerdict bm_verdict(const Surface& S, const BMOptions& opts = {});

/// Bounded search for a nontrivial solution of Ax^2 + By^2 + Cz^2 = 0 with
/// |x|, |y|, |z| <= H after reducing A, B, C to squarefree parts. The
/// returned triple solves the original conic.
std::optional<std::array<Int, 3>> solve_conic_Q(const FiberConic& c, long H);

/// Walks fibres (s:t) of both bundles by increasing height <= H_fiber and
/// solves the everywhere locally soluble ones with solve_conic_Q(., H_conic).
/// Any returned point is verified on X_a.
std::optional<ProjPoint> search_rational_point(const Surface& S, long H_fiber, long H_conic);

/// True iff no fibre of either bundle with height <= H is soluble at every
/// place. For a surface with an obstruction to the Hasse principle this must
/// hold: such a fibre would carry a rational point.
bool no_soluble_fiber_up_to(const Surface& S, long H);

struct LemmaWitnessNotFound : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// For p > 7 and units a, b, c mod p: u1 with u1^2 + b a nonzero square and
/// u2 with u2^2 + b a nonsquare, both with u^2 + c a unit and
/// a (u^2 + b)(u^2 + c) a nonzero square. Exhaustive scan; throws
/// LemmaWitnessNotFound if either is missing.
std::pair<long, long> lemma_surjectivity_witnesses(long p, long a, long b, long c);

}  // namespace dp4
