#pragma once

// The quartic del Pezzo surface X_a in P^4 cut out by
//     x0 x1 - x2 x3 = 0,   a0 x0^2 + a1 x1^2 + a2 x2^2 + a3 x3^2 + a4 x4^2 = 0,
// and its two conic bundle structures over P^1.

#include "dp4/numth.hpp"

#include <array>
#include <stdexcept>
#include <string>

namespace dp4 {

struct NotSmooth : std::domain_error {
    NotSmooth() : std::domain_error("surface is not smooth: d * a0 a1 a2 a3 a4 = 0") {}
};

struct ZeroVector : std::domain_error {
    ZeroVector() : std::domain_error("coefficient vector is zero") {}
};

/// Primitive integer point of P^4, first nonzero coordinate positive.
struct ProjPoint {
    std::array<Int, 5> x;

    /// Normalizes any nonzero integer vector; throws on the zero vector.
    static ProjPoint from(std::array<Int, 5> v);
    std::string to_string() const;

    friend bool operator==(const ProjPoint& p, const ProjPoint& q) { return p.x == q.x; }
};

/// Smooth member of the family. Invariants: gcd(a) = 1, d = a0 a1 - a2 a3,
/// d * prod(a) != 0. Only constructible through new_surface().
class Surface {
public:
    const std::array<Int, 5>& a() const { return a_; }
    const Int& a(int i) const { return a_[static_cast<std::size_t>(i)]; }
    const Int& d() const { return d_; }
    std::string to_string() const;

    friend Surface new_surface(const std::array<Int, 5>& raw);

private:
    Surface(std::array<Int, 5> a, Int d) : a_(std::move(a)), d_(std::move(d)) {}

    std::array<Int, 5> a_;
    Int d_;
};

Surface new_surface(const std::array<Int, 5>& raw);
Surface new_surface(std::initializer_list<long> raw);

/// Smoothness of an arbitrary (not necessarily primitive) vector.
bool is_smooth(const std::array<Int, 5>& a);

enum class Fibration { Pi1, Pi2 };

/// Fiber over (s:t): A x^2 + B y^2 + C z^2 = 0.
struct FiberConic {
    Int A, B, C;

    bool degenerate() const { return A * B * C == 0; }
};

/// Binary quadratic form cs * s^2 + ct * t^2.
struct DiagonalForm {
    Int cs, ct;

    Int operator()(const Int& s, const Int& t) const { return cs * s * s + ct * t * t; }
};

/// Factors of the discriminant Delta(s,t) of a fibration, with the values
/// -cs*ct whose square roots generate the residue fields of their zeros.
struct DiscriminantLocus {
    DiagonalForm first, second;
    Int first_field, second_field;
    SquareClass first_class, second_class;
};

/// Coefficient pairs of the x^2 and y^2 terms of a fibration's fibers.
std::pair<DiagonalForm, DiagonalForm> fiber_forms(const Surface& S, Fibration f);

FiberConic fiber_conic(const Surface& S, Fibration f, const Int& s, const Int& t);

DiscriminantLocus discriminant_locus(const Surface& S, Fibration f);

/// Image of (s,t; x,y,z) under the fibration's embedding into P^4.
ProjPoint embed_point(Fibration f, const Rat& s, const Rat& t, const Rat& x, const Rat& y, const Rat& z);

bool on_surface(const std::array<Int, 5>& a, const ProjPoint& P);
inline bool on_surface(const Surface& S, const ProjPoint& P) { return on_surface(S.a(), P); }

}  // namespace dp4
