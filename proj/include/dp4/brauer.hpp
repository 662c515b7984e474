#pragma once

// Br X_a / Br Q for the family: trivial, Z/2 or (Z/2)^2.

#include "dp4/surface.hpp"

#include <variant>

namespace dp4 {

/// The quaternion algebra (a0 X^2 + a2, second) over Q(X), X = s/t.
struct QuaternionDesc {
    Int a0, a2;
    Int second;  // -a0 a4 d

    /// First entry evaluated at (s:t), homogenized: a0 s^2 + a2 t^2.
    Int first_at(const Int& s, const Int& t) const { return a0 * s * s + a2 * t * t; }
};

struct BrTrivial {};

struct BrZ2 {
    QuaternionDesc gen;
};

/// Order 4. The surface then carries an obvious rational point.
struct BrZ2xZ2 {
    ProjPoint forced_point;
};

using BrauerClass = std::variant<BrTrivial, BrZ2, BrZ2xZ2>;

int order(const BrauerClass& c);

/// Residues of the generator along the two ramified fibres, as membership
/// of -a0 a4 d in Q(sqrt(-a0 a2))*^2 and of -a1 a4 d in Q(sqrt(-a1 a3))*^2.
struct ResidueData {
    Int value_first, field_first;    // -a0 a4 d, -a0 a2
    Int value_second, field_second;  // -a1 a4 d, -a1 a3
    bool trivial_first, trivial_second;
};

ResidueData residues(const Surface& S);

BrauerClass brauer_class(const Surface& S);

/// Order of Br X_a / Br Q from the coefficients alone; same branch logic as
/// brauer_class. T is Int or std::int64_t (census hot loop).
template <class T>
int brauer_order(const std::array<T, 5>& a, const T& d)
{
    const T m02 = -a[0] * a[2], m13 = -a[1] * a[3], p01 = a[0] * a[1], p23 = a[2] * a[3];
    const T r0 = -a[0] * a[4] * d;
    const bool sq01 = is_square(p01), sq02 = is_square(m02), sq13 = is_square(m13);
    if (sq01 && is_square(p23) && sq02 && !is_square(r0)) return 4;
    const T r1 = -a[1] * a[4] * d;
    if (!square_in_quad(r0, m02) && !square_in_quad(r1, m13) && !(sq02 && sq13 && sq01)) return 2;
    return 1;
}

/// The point over (s:t) = (1 : sqrt(-a0/a2)) with (x:y:z) = (1:0:0) on the
/// first conic bundle. Throws std::invalid_argument unless -a0 a2 is a square.
ProjPoint order4_point(const Surface& S);

}  // namespace dp4
