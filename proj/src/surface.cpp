#include "dp4/surface.hpp"

#include <sstream>

namespace dp4 {

ProjPoint ProjPoint::from(std::array<Int, 5> v)
{
    Int g = gcd_all(v);
    if (g == 0) throw std::domain_error("projective point: zero vector");
    int lead = 0;
    while (v[static_cast<std::size_t>(lead)] == 0) ++lead;
    if (v[static_cast<std::size_t>(lead)] < 0) g = -g;
    for (Int& c : v) c /= g;
    return ProjPoint{std::move(v)};
}

std::string ProjPoint::to_string() const
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < 5; ++i) os << (i ? ":" : "") << x[i];
    os << ')';
    return os.str();
}

std::string Surface::to_string() const
{
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < 5; ++i) os << (i ? "," : "") << a_[i];
    os << ')';
    return os.str();
}

bool is_smooth(const std::array<Int, 5>& a)
{
    Int prod = a[0] * a[1] - a[2] * a[3];
    for (const Int& c : a) prod *= c;
    return prod != 0;
}

Surface new_surface(const std::array<Int, 5>& raw)
{
    Int g = gcd_all(raw);
    if (g == 0) throw ZeroVector();
    std::array<Int, 5> a;
    for (std::size_t i = 0; i < 5; ++i) a[i] = raw[i] / g;
    if (!is_smooth(a)) throw NotSmooth();
    Int d = a[0] * a[1] - a[2] * a[3];
    return Surface(std::move(a), std::move(d));
}

Surface new_surface(std::initializer_list<long> raw)
{
    if (raw.size() != 5) throw std::invalid_argument("surface needs five coefficients");
    std::array<Int, 5> a;
    std::size_t i = 0;
    for (long v : raw) a[i++] = v;
    return new_surface(a);
}

std::pair<DiagonalForm, DiagonalForm> fiber_forms(const Surface& S, Fibration f)
{
    const auto& a = S.a();
    if (f == Fibration::Pi1) return {DiagonalForm{a[0], a[2]}, DiagonalForm{a[3], a[1]}};
    return {DiagonalForm{a[3], a[0]}, DiagonalForm{a[1], a[2]}};
}

FiberConic fiber_conic(const Surface& S, Fibration f, const Int& s, const Int& t)
{
    if (s == 0 && t == 0) throw std::invalid_argument("fiber parameter (0:0)");
    auto [x_form, y_form] = fiber_forms(S, f);
    return FiberConic{x_form(s, t), y_form(s, t), S.a(4)};
}

DiscriminantLocus discriminant_locus(const Surface& S, Fibration f)
{
    auto [first, second] = fiber_forms(S, f);
    Int m1 = -first.cs * first.ct;
    Int m2 = -second.cs * second.ct;
    return DiscriminantLocus{first, second, m1, m2, square_class(Rat(m1)), square_class(Rat(m2))};
}

ProjPoint embed_point(Fibration f, const Rat& s, const Rat& t, const Rat& x, const Rat& y, const Rat& z)
{
    if (s == 0 && t == 0) throw std::invalid_argument("embed_point: (s,t) = 0");
    if (x == 0 && y == 0 && z == 0) throw std::invalid_argument("embed_point: (x,y,z) = 0");
    std::array<Rat, 5> q = f == Fibration::Pi1 ? std::array<Rat, 5>{s * x, t * y, t * x, s * y, z}
                                               : std::array<Rat, 5>{t * x, s * y, t * y, s * x, z};
    Int l = 1;
    for (const Rat& c : q) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    std::array<Int, 5> v;
    for (std::size_t i = 0; i < 5; ++i) {
        Rat scaled = q[i] * l;
        v[i] = scaled.get_num();
    }
    return ProjPoint::from(std::move(v));
}

bool on_surface(const std::array<Int, 5>& a, const ProjPoint& P)
{
    const auto& x = P.x;
    if (x[0] * x[1] - x[2] * x[3] != 0) return false;
    Int q = 0;
    for (std::size_t i = 0; i < 5; ++i) q += a[i] * x[i] * x[i];
    return q == 0;
}

}  // namespace dp4
