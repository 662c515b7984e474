#include "dp4/brauer.hpp"

namespace dp4 {

int order(const BrauerClass& c)
{
    if (std::holds_alternative<BrTrivial>(c)) return 1;
    return std::holds_alternative<BrZ2>(c) ? 2 : 4;
}

ResidueData residues(const Surface& S)
{
    const auto& a = S.a();
    ResidueData r{-a[0] * a[4] * S.d(), -a[0] * a[2], -a[1] * a[4] * S.d(), -a[1] * a[3], false, false};
    r.trivial_first = square_in_quad(r.value_first, r.field_first);
    r.trivial_second = square_in_quad(r.value_second, r.field_second);
    return r;
}

BrauerClass brauer_class(const Surface& S)
{
    switch (brauer_order(S.a(), S.d())) {
    case 4: return BrZ2xZ2{order4_point(S)};
    case 2: return BrZ2{QuaternionDesc{S.a(0), S.a(2), -S.a(0) * S.a(4) * S.d()}};
    default: return BrTrivial{};
    }
}

ProjPoint order4_point(const Surface& S)
{
    const Rat ratio = make_rat(-S.a(0), S.a(2));
    if (ratio <= 0 || !is_rational_square(ratio)) throw std::invalid_argument("order4_point: -a0/a2 is not a square");
    Int num = sqrt(Int(ratio.get_num())), den = sqrt(Int(ratio.get_den()));
    ProjPoint P = embed_point(Fibration::Pi1, Rat(den), Rat(num), Rat(1), Rat(0), Rat(0));
    if (!on_surface(S, P)) throw std::logic_error("order4_point: point not on surface");
    return P;
}

}  // namespace dp4
