#include "dp4/bm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dp4 {

namespace {

void require_z2(const Surface& S)
{
    if (brauer_order(S.a(), S.d()) != 2) throw WrongBrauerClass();
}

// Fibre of the first bundle over (s:t) has a Q_v-point (degenerate fibres
// with B = 0 always do; A = 0 is excluded by the caller).
bool fiber_soluble_at(const FiberConic& F, const Place& v)
{
    if (F.B == 0) return true;
    return conic_soluble_local(F, v);
}

// Rational parameters meeting every interval of P^1(R) cut out by the real
// zeros of cs u^2 + ct, for the given forms.
std::vector<FiberParam> real_sample_params(const std::vector<DiagonalForm>& forms)
{
    std::vector<long double> crit;
    for (const auto& f : forms) {
        const long double q = -f.ct.get_d() / f.cs.get_d();
        if (q > 0) {
            crit.push_back(std::sqrt(q));
            crit.push_back(-std::sqrt(q));
        }
    }
    std::sort(crit.begin(), crit.end());
    std::vector<FiberParam> out{{Int(1), Int(0)}, {Int(0), Int(1)}};
    auto rational_in = [&](long double lo, long double hi) {
        const long double mid = (lo + hi) / 2;
        Int den = 1;
        while (den < (Int(1) << 60) && (hi - lo) * den.get_d() < 8) den *= 2;
        Int num;
        mpz_set_d(num.get_mpz_t(), static_cast<double>(std::round(mid * den.get_d())));
        Int g = gcd(num, den);
        if (g == 0) g = 1;
        out.push_back(FiberParam{num / g, den / g});
    };
    if (!crit.empty()) {
        rational_in(crit.front() - 2, crit.front());
        rational_in(crit.back(), crit.back() + 2);
        for (std::size_t i = 0; i + 1 < crit.size(); ++i)
            if (crit[i] < crit[i + 1]) rational_in(crit[i], crit[i + 1]);
    }
    return out;
}

void record(ValueSet& vs, InvariantValue val, const Int& s, const Int& t)
{
    if (vs.attained.insert(val).second) vs.witnesses.push_back({val, FiberParam{s, t}});
}

template <class Z>
std::optional<std::array<Z, 3>> bounded_conic_search(const Z& A, const Z& B, const Z& C, long H)
{
    auto isqrt_exact = [](const Z& q, Z& r) {
        if (q < 0) return false;
        if constexpr (std::is_same_v<Z, Int>) {
            if (!mpz_perfect_square_p(q.get_mpz_t())) return false;
            r = sqrt(q);
            return true;
        } else {
            auto v = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(q)));
            while (v * v > q) --v;
            while ((v + 1) * (v + 1) <= q) ++v;
            r = v;
            return v * v == q;
        }
    };
    for (long h = 1; h <= H; ++h) {
        // Pairs (x, y) with max(x, y) = h, x, y >= 0.
        for (long other = 0; other <= h; ++other) {
            for (int swap = 0; swap < 2; ++swap) {
                if (swap && other == h) continue;
                const Z x = swap ? Z(other) : Z(h), y = swap ? Z(h) : Z(other);
                const Z num = -(A * x * x + B * y * y);
                if (num % C != 0) continue;
                Z z;
                if (!isqrt_exact(num / C, z) || z > H) continue;
                return std::array<Z, 3>{x, y, z};
            }
        }
    }
    // Solutions with x = y = 0 force z = 0; none left.
    return std::nullopt;
}

// Parameters (s:t) of height exactly h, coprime, normalized with t >= 0 and
// s > 0 when t = 0.
template <class F>
bool for_each_param_of_height(long h, F&& f)
{
    auto coprime = [](long x, long y) { return std::gcd(x, y) == 1; };
    for (long t = 0; t <= h; ++t) {
        for (long s = -h; s <= h; ++s) {
            if (std::max(std::labs(s), t) != h) continue;
            if (t == 0 && s != 1) continue;
            if (!coprime(std::labs(s), t)) continue;
            if (f(Int(s), Int(t))) return true;
        }
    }
    return false;
}

}  // namespace

bool conic_soluble_local(const FiberConic& c, const Place& v)
{
    if (c.degenerate()) throw std::invalid_argument("conic_soluble_local: degenerate conic");
    return hilbert(Rat(-c.A * c.C), Rat(-c.B * c.C), v) == 1;
}

bool conic_soluble_everywhere(const FiberConic& c)
{
    if (!conic_soluble_local(c, Place::real())) return false;
    std::set<Int> primes{Int(2)};
    for (const Int* x : {&c.A, &c.B, &c.C})
        for (const Int& p : prime_divisors(*x)) primes.insert(p);
    for (const Int& p : primes)
        if (!conic_soluble_local(c, Place::finite(p))) return false;
    return true;
}

std::optional<InvariantValue> fiber_invariant(const Surface& S, const Place& v, const Int& s, const Int& t)
{
    require_z2(S);
    if (s == 0 && t == 0) throw std::invalid_argument("fiber_invariant: (s:t) = (0:0)");
    const FiberConic F = fiber_conic(S, Fibration::Pi1, s, t);
    if (F.A == 0 || !fiber_soluble_at(F, v)) return std::nullopt;
    return InvariantValue::from_hilbert(hilbert(Rat(F.A), Rat(-S.a(0) * S.a(4) * S.d()), v));
}

int default_depth(const Surface& S, const Int& p)
{
    return vp(Int(2 * S.a(0) * S.a(2) * S.a(4) * S.d()), p) + 3;
}

ValueSet invariant_value_set(const Surface& S, const Place& v, int depth)
{
    require_z2(S);
    ValueSet vs;
    auto visit = [&](const Int& s, const Int& t) {
        if (auto val = fiber_invariant(S, v, s, t)) record(vs, *val, s, t);
        return vs.surjective();
    };
    if (v.is_real()) {
        auto [x_form, y_form] = fiber_forms(S, Fibration::Pi1);
        for (const auto& fp : real_sample_params({x_form, y_form}))
            if (visit(fp.s, fp.t)) break;
    } else {
        const Int& p = v.prime();
        const int K = depth > 0 ? depth : default_depth(S, p);
        Int pK;
        mpz_pow_ui(pK.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(K));
        bool done = false;
        for (Int t = 0; t < pK && !done; ++t) done = visit(Int(1), t);
        for (Int s = 0; s < pK / p && !done; ++s) done = visit(p * s, Int(1));
    }
    if (vs.attained.empty()) throw EmptyValueSet(v);
    return vs;
}

std::optional<Int> no_obstruction_certificate(const Surface& S)
{
    const Int guard = S.a(0) * S.a(1) * S.a(2) * S.a(3) * S.d();
    for (const auto& [p, e] : factorize(S.a(4)).factors)
        if (p > 7 && e % 2 == 1 && !mpz_divisible_p(guard.get_mpz_t(), p.get_mpz_t())) return p;
    return std::nullopt;
}

const char* verdict_tag(const BMVerdict& v)
{
    static constexpr const char* tags[] = {"NoObstructionWAFails", "HPFails", "AllTrivial", "NotApplicable"};
    return tags[v.index()];
}

const char* to_string(NotApplicable::Reason r)
{
    return r == NotApplicable::Reason::NotLocallySoluble ? "not everywhere locally soluble" : "Br order 4";
}

BMVerdict bm_verdict(const Surface& S, const BMOptions& opts)
{
    const LocalSolubility loc = everywhere_locally_soluble(S, opts.local);
    if (!loc.soluble) return NotApplicable{NotApplicable::Reason::NotLocallySoluble, std::nullopt};
    const BrauerClass br = brauer_class(S);
    if (std::holds_alternative<BrTrivial>(br)) return AllTrivial{};
    if (const auto* z = std::get_if<BrZ2xZ2>(&br))
        return NotApplicable{NotApplicable::Reason::BrauerOrderFour, z->forced_point};
    if (auto p = no_obstruction_certificate(S)) return NoObstructionWAFails{Place::finite(*p), true};

    HPFails constants;
    int total = 0;
    for (const Place& v : bad_places(S)) {
        int depth = v.is_real() ? 0 : (opts.depth > 0 ? opts.depth : default_depth(S, v.prime()));
        std::optional<ValueSet> vs;
        for (int extra = 0; !vs; extra += 2) {
            try {
                vs = invariant_value_set(S, v, depth + extra);
            } catch (const EmptyValueSet&) {
                if (v.is_real() || extra >= 6) throw;
            }
        }
        if (vs->surjective()) return NoObstructionWAFails{v, false};
        const InvariantValue c = *vs->attained.begin();
        constants.constants.push_back({v, c});
        total += c.half;
    }
    if (total % 2) return constants;
    return AllTrivial{};
}

std::optional<std::array<Int, 3>> solve_conic_Q(const FiberConic& c, long H)
{
    if (c.A == 0) return std::array<Int, 3>{Int(1), Int(0), Int(0)};
    if (c.B == 0) return std::array<Int, 3>{Int(0), Int(1), Int(0)};
    if (c.C == 0) return std::array<Int, 3>{Int(0), Int(0), Int(1)};
    const SquarefreeSplit a = squarefree_part(c.A), b = squarefree_part(c.B), k = squarefree_part(c.C);
    Int g = gcd(gcd(a.core, b.core), k.core);
    const Int A = a.core / g, B = b.core / g, C = k.core / g;

    std::optional<std::array<Int, 3>> red;
    const Int limit = (Int(1) << 61) / (Int(H) * H + 1);
    if (abs(A) < limit && abs(B) < limit && abs(C) < limit) {
        if (auto r = bounded_conic_search<std::int64_t>(A.get_si(), B.get_si(), C.get_si(), H))
            red = std::array<Int, 3>{Int((*r)[0]), Int((*r)[1]), Int((*r)[2])};
    } else {
        red = bounded_conic_search<Int>(A, B, C, H);
    }
    if (!red) return std::nullopt;
    // A_orig x^2 = core * (root x)^2: undo the square roots.
    std::array<Int, 3> sol{(*red)[0] * b.root * k.root, (*red)[1] * a.root * k.root, (*red)[2] * a.root * b.root};
    Int h = gcd(gcd(sol[0], sol[1]), sol[2]);
    for (Int& x : sol) x /= h;
    if (c.A * sol[0] * sol[0] + c.B * sol[1] * sol[1] + c.C * sol[2] * sol[2] != 0)
        throw std::logic_error("solve_conic_Q: reconstruction failed");
    return sol;
}

std::optional<ProjPoint> search_rational_point(const Surface& S, long H_fiber, long H_conic)
{
    std::optional<ProjPoint> found;
    for (long h = 1; h <= H_fiber && !found; ++h) {
        for_each_param_of_height(h, [&](const Int& s, const Int& t) {
            for (Fibration f : {Fibration::Pi1, Fibration::Pi2}) {
                const FiberConic F = fiber_conic(S, f, s, t);
                std::optional<std::array<Int, 3>> sol;
                if (F.A == 0 || F.B == 0 || conic_soluble_everywhere(F)) sol = solve_conic_Q(F, H_conic);
                if (!sol) continue;
                ProjPoint P = embed_point(f, Rat(s), Rat(t), Rat((*sol)[0]), Rat((*sol)[1]), Rat((*sol)[2]));
                if (!on_surface(S, P)) throw std::logic_error("search_rational_point: point not on surface");
                found = P;
                return true;
            }
            return false;
        });
    }
    return found;
}

bool no_soluble_fiber_up_to(const Surface& S, long H)
{
    for (long h = 1; h <= H; ++h) {
        const bool hit = for_each_param_of_height(h, [&](const Int& s, const Int& t) {
            for (Fibration f : {Fibration::Pi1, Fibration::Pi2}) {
                const FiberConic F = fiber_conic(S, f, s, t);
                if (F.A == 0 || F.B == 0 || conic_soluble_everywhere(F)) return true;
            }
            return false;
        });
        if (hit) return false;
    }
    return true;
}

std::pair<long, long> lemma_surjectivity_witnesses(long p, long a, long b, long c)
{
    if (p <= 7 || !is_prime(Int(p))) throw std::invalid_argument("lemma witnesses: p must be a prime > 7");
    auto red = [p](long x) { return small::mod(x, p); };
    if (red(a) == 0 || red(b) == 0 || red(c) == 0) throw std::invalid_argument("lemma witnesses: a, b, c must be units");
    std::vector<int> chi(static_cast<std::size_t>(p));
    for (long x = 0; x < p; ++x) chi[static_cast<std::size_t>(x)] = small::legendre(x, p);
    std::optional<long> u1, u2;
    for (long u = 0; u < p && !(u1 && u2); ++u) {
        const long x = red(u * u + b), y = red(u * u + c);
        if (x == 0 || y == 0) continue;
        if (chi[static_cast<std::size_t>(red(red(a * x) * y))] != 1) continue;
        if (chi[static_cast<std::size_t>(x)] == 1) {
            if (!u1) u1 = u;
        } else if (!u2) {
            u2 = u;
        }
    }
    if (!u1 || !u2)
        throw LemmaWitnessNotFound("no witness for p=" + std::to_string(p) + " a=" + std::to_string(red(a)) +
                                   " b=" + std::to_string(red(b)) + " c=" + std::to_string(red(c)));
    return {*u1, *u2};
}

}  // namespace dp4
