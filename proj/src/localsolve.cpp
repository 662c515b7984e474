#include "dp4/localsolve.hpp"

#include <algorithm>
#include <limits>
#include <set>

namespace dp4 {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

// Permutations of indices 0..3 generated by swap(0,1) and the pair swap
// (0,1) <-> (2,3).
std::vector<std::array<int, 4>> valvec_symmetries()
{
    const std::array<int, 4> swap01{1, 0, 2, 3}, swap_pairs{2, 3, 0, 1};
    std::vector<std::array<int, 4>> group{{0, 1, 2, 3}};
    for (std::size_t n = 0; n < group.size(); ++n) {
        for (const auto& g : {swap01, swap_pairs}) {
            std::array<int, 4> h;
            for (std::size_t i = 0; i < 4; ++i) h[i] = group[n][static_cast<std::size_t>(g[i])];
            if (std::find(group.begin(), group.end(), h) == group.end()) group.push_back(h);
        }
    }
    return group;
}

bool valvec_before(const ValVec& x, const ValVec& y)
{
    int sx = 0, sy = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        sx += x[i];
        sy += y[i];
    }
    if (sx != sy) return sx < sy;
    return x > y;
}

std::array<std::array<i64, 5>, 2> jacobian_rows(const std::array<i64, 5>& x, const std::array<i64, 5>& a, i64 m)
{
    std::array<std::array<i64, 5>, 2> r{};
    r[0] = {x[1] % m, x[0] % m, small::mod(-x[3], m), small::mod(-x[2], m), 0};
    for (std::size_t i = 0; i < 5; ++i) r[1][i] = static_cast<i64>((i128)2 * a[i] % m * x[i] % m);
    return r;
}

// Smallest valuation among the 2x2 Jacobian minors at x (mod m = p^k);
// minors vanishing mod m are ignored. Returns e = -1 if all vanish.
std::pair<std::pair<int, int>, int> best_minor(const std::array<i64, 5>& x, const std::array<i64, 5>& a, i64 p,
                                               i64 m)
{
    auto J = jacobian_rows(x, a, m);
    std::pair<int, int> best{-1, -1};
    int best_e = -1;
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
            i128 det = (i128)J[0][ui] * J[1][uj] - (i128)J[0][uj] * J[1][ui];
            i64 r = static_cast<i64>(((det % m) + m) % m);
            if (r == 0) continue;
            int e = small::vp(r, p);
            if (best_e < 0 || e < best_e) {
                best_e = e;
                best = {i, j};
            }
        }
    }
    return {best, best_e};
}

i64 eval_f1(const std::array<i64, 5>& x, i64 m)
{
    i128 v = (i128)x[0] * x[1] - (i128)x[2] * x[3];
    return static_cast<i64>(((v % m) + m) % m);
}

i64 eval_f2(const std::array<i64, 5>& x, const std::array<i64, 5>& a, i64 m)
{
    i128 v = 0;
    for (std::size_t i = 0; i < 5; ++i) v += (i128)(a[i] % m) * ((i128)x[i] * x[i] % m) % m;
    return static_cast<i64>(v % m);
}

struct Frontier {
    std::vector<std::array<i64, 5>> points;
    std::vector<std::uint8_t> chart;
};

}  // namespace

const char* to_string(PropLabel l)
{
    switch (l) {
    case PropLabel::ii: return "ii";
    case PropLabel::iii: return "iii";
    case PropLabel::iv: return "iv";
    }
    return "?";
}

UndecidedError::UndecidedError(Undecided u)
    : std::runtime_error("oracle undecided at place " + u.place.to_string() + " up to level " +
                         std::to_string(u.k_max)),
      info_(std::move(u))
{
}

ValVec normalize_valvec(const ValVec& v)
{
    static const auto symmetries = valvec_symmetries();
    std::optional<ValVec> best;
    for (const auto& perm : symmetries) {
        ValVec w;
        for (std::size_t i = 0; i < 4; ++i) w[i] = v[static_cast<std::size_t>(perm[i])];
        w[4] = v[4];
        const int D = (w[0] + w[1]) - (w[2] + w[3]);
        for (int flip = 0; flip < 2; ++flip) {
            std::array<int, 5> eps;
            for (std::size_t i = 0; i < 5; ++i) eps[i] = (w[i] + flip) & 1;
            const int s23 = std::max(eps[2] + eps[3], eps[0] + eps[1] - D);
            const int s01 = D + s23;
            ValVec cand{s01 - eps[1], eps[1], s23 - eps[3], eps[3], eps[4]};
            if (!best || valvec_before(cand, *best)) best = cand;
        }
    }
    return *best;
}

LocalVerdict real_soluble(const Surface& S)
{
    bool pos = false, neg = false;
    for (const Int& c : S.a()) (c > 0 ? pos : neg) = true;
    const bool mixed = pos && neg;
    return LocalVerdict{Place::real(), mixed, SignCase{mixed}};
}

OddPrimeData odd_prime_data(const std::array<Int, 5>& a, const Int& p)
{
    OddPrimeData d{};
    for (std::size_t i = 0; i < 5; ++i) {
        Int u = a[i];
        d.val[i] = static_cast<int>(mpz_remove(u.get_mpz_t(), u.get_mpz_t(), p.get_mpz_t()));
        d.chi[i] = legendre(u, p);
    }
    d.chi_minus_one = legendre(Int(-1), p);
    Int dd = a[0] * a[1] - a[2] * a[3];
    d.val_d = dd == 0 ? std::numeric_limits<int>::max()
                      : static_cast<int>(mpz_remove(dd.get_mpz_t(), dd.get_mpz_t(), p.get_mpz_t()));
    return d;
}

OddPrimeData odd_prime_data(const std::array<i64, 5>& a, i64 p)
{
    OddPrimeData d{};
    for (std::size_t i = 0; i < 5; ++i) {
        i64 u = a[i];
        int e = 0;
        while (u % p == 0) {
            u /= p;
            ++e;
        }
        d.val[i] = e;
        d.chi[i] = small::legendre(u, p);
    }
    d.chi_minus_one = p % 4 == 1 ? 1 : -1;
    i128 dd = (i128)a[0] * a[1] - (i128)a[2] * a[3];
    d.val_d = 0;
    if (dd == 0) d.val_d = std::numeric_limits<int>::max();
    else
        while (dd % p == 0) {
            dd /= p;
            ++d.val_d;
        }
    return d;
}

std::optional<PropCase> odd_prime_insoluble_case(const OddPrimeData& data)
{
    const auto& v = data.val;
    auto par = [&](int i) { return v[static_cast<std::size_t>(i)] & 1; };
    auto val = [&](int i) { return v[static_cast<std::size_t>(i)]; };
    auto nb = [&](int i, int j) { return data.neg_bracket(i, j); };

    if (par(0) == par(1) && par(1) == par(2) && par(2) == par(3) && par(3) != par(4) &&
        val(0) + val(1) == val(2) + val(3) && data.val_d > val(0) + val(1) && nb(0, 2) == -1 && nb(0, 3) == -1 && nb(1, 2) == -1 && nb(1, 3) == -1)
        return PropCase{PropLabel::ii, {-1, -1, -1}, false};

    static constexpr std::array<std::array<int, 4>, 2> pairs{{{0, 1, 2, 3}, {2, 3, 0, 1}}};
    for (const auto& [i, j, l, m] : pairs) {
        if (!(par(i) == par(j) && par(j) == par(4))) continue;
        if (!(par(l) == par(m) && par(l) != par(i))) continue;
        const int lhs = val(i) + val(j), rhs = val(l) + val(m);
        if (nb(i, 4) != -1 || nb(j, 4) != -1) continue;
        if (lhs == rhs) return PropCase{PropLabel::iii, {i, j, -1}, false};
        if (lhs > rhs && nb(l, m) == -1) return PropCase{PropLabel::iii, {i, j, -1}, true};
    }

    static constexpr std::array<std::array<int, 4>, 4> triples{{{0, 1, 2, 3}, {0, 1, 3, 2}, {2, 3, 0, 1}, {2, 3, 1, 0}}};
    for (const auto& [i, j, k, l] : triples) {
        if (!(par(i) == par(j) && par(j) == par(k))) continue;
        if (!(par(l) == par(4) && par(l) != par(i))) continue;
        if (!(val(i) + val(j) > val(k) + val(l))) continue;
        if (nb(i, k) == -1 && nb(j, k) == -1 && nb(l, 4) == -1) return PropCase{PropLabel::iv, {i, j, k}, false};
    }
    return std::nullopt;
}

LocalVerdict odd_p_soluble(const Surface& S, const Int& p)
{
    if (p == 2) throw std::invalid_argument("odd_p_soluble: p = 2");
    auto hit = odd_prime_insoluble_case(odd_prime_data(S.a(), p));
    if (hit) return LocalVerdict{Place::finite(p), false, *hit};
    return LocalVerdict{Place::finite(p), true, NoCaseMatched{}};
}

namespace {

// Lifting of chart points mod p^k to solutions mod p^{k+1}. For k >= 1,
// f(x + p^k delta) = f(x) + p^k grad f(x) . delta  (mod p^{k+1}).
class Lifter {
public:
    Lifter(const std::array<i64, 5>& a_mod, i64 p, int precision) : p_(p), a_(a_mod)
    {
        pk_.push_back(1);
        for (int k = 1; k <= precision; ++k) pk_.push_back(pk_.back() * p);
    }

    i64 p() const { return p_; }
    int precision() const { return static_cast<int>(pk_.size()) - 1; }
    i64 pk(int k) const { return pk_[static_cast<std::size_t>(k)]; }

    std::array<i64, 5> coeffs(int k) const
    {
        std::array<i64, 5> r;
        for (std::size_t i = 0; i < 5; ++i) r[i] = a_[i] % pk(k);
        return r;
    }

    // Calls emit(y) for every solution y mod p^{k+1} lying over x, in a fixed
    // order; stops early when emit returns true.
    template <class Emit>
    bool children(const std::array<i64, 5>& x, int chart, int k, Emit&& emit) const
    {
        const i64 m = pk(k), m1 = pk(k + 1);
        const auto ak1 = coeffs(k + 1);
        const i64 c1 = eval_f1(x, m1) / m, c2 = eval_f2(x, ak1, m1) / m;
        auto J = jacobian_rows(x, ak1, p_);
        std::array<std::size_t, 4> fr{};
        for (int j = 0, t = 0; j < 5; ++j)
            if (j != chart) fr[static_cast<std::size_t>(t++)] = static_cast<std::size_t>(j);
        const std::array<i64, 4> g0{J[0][fr[0]], J[0][fr[1]], J[0][fr[2]], J[0][fr[3]]};
        const std::array<i64, 4> g1{J[1][fr[0]], J[1][fr[1]], J[1][fr[2]], J[1][fr[3]]};
        const i64 p = p_;
        for (i64 d0 = 0; d0 < p; ++d0) {
            const i64 s0 = c1 + g0[0] * d0, t0 = c2 + g1[0] * d0;
            for (i64 d1 = 0; d1 < p; ++d1) {
                const i64 s1 = s0 + g0[1] * d1, t1 = t0 + g1[1] * d1;
                for (i64 d2 = 0; d2 < p; ++d2) {
                    const i64 s2 = (s1 + g0[2] * d2) % p, t2 = (t1 + g1[2] * d2) % p;
                    for (i64 d3 = 0; d3 < p; ++d3) {
                        if ((s2 + g0[3] * d3) % p != 0 || (t2 + g1[3] * d3) % p != 0) continue;
                        std::array<i64, 5> y = x;
                        y[fr[0]] += m * d0;
                        y[fr[1]] += m * d1;
                        y[fr[2]] += m * d2;
                        y[fr[3]] += m * d3;
                        if (emit(y)) return true;
                    }
                }
            }
        }
        return false;
    }

    // Depth-first search for a solution mod p^target over x (a solution mod
    // p^k).
    std::optional<std::array<i64, 5>> descend(const std::array<i64, 5>& x, int chart, int k, int target) const
    {
        if (k == target) return x;
        std::optional<std::array<i64, 5>> found;
        children(x, chart, k, [&](const std::array<i64, 5>& y) {
            found = descend(y, chart, k + 1, target);
            return found.has_value();
        });
        return found;
    }

private:
    i64 p_;
    std::array<i64, 5> a_;
    std::vector<i64> pk_;
};

}  // namespace

ResidueOracleRun padic_oracle_residues(const std::array<i64, 5>& a_mod, i64 p, int k_max, int precision,
                                       std::size_t frontier_cap)
{
    if (precision < k_max) throw std::invalid_argument("oracle: precision below k_max");
    const Lifter lift(a_mod, p, precision);

    // Level 1: chart c has x_c = 1 and x_j = 0 mod p for j < c.
    Frontier cur;
    {
        const auto a1 = lift.coeffs(1);
        for (int c = 0; c < 5; ++c) {
            i64 total = 1;
            for (int i = 0; i < 4 - c; ++i) total *= p;
            for (i64 idx = 0; idx < total; ++idx) {
                std::array<i64, 5> x{};
                x[static_cast<std::size_t>(c)] = 1;
                i64 r = idx;
                for (int j = 4; j > c; --j) {
                    x[static_cast<std::size_t>(j)] = r % p;
                    r /= p;
                }
                if (eval_f1(x, p) == 0 && eval_f2(x, a1, p) == 0) {
                    cur.points.push_back(x);
                    cur.chart.push_back(static_cast<std::uint8_t>(c));
                }
            }
        }
    }

    // A point whose best minor has known valuation e < k is settled by a
    // bounded search of its residue disk down to level 2e + 1: either a
    // Hensel witness appears there or the disk holds no solution at that
    // level. Only points with every minor vanishing mod p^k stay in the
    // breadth-first frontier.
    ResidueOracleRun run{ResidueOracleRun::Status::Undecided, 0};
    run.frontier = cur.points.size();
    int consulted = 1, pruned_level = 0;
    for (int k = 1;; ++k) {
        consulted = std::max(consulted, k);
        if (cur.points.empty()) {
            run.status = ResidueOracleRun::Status::Insoluble;
            run.level = std::max(k, pruned_level);
            run.consulted = std::max(consulted, run.level);
            return run;
        }
        const auto ak = lift.coeffs(k);
        Frontier open;
        for (std::size_t n = 0; n < cur.points.size(); ++n) {
            const auto& x = cur.points[n];
            auto [minor, e] = best_minor(x, ak, p, lift.pk(k));
            const int target = 2 * e + 1;
            if (e < 0 || target > precision) {
                open.points.push_back(x);
                open.chart.push_back(cur.chart[n]);
                continue;
            }
            consulted = std::max(consulted, target);
            auto hit = lift.descend(x, cur.chart[n], k, std::max(k, target));
            if (hit) {
                run.status = ResidueOracleRun::Status::Soluble;
                run.level = std::max(k, target);
                run.point = *hit;
                run.minor = minor;
                run.e = e;
                run.consulted = consulted;
                return run;
            }
            pruned_level = std::max(pruned_level, target);
        }
        if (open.points.empty()) {
            run.status = ResidueOracleRun::Status::Insoluble;
            run.level = std::max(k, pruned_level);
            run.consulted = std::max(consulted, run.level);
            return run;
        }
        if (k >= k_max) {
            run.level = k;
            run.consulted = consulted;
            run.frontier = open.points.size();
            return run;
        }
        Frontier next;
        for (std::size_t n = 0; n < open.points.size(); ++n) {
            lift.children(open.points[n], open.chart[n], k, [&](const std::array<i64, 5>& y) {
                next.points.push_back(y);
                next.chart.push_back(open.chart[n]);
                return false;
            });
            if (next.points.size() > frontier_cap) {
                run.level = k + 1;
                run.consulted = std::max(consulted, k + 1);
                run.frontier = next.points.size();
                return run;
            }
        }
        run.frontier = std::max(run.frontier, next.points.size());
        cur = std::move(next);
    }
}

int oracle_precision(std::int64_t p, int k_max)
{
    int L = 0;
    i128 pk = 1;
    while (L < 2 * k_max + 1 && pk * p < (i128(1) << 62)) {
        pk *= p;
        ++L;
    }
    return L;
}

OracleResult padic_oracle(const Surface& S, const Int& p, int k_max, const OracleOptions& opts)
{
    if (k_max < 1) throw std::invalid_argument("padic_oracle: k_max must be positive");
    if (p >= (Int(1) << 31)) throw std::invalid_argument("padic_oracle: prime too large");
    const i64 pp = p.get_si();
    const int precision = oracle_precision(pp, k_max);
    if (precision < k_max) throw std::invalid_argument("padic_oracle: p^k_max exceeds 2^62");
    Int bound;
    mpz_pow_ui(bound.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(precision));
    std::array<i64, 5> a_mod;
    for (std::size_t i = 0; i < 5; ++i) {
        Int r;
        mpz_fdiv_r(r.get_mpz_t(), S.a()[i].get_mpz_t(), bound.get_mpz_t());
        a_mod[i] = r.get_si();
    }
    auto run = padic_oracle_residues(a_mod, pp, k_max, precision, opts.frontier_cap);
    const Place place = Place::finite(p);
    switch (run.status) {
    case ResidueOracleRun::Status::Soluble: {
        std::array<Int, 5> pt;
        for (std::size_t i = 0; i < 5; ++i) pt[i] = static_cast<long>(run.point[i]);
        return LocalVerdict{place, true, OracleWitness{pt, run.level, run.minor, run.e}};
    }
    case ResidueOracleRun::Status::Insoluble:
        return LocalVerdict{place, false, OracleEmpty{run.level}};
    case ResidueOracleRun::Status::Undecided:
        break;
    }
    return Undecided{place, k_max, run.frontier};
}

bool validate_witness(const Surface& S, const Int& p, const OracleWitness& w)
{
    if (w.k <= 2 * w.e || w.e < 0) return false;
    Int m;
    mpz_pow_ui(m.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(w.k));
    const auto& x = w.point;
    const auto& a = S.a();
    bool primitive = false;
    for (const Int& c : x)
        if (!mpz_divisible_p(c.get_mpz_t(), p.get_mpz_t())) primitive = true;
    if (!primitive) return false;
    Int f1 = x[0] * x[1] - x[2] * x[3];
    Int f2 = 0;
    for (std::size_t i = 0; i < 5; ++i) f2 += a[i] * x[i] * x[i];
    if (!mpz_divisible_p(f1.get_mpz_t(), m.get_mpz_t()) || !mpz_divisible_p(f2.get_mpz_t(), m.get_mpz_t()))
        return false;
    const std::array<Int, 5> r0{x[1], x[0], -x[3], -x[2], Int(0)};
    std::array<Int, 5> r1;
    for (std::size_t i = 0; i < 5; ++i) r1[i] = 2 * a[i] * x[i];
    const auto i = static_cast<std::size_t>(w.minor.first), j = static_cast<std::size_t>(w.minor.second);
    if (i >= 5 || j >= 5 || i == j) return false;
    Int det = r0[i] * r1[j] - r0[j] * r1[i];
    if (det == 0) return false;
    // The minor is only known mod p^k; its valuation must be below k.
    return w.e < w.k && vp(det, p) == w.e;
}

std::vector<Place> bad_places(const Surface& S)
{
    std::set<Int> odd;
    auto collect = [&](const Int& n) {
        for (const Int& p : prime_divisors(n))
            if (p != 2) odd.insert(p);
    };
    for (const Int& c : S.a()) collect(c);
    collect(S.d());
    std::vector<Place> out{Place::real(), Place::finite(Int(2))};
    for (const Int& p : odd) out.push_back(Place::finite(p));
    return out;
}

LocalSolubility everywhere_locally_soluble(const Surface& S, const LocalSolubilityOptions& opts)
{
    LocalSolubility res{true, {}};
    for (const Place& v : bad_places(S)) {
        LocalVerdict lv = [&]() -> LocalVerdict {
            if (v.is_real()) return real_soluble(S);
            const bool use_oracle = v.prime() == 2 || opts.force_oracle;
            if (!use_oracle) return odd_p_soluble(S, v.prime());
            const int k = v.prime() == 2 ? opts.k_max_two : opts.k_max_odd;
            OracleResult r = padic_oracle(S, v.prime(), k, opts.oracle);
            if (auto* u = std::get_if<Undecided>(&r)) throw UndecidedError(*u);
            return std::get<LocalVerdict>(r);
        }();
        res.soluble = res.soluble && lv.soluble;
        res.verdicts.push_back(std::move(lv));
    }
    return res;
}

}  // namespace dp4
