#include "dp4/bm.hpp"
#include "dp4/localsolve.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace dp4;

namespace {

bool oracle_soluble(const Surface& S, long p, int k = 8)
{
    const auto r = padic_oracle(S, Int(p), k);
    const auto* v = std::get_if<LocalVerdict>(&r);
    REQUIRE_MESSAGE(v, "oracle undecided on " << S.to_string() << " at " << p);
    if (const auto* w = std::get_if<OracleWitness>(&v->certificate)) REQUIRE(validate_witness(S, Int(p), *w));
    return v->soluble;
}

std::optional<Surface> try_surface(std::array<Int, 5> a)
{
    if (!is_smooth(a) || gcd_all(a) != 1) return std::nullopt;
    return new_surface(a);
}

std::array<Int, 5> random_vector(std::mt19937_64& rng, long bound)
{
    std::uniform_int_distribution<long> coef(-bound, bound);
    std::array<Int, 5> a;
    for (auto& x : a) x = coef(rng);
    return a;
}

}  // namespace

TEST_CASE("real place")
{
    CHECK(real_soluble(new_surface({1, 2, 1, 1, -1})).soluble);
    const auto v = real_soluble(new_surface({-3, -1, -2, -5, -4}));
    CHECK_FALSE(v.soluble);
    CHECK(std::holds_alternative<SignCase>(v.certificate));
    CHECK_FALSE(real_soluble(new_surface({1, 4, 1, 7, 3})).soluble);
}

TEST_CASE("odd prime criteria examples")
{
    auto v = odd_p_soluble(new_surface({1, 4, 1, 7, 3}), Int(3));
    CHECK_FALSE(v.soluble);
    REQUIRE(std::holds_alternative<PropCase>(v.certificate));
    CHECK(std::get<PropCase>(v.certificate).label == PropLabel::ii);
    CHECK_FALSE(oracle_soluble(new_surface({1, 4, 1, 7, 3}), 3, 4));

    v = odd_p_soluble(new_surface({25, 1, 5, 10, 2}), Int(5));
    CHECK_FALSE(v.soluble);
    REQUIRE(std::holds_alternative<PropCase>(v.certificate));
    const auto pc = std::get<PropCase>(v.certificate);
    CHECK(pc.label == PropLabel::iii);
    CHECK(pc.idx[0] == 0);
    CHECK(pc.idx[1] == 1);
    CHECK_FALSE(oracle_soluble(new_surface({25, 1, 5, 10, 2}), 5));

    v = odd_p_soluble(new_surface({1, 1, 1, -1, 1}), Int(3));
    CHECK(v.soluble);
}

TEST_CASE("insolubility when p divides d")
{
    // Every -a_i a_j across the two pairs is a nonsquare mod 5 and 5 | d.
    const Surface S = new_surface({9, 9, 8, 2, -10});
    CHECK(S.d() == 65);
    CHECK_FALSE(odd_p_soluble(S, Int(5)).soluble);
    CHECK_FALSE(oracle_soluble(S, 5));
    // Same pattern without 5 | d is soluble.
    const Surface T = new_surface({9, 9, 8, 3, -10});
    CHECK(odd_p_soluble(T, Int(5)).soluble == oracle_soluble(T, 5));
}

TEST_CASE("oracle examples")
{
    CHECK(oracle_soluble(new_surface({1, 1, 1, -1, 1}), 2));
    CHECK(oracle_soluble(new_surface({1, 2, 1, 1, -1}), 2));
    const auto r = padic_oracle(new_surface({1, 4, 1, 7, 3}), Int(3), 4);
    const auto& v = std::get<LocalVerdict>(r);
    REQUIRE(std::holds_alternative<OracleEmpty>(v.certificate));
    CHECK(std::get<OracleEmpty>(v.certificate).k <= 4);
}

TEST_CASE("bad places")
{
    auto names = [](std::initializer_list<long> a) {
        std::vector<std::string> out;
        for (const auto& v : bad_places(new_surface(a))) out.push_back(v.to_string());
        return out;
    };
    CHECK(names({1, 1, 1, -1, 1}) == std::vector<std::string>{"R", "2"});
    CHECK(names({1, 4, 1, 7, 3}) == std::vector<std::string>{"R", "2", "3", "7"});
    CHECK(names({1, 1, 1, -1, 11}) == std::vector<std::string>{"R", "2", "11"});
}

TEST_CASE("everywhere local solubility")
{
    CHECK(everywhere_locally_soluble(new_surface({1, 1, 1, -1, 1})).soluble);
    const auto pos = everywhere_locally_soluble(new_surface({1, 2, 3, 4, 5}));
    CHECK_FALSE(pos.soluble);
    CHECK_FALSE(pos.verdicts.front().soluble);
    const auto r = everywhere_locally_soluble(new_surface({1, 4, 1, 7, 3}));
    CHECK_FALSE(r.soluble);
    for (const auto& v : r.verdicts) {
        if (v.place.is_real() || v.place.to_string() == "3") CHECK_FALSE(v.soluble);
    }
}

TEST_CASE("valuation vector normalization")
{
    CHECK(normalize_valvec({2, 0, 1, 1, 0}) == ValVec{2, 0, 1, 1, 0});
    CHECK(normalize_valvec({0, 0, 0, 0, 2}) == ValVec{0, 0, 0, 0, 0});
    CHECK(normalize_valvec({3, 1, 2, 2, 1}) == ValVec{2, 0, 1, 1, 0});

    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> val(0, 5);
    for (int n = 0; n < 2000; ++n) {
        ValVec v;
        for (auto& x : v) x = val(rng);
        const ValVec c = normalize_valvec(v);
        REQUIRE(normalize_valvec(c) == c);
        const std::vector<ValVec> moved{
            {v[1], v[0], v[2], v[3], v[4]},
            {v[2], v[3], v[0], v[1], v[4]},
            {v[0], v[1], v[2], v[3], v[4] + 2},
            {v[0] + 2, v[1], v[2] + 2, v[3], v[4]},
            {v[0] + 1, v[1] + 1, v[2] + 1, v[3] + 1, v[4] + 1},
        };
        for (const auto& w : moved) REQUIRE(normalize_valvec(w) == c);
    }
}

TEST_CASE("criteria agree with the oracle")
{
    std::mt19937_64 rng(17);
    int compared = 0;
    for (long p : {3L, 5L, 7L}) {
        int here = 0;
        while (here < 250) {
            auto a = random_vector(rng, 12);
            // Bias towards the interesting cases: several coefficients
            // divisible by p.
            for (auto& x : a)
                if (rng() % 3 == 0) x *= p;
            const auto S = try_surface(a);
            if (!S) continue;
            REQUIRE_MESSAGE(odd_p_soluble(*S, Int(p)).soluble == oracle_soluble(*S, p),
                            S->to_string() << " at " << p);
            ++here;
        }
        compared += here;
    }
    CHECK(compared == 750);
}

TEST_CASE("criteria agree with the oracle when p divides d")
{
    std::mt19937_64 rng(23);
    for (long p : {3L, 5L, 7L}) {
        int here = 0;
        while (here < 200) {
            auto a = random_vector(rng, 3 * p);
            // Adjust a3 so that p | a0 a1 - a2 a3 when a2 is a unit.
            if (a[2] % p == 0) continue;
            const Int inv = [&] {
                Int r;
                mpz_invert(r.get_mpz_t(), a[2].get_mpz_t(), Int(p).get_mpz_t());
                return r;
            }();
            a[3] += ((a[0] * a[1] - a[2] * a[3]) * inv) % p;
            const auto S = try_surface(a);
            if (!S) continue;
            REQUIRE(S->d() % p == 0);
            REQUIRE_MESSAGE(odd_p_soluble(*S, Int(p)).soluble == oracle_soluble(*S, p),
                            S->to_string() << " at " << p);
            ++here;
        }
    }
}

TEST_CASE("oracle verdicts are invariant under the valuation moves")
{
    std::mt19937_64 rng(29);
    int n = 0;
    while (n < 500) {
        const long p = std::array<long, 3>{3, 5, 7}[rng() % 3];
        const auto S = try_surface(random_vector(rng, 10));
        if (!S) continue;
        const auto& a = S->a();
        const Int p2 = Int(p) * p;
        const std::vector<std::array<Int, 5>> moved{
            {a[1], a[0], a[2], a[3], a[4]},
            {a[2], a[3], a[0], a[1], a[4]},
            {a[0], a[1], a[2], a[3], a[4] * p2},
            {a[0] * p2, a[1], a[2], a[3] * p2, a[4]},
            {a[0], a[1] * p2, a[2] * p2, a[3], a[4]},
        };
        const bool base = oracle_soluble(*S, p);
        for (const auto& b : moved) {
            const auto T = try_surface(b);
            if (!T) continue;  // the move made the vector imprimitive
            REQUIRE_MESSAGE(oracle_soluble(*T, p) == base, S->to_string() << " moved at " << p);
        }
        ++n;
    }
}

TEST_CASE("good primes are soluble")
{
    std::mt19937_64 rng(31);
    const auto primes = primes_between(3, 60);
    int n = 0;
    while (n < 500) {
        const auto S = try_surface(random_vector(rng, 20));
        if (!S) continue;
        const Int bad = S->a(0) * S->a(1) * S->a(2) * S->a(3) * S->a(4) * S->d();
        int tested = 0;
        while (tested < 3) {
            const long p = primes[rng() % primes.size()];
            if (bad % p == 0) continue;
            const auto r = padic_oracle(*S, Int(p), 4);
            const auto& v = std::get<LocalVerdict>(r);
            REQUIRE(v.soluble);
            REQUIRE(odd_p_soluble(*S, Int(p)).soluble);
            ++tested;
        }
        ++n;
    }
}

TEST_CASE("2-adic verdicts are consistent with fibre conics")
{
    // A fibre conic soluble over Q_2 gives a Q_2-point of the surface, so an
    // insoluble verdict forbids every such fibre.
    std::mt19937_64 rng(37);
    int insoluble = 0, n = 0;
    while (n < 400) {
        auto a = random_vector(rng, 16);
        const auto S = try_surface(a);
        if (!S) continue;
        ++n;
        if (oracle_soluble(*S, 2, 12)) continue;
        ++insoluble;
        for (auto f : {Fibration::Pi1, Fibration::Pi2})
            for (long s = -16; s <= 16; ++s)
                for (long t = 0; t <= 16; ++t) {
                    if (std::gcd(s, t) != 1) continue;
                    const auto c = fiber_conic(*S, f, s, t);
                    if (c.degenerate()) continue;
                    REQUIRE_FALSE_MESSAGE(conic_soluble_local(c, Place::finite(2)),
                                          S->to_string() << " fibre (" << s << ":" << t << ")");
                }
    }
    CHECK(insoluble > 0);
}

TEST_CASE("forced oracle audit matches the criteria")
{
    LocalSolubilityOptions audit;
    audit.force_oracle = true;
    for (const auto& a : std::vector<std::array<Int, 5>>{
             {1, 4, 1, 7, 3}, {25, 1, 5, 10, 2}, {9, 9, 8, 2, -10}, {1, 1, 1, -1, 11}, {3, -5, 7, 2, 15}}) {
        const Surface S = new_surface(a);
        CHECK(everywhere_locally_soluble(S, audit).soluble == everywhere_locally_soluble(S).soluble);
    }
}
