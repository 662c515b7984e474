#include "dp4/density.hpp"

#include <doctest.h>

#include <cmath>

using namespace dp4;

TEST_CASE("exact densities")
{
    CHECK(to_fraction(sigma_p(3)) == "63693071/66355200");
    CHECK(sigma_infty() == Rat(15, 16));
    CHECK(mu_S3(3) == make_rat(277816, 41472000));
    const double s5 = sigma_p(5).get_d();
    CHECK(s5 > 0.98);
    CHECK(s5 < 1.0);
    CHECK(mu_S4(5) > 0);
    CHECK(mu_S4(5) < 1);
    CHECK(mu_S5(5) > 0);
    CHECK(mu_S5(5) < 1);
}

TEST_CASE("closed-form identities")
{
    for (long p : primes_between(3, 200)) {
        const Rat P(p);
        if (p <= 50) {
            const Rat lhs = mu_S5(p) * 2 * P * (P + 1) * (P + 1) * (P + 1) * (P + 1) * (P * P + 1) * (P * P + 1) *
                            (P * P + 1) / (P - 1);
            const Rat p2 = P * P, p4 = p2 * p2;
            REQUIRE(lhs == p4 * p4 + 4 * p4 * p2 + 7 * p4 + 5 * p2 + 3);
        }
        REQUIRE(mu_S3(p) * p < 1);
        REQUIRE(mu_S3(p) + mu_S4(p) + mu_S5(p) < 1);
        REQUIRE(sigma_p(p) > 0);
    }
}

TEST_CASE("expansion residual")
{
    const Rat C = residual_constant(5, 50);
    CHECK(C > 0);
    for (long p : primes_between(5, 50)) CHECK(expansion_residual(p) <= C);
    // The residual for large p is recorded, not asserted against C; see the
    // README for the behaviour of the closed forms beyond p = 50.
    CHECK(expansion_residual(101) > 0);
}

TEST_CASE("Euler product")
{
    const double p50 = odd_density_product(50).get_d(), p100 = odd_density_product(100).get_d(),
                 p200 = odd_density_product(200).get_d();
    CHECK(p50 > p100);
    CHECK(p100 > p200);
    CHECK(p200 > 0);
    double tail = 0;
    for (long p : primes_between(51, 200)) tail += 1.0 / (static_cast<double>(p) * static_cast<double>(p));
    CHECK(p50 - p200 < tail);
}

TEST_CASE("Monte Carlo is reproducible and independent of worker count")
{
    MonteCarloOptions one{60'000, 6, 99, 1}, three{60'000, 6, 99, 3};
    const auto a = sigma_p_mc(3, one), b = sigma_p_mc(3, three);
    CHECK(a.mean == b.mean);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.samples == b.samples);
    CHECK(sigma_p_mc(3, one).mean == a.mean);
    MonteCarloOptions other = one;
    other.seed = 100;
    CHECK(sigma_p_mc(3, other).mean != a.mean);

    const auto two = sigma_p_mc(2, MonteCarloOptions{5'000, 6, 1, 2});
    CHECK(two.mean > 0.5);
    CHECK(two.samples + two.discarded == 5'000);
    CHECK(sigma_p_mc(2, MonteCarloOptions{5'000, 6, 1, 1}).mean == two.mean);
}

TEST_CASE("reports")
{
    const auto j = density_report(3, std::nullopt);
    CHECK(j["p"] == 3);
    CHECK(j["exact"] == "63693071/66355200");
    const auto e = sigma_p_mc(5, MonteCarloOptions{10'000, 6, 1, 1});
    const auto m = to_json(e);
    for (const char* key : {"mean", "stderr", "N", "K", "seed"}) CHECK(m.contains(key));
    CHECK(density_report(2, e)["exact"].is_null());

    const auto prod = density_product(50, MonteCarloOptions{5'000, 6, 1, 1});
    CHECK(prod.product == doctest::Approx(prod.sigma_infty.get_d() * prod.sigma_2.mean * prod.odd_product));
    CHECK(to_json(prod)["sigma_infty"] == "15/16");
}
