#pragma once

// Local densities sigma_p = mu_p(Omega_p): exact closed forms for odd p,
// Monte-Carlo estimates through the solubility criteria (or the 2-adic
// oracle), and the truncated Euler product.

#include "dp4/numth.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>

namespace dp4 {

/// Measures of the three insolubility sets at an odd prime p.
Rat mu_S3(long p);
Rat mu_S4(long p);
Rat mu_S5(long p);

/// 1 - mu_S3 - mu_S4 - mu_S5 at p = 3, 1 - mu_S4 - mu_S5 for p > 3.
Rat sigma_p(long p);

/// 15/16: the complement of "all coefficients share one sign".
Rat sigma_infty();

/// p^4 |sigma_p - 1 + 1/(2p^2) - 9/(4p^3)|.
Rat expansion_residual(long p);

/// Largest expansion_residual over primes lo <= p <= hi.
Rat residual_constant(long lo = 5, long hi = 50);

struct DensityEstimate {
    double mean = 0;
    double stderr_ = 0;
    std::int64_t samples = 0;      // draws entering the mean
    std::int64_t escalated = 0;    // draws that needed more p-adic digits
    std::int64_t discarded = 0;    // draws still undecidable at full precision
    std::uint64_t seed = 0;
    int depth = 0;
};

struct MonteCarloOptions {
    std::int64_t samples = 1'000'000;
    int depth = 6;  // p-adic digits drawn up front (oracle k_max at p = 2)
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

/// Proportion of a in (Z_p)^5, p not dividing a, with X_a(Q_p) nonempty.
/// Draws come in fixed blocks with their own seeded streams, so the result
/// depends on (p, samples, depth, seed) but not on the worker count.
DensityEstimate sigma_p_mc(long p, const MonteCarloOptions& opts);

struct DensityProduct {
    long p_max;
    Rat sigma_infty;
    double odd_product;    // prod over 3 <= p <= p_max of the exact sigma_p
    DensityEstimate sigma_2;
    double product;        // sigma_infty * sigma_2.mean * odd_product
    double tail_bound;     // bound on 1 - prod_{p > p_max} sigma_p
};

/// Exact odd factors times the Monte-Carlo sigma_2 (never an exact sigma_2).
DensityProduct density_product(long p_max, const MonteCarloOptions& two_adic);

/// Exact product over odd primes 3 <= p <= p_max.
Rat odd_density_product(long p_max);

nlohmann::json to_json(const DensityEstimate& e);
nlohmann::json density_report(long p, const std::optional<DensityEstimate>& mc);
nlohmann::json to_json(const DensityProduct& d);

std::string to_fraction(const Rat& q);

}  // namespace dp4
