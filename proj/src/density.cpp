#include "dp4/density.hpp"

#include "dp4/localsolve.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <random>
#include <thread>

namespace dp4 {

namespace {

Int ipow(long p, unsigned e)
{
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), e);
    return r;
}

void require_odd_prime(long p)
{
    if (p < 3 || !is_prime(Int(p))) throw std::invalid_argument("density: p must be an odd prime");
}

constexpr std::int64_t kBlock = 1 << 14;

struct BlockCount {
    std::int64_t soluble = 0, decided = 0, escalated = 0, discarded = 0;
};

struct Sampler {
    long p;
    int depth;

    // Largest L with p^L < 2^62.
    static int max_digits(long p)
    {
        int L = 0;
        __int128 q = 1;
        while (q * p < (__int128(1) << 62)) {
            q *= p;
            ++L;
        }
        return L;
    }

    void odd_draw(std::mt19937_64& rng, BlockCount& c) const
    {
        const int L = max_digits(p), K = std::min(depth, L);
        const std::int64_t pK = ipow(p, static_cast<unsigned>(K)).get_si();
        const std::int64_t pL = ipow(p, static_cast<unsigned>(L)).get_si();
        std::uniform_int_distribution<std::int64_t> low(0, pK - 1), high(0, pL / pK - 1);
        std::array<std::int64_t, 5> a;
        for (;;) {
            bool unit = false;
            for (auto& x : a) {
                x = low(rng);
                unit = unit || x % p != 0;
            }
            if (unit) break;
        }
        auto d_mod = [&](std::int64_t m) {
            __int128 d = (__int128)a[0] * a[1] - (__int128)a[2] * a[3];
            return static_cast<std::int64_t>(((d % m) + m) % m);
        };
        auto undecidable = [&](std::int64_t m) {
            for (auto x : a)
                if (x % m == 0) return true;
            return d_mod(m) == 0;
        };
        if (undecidable(pK)) {
            ++c.escalated;
            for (auto& x : a) x += pK * high(rng);
            if (undecidable(pL)) {
                ++c.discarded;
                return;
            }
        }
        ++c.decided;
        if (!odd_prime_insoluble_case(odd_prime_data(a, p))) ++c.soluble;
    }

    // Lowers 2-adic valuations without changing the Q_2-isomorphism class:
    // x_i -> 2 x_i for one i in {0,1} and one j in {2,3} keeps x0 x1 = x2 x3
    // up to a common factor and divides (a_i, a_j) by 4; x4 -> 2 x4 divides
    // a4 by 4; the whole vector may be halved.
    static void reduce_two_adic(std::array<std::int64_t, 5>& a)
    {
        auto v = [&](std::size_t i) { return std::countr_zero(static_cast<std::uint64_t>(a[i])); };
        for (bool changed = true; changed;) {
            changed = false;
            if (v(4) >= 2) {
                a[4] /= 4;
                changed = true;
            }
            for (std::size_t i : {0u, 1u})
                for (std::size_t j : {2u, 3u})
                    if (v(i) >= 2 && v(j) >= 2) {
                        a[i] /= 4;
                        a[j] /= 4;
                        changed = true;
                    }
            if (v(0) && v(1) && v(2) && v(3) && v(4)) {
                for (auto& x : a) x /= 2;
                changed = true;
            }
        }
    }

    void two_draw(std::mt19937_64& rng, BlockCount& c) const
    {
        std::array<std::int64_t, 5> a;
        const std::int64_t mask = (std::int64_t(1) << 61) - 1;
        for (;;) {
            bool odd = false;
            for (auto& x : a) {
                x = static_cast<std::int64_t>(rng()) & mask;
                odd = odd || (x & 1);
            }
            if (odd) break;
        }
        for (auto x : a)
            if (x == 0) {
                ++c.discarded;
                return;
            }
        reduce_two_adic(a);
        int k = std::max(depth, 1);
        for (bool first = true;; first = false) {
            const int prec = oracle_precision(2, k);
            std::array<std::int64_t, 5> r;
            for (std::size_t i = 0; i < 5; ++i) r[i] = a[i] & ((std::int64_t(1) << prec) - 1);
            auto run = padic_oracle_residues(r, 2, k, prec, 4'000'000);
            if (run.status != ResidueOracleRun::Status::Undecided) {
                ++c.decided;
                if (run.status == ResidueOracleRun::Status::Soluble) ++c.soluble;
                return;
            }
            if (first) ++c.escalated;
            if (k >= 28) {
                ++c.discarded;
                return;
            }
            k = std::min(k + 4, 28);
        }
    }
};

}  // namespace

Rat mu_S3(long p)
{
    require_odd_prime(p);
    const Int P = p;
    Int num = (P - 1) * (P - 1) * (P * P - P + 1) * (ipow(p, 4) + 1) * (ipow(p, 4) + ipow(p, 3) + P * P + P + 1);
    Int den = 8 * ipow(p, 4) * ipow(p + 1, 3) * ipow(p * p + 1, 3);
    return make_rat(num, den);
}

Rat mu_S4(long p)
{
    require_odd_prime(p);
    const Int P = p;
    Int num = (P + 1) * (4 * ipow(p, 4) + P * P - 2) * ipow(p - 1, 6) +
              ipow(p, 4) * (ipow(p, 8) + 6 * ipow(p, 6) + 4 * ipow(p, 4) + 1);
    Int den = 4 * P * ipow(p * p - 1, 4) * ipow(p * p + 1, 3);
    return make_rat(num, den);
}

Rat mu_S5(long p)
{
    require_odd_prime(p);
    const Int P = p;
    Int num = (P - 1) * (ipow(p, 8) + 4 * ipow(p, 6) + 7 * ipow(p, 4) + 5 * P * P + 3);
    Int den = 2 * P * ipow(p + 1, 4) * ipow(p * p + 1, 3);
    return make_rat(num, den);
}

Rat sigma_p(long p)
{
    Rat s = 1 - mu_S4(p) - mu_S5(p);
    if (p == 3) s -= mu_S3(p);
    return s;
}

Rat sigma_infty() { return make_rat(Int(15), Int(16)); }

Rat expansion_residual(long p)
{
    const Int P = p;
    Rat r = sigma_p(p) - 1 + make_rat(Int(1), 2 * P * P) - make_rat(Int(9), 4 * P * P * P);
    return abs(r) * Rat(ipow(p, 4));
}

Rat residual_constant(long lo, long hi)
{
    Rat best = 0;
    for (long p : primes_between(lo, hi)) best = std::max(best, expansion_residual(p));
    return best;
}

DensityEstimate sigma_p_mc(long p, const MonteCarloOptions& opts)
{
    if (p != 2) require_odd_prime(p);
    if (opts.samples <= 0) throw std::invalid_argument("sigma_p_mc: samples must be positive");
    const Sampler sampler{p, opts.depth};
    const std::int64_t blocks = (opts.samples + kBlock - 1) / kBlock;
    std::vector<BlockCount> counts(static_cast<std::size_t>(blocks));
    std::atomic<std::int64_t> next{0};

    auto work = [&] {
        for (std::int64_t b; (b = next.fetch_add(1)) < blocks;) {
            std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                              static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(p)};
            std::mt19937_64 rng(seq);
            const std::int64_t n = std::min(kBlock, opts.samples - b * kBlock);
            BlockCount& c = counts[static_cast<std::size_t>(b)];
            for (std::int64_t i = 0; i < n; ++i) {
                if (p == 2) sampler.two_draw(rng, c);
                else sampler.odd_draw(rng, c);
            }
        }
    };
    const unsigned workers = std::max(1u, opts.workers);
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    BlockCount total;
    for (const auto& c : counts) {
        total.soluble += c.soluble;
        total.decided += c.decided;
        total.escalated += c.escalated;
        total.discarded += c.discarded;
    }
    DensityEstimate e;
    e.samples = total.decided;
    e.escalated = total.escalated;
    e.discarded = total.discarded;
    e.seed = opts.seed;
    e.depth = opts.depth;
    if (total.decided > 0) {
        e.mean = static_cast<double>(total.soluble) / static_cast<double>(total.decided);
        e.stderr_ = std::sqrt(e.mean * (1 - e.mean) / static_cast<double>(total.decided));
    }
    return e;
}

Rat odd_density_product(long p_max)
{
    Rat prod = 1;
    for (long p : primes_between(3, p_max)) prod *= sigma_p(p);
    return prod;
}

DensityProduct density_product(long p_max, const MonteCarloOptions& two_adic)
{
    if (p_max < 3) throw std::invalid_argument("density_product: p_max must be at least 3");
    DensityProduct d;
    d.p_max = p_max;
    d.sigma_infty = sigma_infty();
    d.odd_product = odd_density_product(p_max).get_d();
    d.sigma_2 = sigma_p_mc(2, two_adic);
    d.product = d.sigma_infty.get_d() * d.sigma_2.mean * d.odd_product;
    // 1 - sigma_p < 1/(2p^2) for p >= 5, and sum_{n > P} 1/(2n^2) < 1/(2P).
    d.tail_bound = 1.0 / (2.0 * static_cast<double>(p_max));
    return d;
}

std::string to_fraction(const Rat& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

nlohmann::json to_json(const DensityEstimate& e)
{
    return {{"mean", e.mean},           {"stderr", e.stderr_},   {"N", e.samples},
            {"K", e.depth},             {"seed", e.seed},        {"escalated", e.escalated},
            {"discarded", e.discarded}};
}

nlohmann::json density_report(long p, const std::optional<DensityEstimate>& mc)
{
    nlohmann::json j{{"p", p}};
    if (p == 2) j["exact"] = nullptr;
    else j["exact"] = to_fraction(sigma_p(p));
    if (mc) j["mc"] = to_json(*mc);
    return j;
}

nlohmann::json to_json(const DensityProduct& d)
{
    return {{"p_max", d.p_max},
            {"sigma_infty", to_fraction(d.sigma_infty)},
            {"odd_product", d.odd_product},
            {"sigma_2", to_json(d.sigma_2)},
            {"product", d.product},
            {"tail_bound", d.tail_bound}};
}

}  // namespace dp4
