#include "dp4/census.hpp"

#include "dp4/density.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

namespace dp4 {

namespace {

using i64 = std::int64_t;

// Smallest prime factor for 0 <= n <= limit.
class FactorTable {
public:
    explicit FactorTable(long limit) : spf_(static_cast<std::size_t>(limit) + 1, 0)
    {
        for (long n = 2; n <= limit; ++n) {
            if (spf_[static_cast<std::size_t>(n)]) continue;
            for (long m = n; m <= limit; m += n)
                if (!spf_[static_cast<std::size_t>(m)]) spf_[static_cast<std::size_t>(m)] = static_cast<int>(n);
        }
    }

    template <class F>
    void for_each_prime(long n, F&& f) const
    {
        n = std::labs(n);
        while (n > 1) {
            const long p = spf_[static_cast<std::size_t>(n)];
            f(p);
            while (n % p == 0) n /= p;
        }
    }

private:
    std::vector<int> spf_;
};

// 2-adic verdicts keyed by (c, a mod 2^c), where c is the depth the oracle
// consulted: the oracle's run is a function of a mod 2^c alone.
class TwoAdicCache {
public:
    TwoAdicCache(int k_max) : k_max_(k_max), precision_(oracle_precision(2, k_max)) {}

    bool soluble(const std::array<long, 5>& raw)
    {
        const std::array<long, 5> a = canonical(raw);
        for (int c : depths_) {
            auto it = map_.find(key(a, c));
            if (it != map_.end()) return it->second;
        }
        std::array<i64, 5> r;
        for (std::size_t i = 0; i < 5; ++i) r[i] = static_cast<i64>(a[i]);
        const auto run = padic_oracle_residues(r, 2, k_max_, precision_, OracleOptions{}.frontier_cap);
        if (run.status == ResidueOracleRun::Status::Undecided)
            throw UndecidedError(Undecided{Place::finite(Int(2)), k_max_, run.frontier});
        const bool sol = run.status == ResidueOracleRun::Status::Soluble;
        if (run.consulted <= kMaxKeyDepth) {
            map_.emplace(key(a, run.consulted), sol);
            if (std::find(depths_.begin(), depths_.end(), run.consulted) == depths_.end()) {
                depths_.push_back(run.consulted);
                std::sort(depths_.begin(), depths_.end());
            }
        }
        return sol;
    }

private:
    static constexpr int kMaxKeyDepth = 11;

    // Inverse of an odd u modulo 2^64 (Newton iteration).
    static std::uint64_t inverse(std::uint64_t u)
    {
        std::uint64_t x = u;
        for (int i = 0; i < 5; ++i) x *= 2 - u * x;
        return x;
    }

    // A Q_2-isomorphic representative, reduced mod 2^precision. Scaling x_i by
    // lambda_i with lambda0 lambda1 = lambda2 lambda3 multiplies a_i by
    // lambda_i^2, and the whole vector may be scaled; odd squares are the
    // units = 1 mod 8. With lambda0 = 1, units of a1, a2, a4 become their
    // residues mod 8 and a3 absorbs (lambda1 / lambda2)^2; a0's unit is 1.
    std::array<long, 5> canonical(const std::array<long, 5>& a) const
    {
        std::array<int, 5> v{};
        std::array<std::uint64_t, 5> u{};
        int vmin = 64;
        for (std::size_t i = 0; i < 5; ++i) {
            const auto x = static_cast<std::uint64_t>(a[i]);
            v[i] = std::countr_zero(x);
            u[i] = static_cast<std::uint64_t>(a[i] >> v[i]);
            vmin = std::min(vmin, v[i]);
        }
        const std::uint64_t s = inverse(u[0]);
        for (auto& x : u) x *= s;
        std::array<std::uint64_t, 5> rep{};
        for (std::size_t i : {1u, 2u, 4u}) rep[i] = u[i] & 7;
        u[3] = u[3] * rep[1] * u[2] * inverse(u[1] * rep[2]);
        u[0] = 1;
        u[1] = rep[1];
        u[2] = rep[2];
        u[4] = rep[4];
        const std::uint64_t mask = (std::uint64_t(1) << precision_) - 1;
        std::array<long, 5> out{};
        for (std::size_t i = 0; i < 5; ++i) out[i] = static_cast<long>((u[i] << (v[i] - vmin)) & mask);
        return out;
    }

    static std::uint64_t key(const std::array<long, 5>& a, int c)
    {
        const std::uint64_t mask = (std::uint64_t(1) << c) - 1;
        std::uint64_t k = static_cast<std::uint64_t>(c);
        for (long x : a) k = (k << c) | (static_cast<std::uint64_t>(x) & mask);
        return k;
    }

    int k_max_, precision_;
    std::vector<int> depths_;
    std::unordered_map<std::uint64_t, bool> map_;
};

struct Worker {
    const CensusOptions& opts;
    const FactorTable& table;
    TwoAdicCache cache;

    Worker(const CensusOptions& o, const FactorTable& t) : opts(o), table(t), cache(o.k_max_two) {}

    CensusRecord classify(const std::array<long, 5>& a)
    {
        CensusRecord r;
        r.a = a;
        r.d = a[0] * a[1] - a[2] * a[3];
        bool nonzero = true;
        for (long x : a) nonzero = nonzero && x != 0;
        r.smooth = nonzero && r.d != 0;
        if (!r.smooth) return r;

        bool pos = false, neg = false;
        for (long x : a) (x > 0 ? pos : neg) = true;
        r.locR = pos && neg;
        r.loc2 = cache.soluble(a);

        std::vector<long> primes;
        auto collect = [&](long p) {
            if (p != 2) primes.push_back(p);
        };
        for (long x : a) table.for_each_prime(x, collect);
        table.for_each_prime(r.d, collect);
        std::sort(primes.begin(), primes.end());
        primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
        bool odd_ok = true;
        const std::array<i64, 5> a64{a[0], a[1], a[2], a[3], a[4]};
        for (long p : primes) {
            const bool sol = !odd_prime_insoluble_case(odd_prime_data(a64, p));
            r.odd.push_back({p, sol});
            odd_ok = odd_ok && sol;
        }
        r.els = r.locR && r.loc2 && odd_ok;
        r.brauer_order = brauer_order<i64>(a64, static_cast<i64>(r.d));

        if (r.brauer_order == 4 || opts.bm) {
            const Surface S = new_surface({a[0], a[1], a[2], a[3], a[4]});
            if (r.brauer_order == 4) r.point = order4_point(S);
            if (opts.bm) run_bm(S, r);
        }
        return r;
    }

    void run_bm(const Surface& S, CensusRecord& r)
    {
        if (!r.els) {
            r.bm = "NotApplicable";
            return;
        }
        BMOptions bo;
        bo.local.k_max_two = opts.k_max_two;
        const BMVerdict v = bm_verdict(S, bo);
        r.bm = verdict_tag(v);
        if (std::holds_alternative<HPFails>(v)) {
            if (!no_soluble_fiber_up_to(S, opts.hp_recheck_height))
                throw std::logic_error("census: HPFails verdict contradicted by a soluble fibre for " + S.to_string());
            return;
        }
        if (!r.point) r.point = search_rational_point(S, opts.search_fiber, opts.search_conic);
    }
};

struct BlockResult {
    std::vector<CensusRecord> records;
};

// Block b covers a0 = -B + b / (2B+1), a1 = -B + b % (2B+1).
template <class F>
void for_each_in_block(long B, long block, F&& f)
{
    const long w = 2 * B + 1;
    const long a0 = -B + block / w, a1 = -B + block % w;
    const long g01 = std::gcd(a0, a1);
    for (long a2 = -B; a2 <= B; ++a2) {
        const long g2 = std::gcd(g01, a2);
        for (long a3 = -B; a3 <= B; ++a3) {
            const long g3 = std::gcd(g2, a3);
            for (long a4 = -B; a4 <= B; ++a4)
                if (std::gcd(g3, a4) == 1) f(std::array<long, 5>{a0, a1, a2, a3, a4});
        }
    }
}

}  // namespace

void CensusTally::add(const CensusRecord& r)
{
    ++visited;
    if (!r.smooth) return;
    ++smooth;
    fail_real += !r.locR;
    fail_two += !r.loc2;
    fail_odd += std::any_of(r.odd.begin(), r.odd.end(), [](const OddPlaceVerdict& v) { return !v.soluble; });
    (r.brauer_order == 4 ? u4 : r.brauer_order == 2 ? u2 : u1) += 1;
    if (r.brauer_order == 4 && r.point) ++order4_points;
    if (r.els) {
        ++loc;
        (r.brauer_order == 4 ? n4 : r.brauer_order == 2 ? n2 : n1) += 1;
    }
    if (r.bm == "HPFails") hp_fail.push_back(r.a);
    if (r.bm == "NoObstructionWAFails") ++wa_fail;
    if (r.bm == "AllTrivial") ++all_trivial;
}

CensusTally& CensusTally::operator+=(const CensusTally& o)
{
    visited += o.visited;
    smooth += o.smooth;
    loc += o.loc;
    n1 += o.n1;
    n2 += o.n2;
    n4 += o.n4;
    u1 += o.u1;
    u2 += o.u2;
    u4 += o.u4;
    fail_real += o.fail_real;
    fail_two += o.fail_two;
    fail_odd += o.fail_odd;
    order4_points += o.order4_points;
    wa_fail += o.wa_fail;
    all_trivial += o.all_trivial;
    hp_fail.insert(hp_fail.end(), o.hp_fail.begin(), o.hp_fail.end());
    return *this;
}

double CensusReport::total_normalized() const
{
    const double B = static_cast<double>(options.B);
    return static_cast<double>(tally.smooth) * kZeta5 / (32.0 * std::pow(B, 5));
}

double CensusReport::loc_proportion() const
{
    return tally.smooth ? static_cast<double>(tally.loc) / static_cast<double>(tally.smooth) : 0.0;
}

double CensusReport::n4_over_b3() const
{
    return static_cast<double>(tally.n4) / std::pow(static_cast<double>(options.B), 3);
}

nlohmann::json CensusReport::to_json() const
{
    nlohmann::json hp = nlohmann::json::array();
    for (const auto& a : tally.hp_fail) hp.push_back(a);
    return {
        {"B", options.B},
        {"parameters", {{"bm", options.bm}, {"workers", options.workers}, {"k_max_two", options.k_max_two}}},
        {"N_visited", tally.visited},
        {"N_total_smooth", tally.smooth},
        {"N_loc", tally.loc},
        {"N_1", tally.n1},
        {"N_2", tally.n2},
        {"N_4", tally.n4},
        {"unconditioned", {{"N_1", tally.u1}, {"N_2", tally.u2}, {"N_4", tally.u4}}},
        {"local_failures", {{"real", tally.fail_real}, {"two", tally.fail_two}, {"odd", tally.fail_odd}}},
        {"order4_verified_points", tally.order4_points},
        {"hp_fail_candidates", tally.hp_fail.size()},
        {"hp_fail_list", hp},
        {"wa_fail_count", tally.wa_fail},
        {"bm_all_trivial", tally.all_trivial},
        {"ratios",
         {{"total_normalized", total_normalized()},
          {"loc_proportion", loc_proportion()},
          {"n4_over_B3", n4_over_b3()},
          {"sixty_over_pi2", kSixtyOverPiSquared}}},
        {"odd_density_product_50", odd_density_product(50).get_d()},
        {"runtime_seconds", runtime_seconds},
    };
}

const char* const kCsvHeader = "a0,a1,a2,a3,a4,d,smooth,locR,loc2,odd_bad_places,brauer_order,bm_verdict,point";

std::string csv_row(const CensusRecord& r)
{
    std::ostringstream os;
    for (long x : r.a) os << x << ',';
    os << r.d << ',' << (r.smooth ? 1 : 0) << ',';
    if (r.smooth) {
        os << (r.locR ? 1 : 0) << ',' << (r.loc2 ? 1 : 0) << ',';
        for (std::size_t i = 0; i < r.odd.size(); ++i) os << (i ? ";" : "") << r.odd[i].p << ':' << r.odd[i].soluble;
        os << ',' << r.brauer_order << ',' << r.bm << ',';
        if (r.point) os << r.point->to_string();
    } else {
        os << ",,,,,";
    }
    return os.str();
}

void enumerate(const CensusOptions& opts, const std::function<void(const CensusRecord&)>& sink)
{
    if (opts.B < 1) throw std::invalid_argument("census: B must be positive");
    const long B = opts.B;
    const FactorTable table(std::max(2 * B * B, B) + 1);
    const long blocks = (2 * B + 1) * (2 * B + 1);
    const unsigned W = std::max(1u, opts.workers);
    const long wave = static_cast<long>(W) * 4;

    std::vector<Worker> workers;
    for (unsigned w = 0; w < W; ++w) workers.emplace_back(opts, table);

    for (long start = 0; start < blocks; start += wave) {
        const long end = std::min(blocks, start + wave);
        std::vector<BlockResult> results(static_cast<std::size_t>(end - start));
        std::atomic<long> next{start};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto run = [&](Worker& wk) {
            try {
                for (long b; (b = next.fetch_add(1)) < end;) {
                    auto& out = results[static_cast<std::size_t>(b - start)].records;
                    out.reserve(static_cast<std::size_t>((2 * B + 1) * (2 * B + 1) * (2 * B + 1)));
                    for_each_in_block(B, b, [&](const std::array<long, 5>& a) { out.push_back(wk.classify(a)); });
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 1; w < W; ++w) pool.emplace_back(run, std::ref(workers[w]));
        run(workers[0]);
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
        for (const auto& br : results)
            for (const auto& r : br.records) sink(r);
    }
}

CensusReport aggregate(const CensusOptions& opts, const std::vector<CensusRecord>& records)
{
    CensusReport rep{opts, {}, 0};
    for (const auto& r : records) rep.tally.add(r);
    return rep;
}

CensusReport run_census(const CensusOptions& opts, std::ostream* csv)
{
    const auto t0 = std::chrono::steady_clock::now();
    CensusReport rep{opts, {}, 0};
    if (csv) *csv << kCsvHeader << '\n';
    enumerate(opts, [&](const CensusRecord& r) {
        rep.tally.add(r);
        if (csv) *csv << csv_row(r) << '\n';
    });
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

std::int64_t n4_count(long B)
{
    if (B < 1) throw std::invalid_argument("n4_count: B must be positive");
    // Values grouped by squarefree kernel (sign kept).
    std::map<long, std::vector<long>> by_class;
    for (long v = -B; v <= B; ++v)
        if (v != 0) by_class[small::squarefree_core(v)].push_back(v);
    std::int64_t count = 0;
    for (const auto& [m, first] : by_class) {
        auto it = by_class.find(-m);
        if (it == by_class.end()) continue;
        const auto& second = it->second;
        for (long a0 : first)
            for (long a1 : first)
                for (long a2 : second)
                    for (long a3 : second) {
                        const long d = a0 * a1 - a2 * a3;
                        if (d == 0) continue;
                        const long g = std::gcd(std::gcd(a0, a1), std::gcd(a2, a3));
                        for (long a4 = -B; a4 <= B; ++a4) {
                            if (a4 == 0 || std::gcd(g, a4) != 1) continue;
                            if (!small::is_square(-a0 * a4 * d)) ++count;
                        }
                    }
    }
    return count;
}

}  // namespace dp4
