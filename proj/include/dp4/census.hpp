#pragma once

// Height-B census of the family: every primitive a with max |a_i| <= B,
// classified by smoothness, local solubility, Br X/Br Q and (optionally)
// the Brauer-Manin verdict.

#include "dp4/bm.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace dp4 {

struct CensusOptions {
    long B = 1;
    bool bm = false;
    unsigned workers = 1;
    int k_max_two = 12;
    long search_fiber = 6;        // point search bounds used with bm
    long search_conic = 30;
    long hp_recheck_height = 50;  // fibre height for re-checking HPFails
};

struct OddPlaceVerdict {
    long p;
    bool soluble;
};

struct CensusRecord {
    std::array<long, 5> a;
    long d = 0;
    bool smooth = false;
    // The remaining fields are only set for smooth surfaces.
    bool locR = false, loc2 = false;
    std::vector<OddPlaceVerdict> odd;
    bool els = false;
    int brauer_order = 0;
    std::string bm;  // verdict tag, empty without bm
    std::optional<ProjPoint> point;
};

struct CensusTally {
    std::int64_t visited = 0, smooth = 0, loc = 0;
    std::int64_t n1 = 0, n2 = 0, n4 = 0;        // among locally soluble
    std::int64_t u1 = 0, u2 = 0, u4 = 0;        // among all smooth
    std::int64_t fail_real = 0, fail_two = 0, fail_odd = 0;
    std::int64_t order4_points = 0;             // verified forced points
    std::int64_t wa_fail = 0, all_trivial = 0;
    std::vector<std::array<long, 5>> hp_fail;   // in enumeration order

    void add(const CensusRecord& r);
    CensusTally& operator+=(const CensusTally& o);
};

struct CensusReport {
    CensusOptions options;
    CensusTally tally;
    double runtime_seconds = 0;

    double total_normalized() const;  // N_total_smooth * zeta(5) / (32 B^5)
    double loc_proportion() const;    // N_loc / N_total_smooth
    double n4_over_b3() const;
    nlohmann::json to_json() const;
};

/// Visits every primitive a in [-B, B]^5 exactly once, in lexicographic
/// order, whatever the worker count. Throws UndecidedError if the 2-adic
/// oracle cannot decide a surface.
void enumerate(const CensusOptions& opts, const std::function<void(const CensusRecord&)>& sink);

CensusReport aggregate(const CensusOptions& opts, const std::vector<CensusRecord>& records);

/// Full census; when csv is given, one row per visited vector is written.
CensusReport run_census(const CensusOptions& opts, std::ostream* csv = nullptr);

extern const char* const kCsvHeader;
std::string csv_row(const CensusRecord& r);

/// Number of primitive smooth a with |a| <= B and Br X/Br Q of order 4,
/// by direct enumeration of a0 a1, a2 a3, -a0 a2 squares.
std::int64_t n4_count(long B);

constexpr double kZeta5 = 1.0369277551433699263;
constexpr double kSixtyOverPiSquared = 6.0792710185402662866;

}  // namespace dp4
