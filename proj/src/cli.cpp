#include "dp4/cli.hpp"

#include "dp4/bm.hpp"
#include "dp4/census.hpp"
#include "dp4/density.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>

namespace dp4 {

namespace {

using nlohmann::json;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::array<Int, 5> parse_coefficients(const std::vector<std::string>& words)
{
    if (words.size() != 5) throw UsageError("expected five coefficients a0 a1 a2 a3 a4");
    std::array<Int, 5> a;
    for (std::size_t i = 0; i < 5; ++i) {
        if (a[i].set_str(words[i], 10) != 0) throw UsageError("not an integer: " + words[i]);
    }
    return a;
}

json coefficients_json(const std::array<Int, 5>& a)
{
    json out = json::array();
    for (const auto& x : a) out.push_back(x.get_str());
    return out;
}

json certificate_json(const Certificate& c)
{
    return std::visit(
        [](const auto& x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, SignCase>) {
                return {{"kind", "sign"}, {"mixed", x.mixed}};
            } else if constexpr (std::is_same_v<T, PropCase>) {
                return {{"kind", "case"},
                        {"label", to_string(x.label)},
                        {"indices", x.idx},
                        {"strict", x.strict}};
            } else if constexpr (std::is_same_v<T, NoCaseMatched>) {
                return {{"kind", "no_case"}};
            } else if constexpr (std::is_same_v<T, GoodReduction>) {
                return {{"kind", "good_reduction"}};
            } else if constexpr (std::is_same_v<T, OracleWitness>) {
                return {{"kind", "witness"},
                        {"point", coefficients_json(x.point)},
                        {"k", x.k},
                        {"minor", {x.minor.first, x.minor.second}},
                        {"e", x.e}};
            } else {
                return {{"kind", "empty"}, {"k", x.k}};
            }
        },
        c);
}

json value_set_json(const ValueSet& vs)
{
    json vals = json::array(), wit = json::array();
    for (const auto& v : vs.attained) vals.push_back(v.to_string());
    for (const auto& [v, st] : vs.witnesses)
        wit.push_back({{"value", v.to_string()}, {"s", st.s.get_str()}, {"t", st.t.get_str()}});
    return {{"values", vals}, {"witnesses", wit}};
}

json verdict_json(const BMVerdict& v)
{
    json out{{"verdict", verdict_tag(v)}};
    std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, NoObstructionWAFails>) {
                out["place"] = x.place.to_string();
                out["certified"] = x.certified;
                if (x.certified) out["certificate"] = std::stol(x.place.to_string());
            } else if constexpr (std::is_same_v<T, HPFails>) {
                json c = json::array();
                for (const auto& [place, val] : x.constants) c.push_back({place.to_string(), val.to_string()});
                out["constants"] = c;
            } else if constexpr (std::is_same_v<T, NotApplicable>) {
                out["reason"] = to_string(x.reason);
            }
        },
        v);
    return out;
}

struct AnalyzeArgs {
    std::vector<std::string> coeffs;
    bool bm = false, as_json = false;
    std::vector<long> search;
};

int analyze(const AnalyzeArgs& args)
{
    const auto a = parse_coefficients(args.coeffs);
    if (!is_smooth(a)) throw UsageError("the surface is singular (some a_i = 0 or a0 a1 = a2 a3)");
    if (gcd_all(a) != 1) throw UsageError("coefficients must be coprime");
    const Surface S = new_surface(a);

    json out{{"a", coefficients_json(S.a())}, {"d", S.d().get_str()}};
    const LocalSolubility loc = everywhere_locally_soluble(S);
    json places = json::array();
    for (const auto& v : loc.verdicts)
        places.push_back(
            {{"place", v.place.to_string()}, {"soluble", v.soluble}, {"certificate", certificate_json(v.certificate)}});
    out["local"] = places;
    out["everywhere_locally_soluble"] = loc.soluble;

    const BrauerClass br = brauer_class(S);
    out["brauer_order"] = order(br);
    const ResidueData res = residues(S);
    out["residues"] = {{"first_trivial", res.trivial_first}, {"second_trivial", res.trivial_second}};

    std::optional<ProjPoint> point;
    if (const auto* four = std::get_if<BrZ2xZ2>(&br)) point = four->forced_point;

    if (args.bm) {
        const BMVerdict v = bm_verdict(S);
        json bm = verdict_json(v);
        if (const auto* na = std::get_if<NotApplicable>(&v); na && na->point && !point) point = na->point;
        if (std::holds_alternative<BrZ2>(br) && loc.soluble) {
            json sets = json::object();
            for (const auto& place : bad_places(S)) {
                try {
                    sets[place.to_string()] = value_set_json(invariant_value_set(S, place));
                } catch (const EmptyValueSet&) {
                    sets[place.to_string()] = nullptr;
                }
            }
            bm["value_sets"] = sets;
        }
        out["bm"] = bm;
    }

    if (!point && loc.soluble) {
        const long h1 = args.search.empty() ? 6 : args.search[0];
        const long h2 = args.search.empty() ? 30 : args.search[1];
        point = search_rational_point(S, h1, h2);
        out["search"] = {h1, h2};
    }
    out["point"] = point ? json(point->to_string()) : json(nullptr);

    if (args.as_json) {
        std::cout << out.dump(2) << '\n';
        return 0;
    }
    std::cout << "surface " << S.to_string() << "  d = " << S.d() << '\n';
    for (const auto& v : loc.verdicts)
        std::cout << "  " << v.place.to_string() << ": " << (v.soluble ? "soluble" : "insoluble") << '\n';
    std::cout << "everywhere locally soluble: " << (loc.soluble ? "yes" : "no") << '\n';
    std::cout << "Br X / Br Q order: " << order(br) << '\n';
    if (args.bm) {
        const json& bm = out["bm"];
        std::cout << "Brauer-Manin: " << bm["verdict"].get<std::string>();
        if (bm.contains("place")) std::cout << " at " << bm["place"].get<std::string>();
        if (bm.contains("certificate")) std::cout << " (certificate " << bm["certificate"] << ")";
        std::cout << '\n';
    }
    std::cout << "rational point: " << (point ? point->to_string() : "none found") << '\n';
    return 0;
}

struct CensusArgs {
    long B = 0;
    bool bm = false;
    std::string out;
    unsigned workers = 1;
};

int census(const CensusArgs& args)
{
    CensusOptions opts;
    opts.B = args.B;
    opts.bm = args.bm;
    opts.workers = args.workers;
    CensusReport rep;
    if (!args.out.empty()) {
        std::ofstream csv(args.out);
        if (!csv) throw UsageError("cannot write " + args.out);
        rep = run_census(opts, &csv);
    } else {
        rep = run_census(opts);
    }
    std::cout << rep.to_json().dump(2) << '\n';
    return 0;
}

struct DensityArgs {
    long prime = 0;
    std::optional<std::int64_t> mc;
    int depth = 6;
    std::uint64_t seed = 1;
    bool product = false;
    long pmax = 50;
    unsigned workers = 1;
};

int density(const DensityArgs& args)
{
    MonteCarloOptions mo;
    mo.depth = args.depth;
    mo.seed = args.seed;
    mo.workers = args.workers;
    if (args.mc) mo.samples = *args.mc;
    if (args.product) {
        std::cout << to_json(density_product(args.pmax, mo)).dump(2) << '\n';
        return 0;
    }
    if (args.prime < 2 || !is_prime(Int(args.prime))) throw UsageError("--prime must be a prime");
    if (!args.mc) {
        if (args.prime == 2) throw UsageError("no closed form at p = 2; use --mc N");
        std::cout << to_fraction(sigma_p(args.prime)) << '\n';
        return 0;
    }
    std::cout << density_report(args.prime, sigma_p_mc(args.prime, mo)).dump(2) << '\n';
    return 0;
}

struct OracleArgs {
    std::string prime;
    int depth = 0;
    std::vector<std::string> coeffs;
};

int oracle(const OracleArgs& args)
{
    Int p;
    if (p.set_str(args.prime, 10) != 0 || !is_prime(p)) throw UsageError("--prime must be a prime");
    const auto a = parse_coefficients(args.coeffs);
    if (!is_smooth(a) || gcd_all(a) != 1) throw UsageError("coefficients must be coprime and define a smooth surface");
    const Surface S = new_surface(a);
    const OracleResult r = padic_oracle(S, p, args.depth);
    if (const auto* u = std::get_if<Undecided>(&r)) {
        std::cout << json{{"place", u->place.to_string()}, {"status", "undecided"}, {"k_max", u->k_max},
                          {"frontier", u->frontier}}
                         .dump(2)
                  << '\n';
        std::cerr << "oracle: undecided at depth " << u->k_max << "; raise --depth\n";
        return 2;
    }
    const auto& v = std::get<LocalVerdict>(r);
    std::cout << json{{"place", v.place.to_string()},
                      {"status", v.soluble ? "soluble" : "insoluble"},
                      {"certificate", certificate_json(v.certificate)}}
                     .dump(2)
              << '\n';
    return 0;
}

}  // namespace

int run_cli(int argc, char** argv)
{
    CLI::App app{"Arithmetic of the quartic del Pezzo family x0 x1 = x2 x3, sum a_i x_i^2 = 0", "dp4"};
    app.require_subcommand(1);

    AnalyzeArgs an;
    auto* a_cmd = app.add_subcommand("analyze", "Local solubility, Brauer group and point search for one surface");
    a_cmd->add_option("coefficients", an.coeffs, "a0 a1 a2 a3 a4")->required()->expected(5);
    a_cmd->add_flag("--bm", an.bm, "Brauer-Manin verdict and invariant value sets");
    a_cmd->add_option("--search", an.search, "Fibre and conic height bounds")->expected(2);
    a_cmd->add_flag("--json", an.as_json, "JSON output");

    CensusArgs ce;
    auto* c_cmd = app.add_subcommand("census", "Classify every primitive vector of height <= B");
    c_cmd->add_option("--height", ce.B, "Height bound B")->required()->check(CLI::PositiveNumber);
    c_cmd->add_flag("--bm", ce.bm, "Also compute Brauer-Manin verdicts (slow)");
    c_cmd->add_option("--out", ce.out, "CSV output path");
    c_cmd->add_option("--workers", ce.workers, "Worker threads")->check(CLI::PositiveNumber);

    DensityArgs de;
    auto* d_cmd = app.add_subcommand("density", "Local densities");
    auto* d_prime = d_cmd->add_option("--prime", de.prime, "Prime p");
    d_cmd->add_option("--mc", de.mc, "Monte-Carlo sample count");
    d_cmd->add_option("--depth", de.depth, "p-adic digits per draw (oracle depth at p = 2)");
    d_cmd->add_option("--seed", de.seed, "Random seed");
    d_cmd->add_option("--workers", de.workers, "Worker threads")->check(CLI::PositiveNumber);
    auto* d_product = d_cmd->add_flag("--product", de.product, "Truncated Euler product");
    d_cmd->add_option("--pmax", de.pmax, "Largest prime in the product")->needs(d_product);
    d_prime->excludes(d_product);
    d_cmd->require_option(1, 0);

    OracleArgs orc;
    auto* o_cmd = app.add_subcommand("oracle", "Certified p-adic point search");
    o_cmd->add_option("--prime", orc.prime, "Prime p")->required();
    o_cmd->add_option("--depth", orc.depth, "Maximal level k")->required()->check(CLI::PositiveNumber);
    o_cmd->add_option("coefficients", orc.coeffs, "a0 a1 a2 a3 a4")->required()->expected(5);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*a_cmd) return analyze(an);
        if (*c_cmd) return census(ce);
        if (*d_cmd) {
            if (!*d_prime && !de.product) throw UsageError("density needs --prime p or --product");
            return density(de);
        }
        return oracle(orc);
    } catch (const UsageError& e) {
        std::cerr << "dp4: " << e.what() << '\n';
        return 1;
    } catch (const UndecidedError& e) {
        std::cerr << "dp4: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "dp4: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace dp4
