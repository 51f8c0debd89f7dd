// ivbounds: sharp bounds on the average causal effect in the binary-
// treatment / binary-outcome IV model with a K-valued instrument, explicit
// witness construction, and an exact LP cross-check.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ivb/identities.hpp"
#include "ivb/io.hpp"
#include "ivb/oracle.hpp"
#include "ivb/parallel.hpp"
#include "ivb/synthetic.hpp"

#ifndef IVB_VERSION
#define IVB_VERSION "0.0.0"
#endif

namespace {

using namespace ivb;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;

struct GlobalOpts {
    std::string input;
    std::string format = "json";
    bool exact = false;
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    bool tolerance_set = false;
    std::vector<std::string> argv_echo;
};

template <class S>
S feas_tol(const GlobalOpts& g) {
    if (scalar_traits<S>::exact) return S(0);
    return scalar_traits<S>::from_double(g.tolerance);
}

int emit(const GlobalOpts& g, const std::string& command,
         const std::optional<std::string>& input_bytes, json report,
         int exit_code) {
    json out{{"command", command},
             {"argv", g.argv_echo},
             {"mode", g.exact ? "exact" : "float"},
             {"version", IVB_VERSION},
             {"report", std::move(report)}};
    if (input_bytes)
        out["input_digest"] = content_digest(*input_bytes);
    else
        out["input_digest"] = nullptr;
    if (g.format == "csv")
        std::fputs(json_to_csv(out).c_str(), stdout);
    else {
        std::fputs(dump_canonical(out, 2).c_str(), stdout);
        std::fputc('\n', stdout);
    }
    return exit_code;
}

bool looks_like_csv(const std::string& text) {
    auto pos = text.find_first_not_of(" \t\r\n");
    return pos != std::string::npos && text.compare(pos, 2, "z,") == 0;
}

template <class S>
ObservedLaw<S> load_law(const GlobalOpts& g, const std::string& text) {
    ObservedLaw<S> law;
    if (looks_like_csv(text)) {
        law = ingest_counts<S>(counts_from_csv(text));
    } else {
        json j = json::parse(text);
        law = looks_like_counts(j) ? ingest_counts<S>(counts_from_json(j))
                                   : law_from_json<S>(j);
    }
    auto violations = validate_law(law, feas_tol<S>(g));
    if (!violations.empty())
        throw ParseError("invalid observed law: " + violations[0].describe());
    return law;
}

// ---- bounds -------------------------------------------------------------

template <class S>
int run_bounds(const GlobalOpts& g) {
    std::string text = read_file(g.input);
    auto law = load_law<S>(g, text);
    auto rep = ace_interval(law);
    return emit(g, "bounds", text, bounds_report_json(rep, law),
                rep.feasible ? kExitOk : kExitInfeasible);
}

// ---- check --------------------------------------------------------------

struct TripleOpts {
    std::string pi0, pi1, piar;
};

// accepts decimals ("0.25") and fractions ("1/3") in either mode
template <class S>
S parse_scalar_arg(const std::string& s) {
    Rat r = Rat::parse(s);
    if constexpr (scalar_traits<S>::exact)
        return r;
    else
        return r.to_double();
}

template <class S>
int run_check(const GlobalOpts& g, const TripleOpts& t) {
    std::string text = read_file(g.input);
    auto law = load_law<S>(g, text);
    auto joint = normalize_outcome_joint<S>(parse_scalar_arg<S>(t.pi0),
                                            parse_scalar_arg<S>(t.pi1),
                                            parse_scalar_arg<S>(t.piar),
                                            feas_tol<S>(g));
    auto res = membership_test(joint, law, -1, feas_tol<S>(g));
    json report{{"pass", res.pass},
                {"joint", joint_to_json(joint)},
                {"violations", membership_violations_json(res)}};
    return emit(g, "check", text, std::move(report),
                res.pass ? kExitOk : kExitInfeasible);
}

// ---- witness ------------------------------------------------------------

template <class S>
int run_witness(const GlobalOpts& g, const std::string& mode,
                const std::string& p000_rule, const TripleOpts& t) {
    std::string text = read_file(g.input);
    auto law = load_law<S>(g, text);

    OutcomeJoint<S> joint;
    if (mode == "midpoint")
        joint = pick_outcome_joint(law, JointPick::Midpoint);
    else if (mode == "maximize-ace")
        joint = pick_outcome_joint(law, JointPick::MaximizeAce);
    else if (mode == "minimize-ace")
        joint = pick_outcome_joint(law, JointPick::MinimizeAce);
    else if (mode == "explicit")
        joint = pick_outcome_joint(law, JointPick::Explicit,
                                   parse_scalar_arg<S>(t.pi0),
                                   parse_scalar_arg<S>(t.pi1),
                                   parse_scalar_arg<S>(t.piar));
    else
        throw Error("unknown witness mode " + mode);

    P000Rule rule = P000Rule::Midpoint;
    if (p000_rule == "lower") rule = P000Rule::Lower;
    else if (p000_rule == "upper") rule = P000Rule::Upper;
    else if (p000_rule != "midpoint")
        throw Error("unknown p000 rule " + p000_rule);

    std::vector<S> chosen;
    auto full = construct_witness(law, joint, rule, &chosen);

    auto [joint2, law2] = phi(full);
    S residual = S(0);
    for (int y0 = 0; y0 < 2; ++y0)
        for (int y1 = 0; y1 < 2; ++y1)
            residual = max_val(residual,
                               abs_val(joint2.q[y0][y1] - joint.q[y0][y1]));
    for (int z = 0; z < law.K; ++z)
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y)
                residual = max_val(
                    residual, abs_val(law2.p(z, x, y) - law.p(z, x, y)));
    double resid = scalar_traits<S>::to_double(residual);
    bool round_trip_ok = residual <= scalar_traits<S>::round_tol();

    json p000 = json::array();
    for (int k = 0; k < law.K; ++k) {
        auto range = p000_interval(joint, law, k);
        p000.push_back(json{{"z", law.label(k)},
                            {"lo", scalar_json(range.lo)},
                            {"hi", scalar_json(range.hi)},
                            {"chosen", scalar_json(chosen[k])}});
    }
    json report{{"joint", joint_to_json(joint)},
                {"witness", m1_to_json(full)},
                {"round_trip_residual", resid},
                {"witness_ace", scalar_json(true_ace(full))},
                {"p000", std::move(p000)}};
    if (!round_trip_ok)
        std::fprintf(stderr, "witness round trip residual %.3e exceeds bound\n",
                     resid);
    return emit(g, "witness", text, std::move(report),
                round_trip_ok ? kExitOk : kExitInfeasible);
}

// ---- oracle-compare -----------------------------------------------------

struct CompareRow {
    json record;
    double max_diff = 0.0;
    bool feasible = false;
    bool verdict_mismatch = false;
};

template <class S>
CompareRow compare_one(int K, std::uint64_t seed, double concentration) {
    GeneratorConfig cfg{K, seed, concentration, GenMode::ObservedOnly};
    auto law = sample_observed<S>(cfg);
    auto rep = ace_interval(law);

    ObservedLaw<Rat> rat_law;
    if constexpr (scalar_traits<S>::exact)
        rat_law = law;
    else
        rat_law = to_rational(law);

    CompareRow row;
    row.feasible = rep.feasible;
    OracleProblem prob(rat_law);
    row.verdict_mismatch = prob.feasible() != rep.feasible;

    json closed{{"pi0", interval_json(rep.pi0)},
                {"pi1", interval_json(rep.pi1)},
                {"ace", interval_json(rep.ace)},
                {"feasible", rep.feasible}};
    json oracle{{"feasible", prob.feasible()}};
    if (rep.feasible && prob.feasible()) {
        auto o_pi0 = prob.bounds(OracleObjective::Pi0);
        auto o_pi1 = prob.bounds(OracleObjective::Pi1);
        auto o_ace = prob.bounds(OracleObjective::Ace);
        auto diff = [&](const S& closed_v, const Rat& oracle_v) {
            if constexpr (scalar_traits<S>::exact)
                return abs(closed_v - oracle_v).to_double();
            else
                return std::fabs(closed_v - oracle_v.to_double());
        };
        row.max_diff = diff(rep.pi0.lo, o_pi0.lo);
        row.max_diff = std::max(row.max_diff, diff(rep.pi0.hi, o_pi0.hi));
        row.max_diff = std::max(row.max_diff, diff(rep.pi1.lo, o_pi1.lo));
        row.max_diff = std::max(row.max_diff, diff(rep.pi1.hi, o_pi1.hi));
        row.max_diff = std::max(row.max_diff, diff(rep.ace.lo, o_ace.lo));
        row.max_diff = std::max(row.max_diff, diff(rep.ace.hi, o_ace.hi));
        auto to_json_interval = [&](const Interval<Rat>& itv) {
            if constexpr (scalar_traits<S>::exact)
                return interval_json(itv);
            else
                return json{{"lo", itv.lo.to_double()},
                            {"hi", itv.hi.to_double()}};
        };
        oracle["pi0"] = to_json_interval(o_pi0);
        oracle["pi1"] = to_json_interval(o_pi1);
        oracle["ace"] = to_json_interval(o_ace);
    }
    row.record = json{{"law", law_to_json(law)},
                      {"closed_form", std::move(closed)},
                      {"oracle", std::move(oracle)},
                      {"max_abs_diff", row.max_diff}};
    return row;
}

template <class S>
int run_oracle_compare(const GlobalOpts& g, int K, int trials,
                       double concentration) {
    if (K < 1 || K > k_max_oracle)
        throw OracleSizeExceeded("--k must be in 1.." +
                                 std::to_string(k_max_oracle));
    std::vector<CompareRow> rows(trials);
    parallel_for(static_cast<std::size_t>(trials), [&](std::size_t i) {
        rows[i] = compare_one<S>(K, derive_seed(g.seed, i), concentration);
    });

    json records = json::array();
    double max_diff = 0.0;
    int feasible = 0, mismatches = 0;
    for (auto& row : rows) {
        max_diff = std::max(max_diff, row.max_diff);
        feasible += row.feasible;
        mismatches += row.verdict_mismatch;
        records.push_back(std::move(row.record));
    }
    const double threshold = scalar_traits<S>::exact ? 0.0 : g.tolerance;
    bool pass = mismatches == 0 && max_diff <= threshold;
    json report{{"k", K},
                {"trials", trials},
                {"feasible_count", feasible},
                {"verdict_mismatches", mismatches},
                {"max_abs_diff", max_diff},
                {"tolerance", threshold},
                {"pass", pass},
                {"records", std::move(records)}};
    return emit(g, "oracle-compare", std::nullopt, std::move(report),
                pass ? kExitOk : kExitInfeasible);
}

// ---- identities ---------------------------------------------------------

template <class S>
int run_identities(const GlobalOpts& g, int trials) {
    json report;
    std::vector<std::string> failures;

    if (!g.input.empty()) {
        std::string text = read_file(g.input);
        auto law = load_law<S>(g, text);
        try {
            report["upper_table"] = diff_table_json(
                check_upper_difference_table(law));
            report["lower_table"] = diff_table_json(
                check_lower_difference_table(law));
        } catch (const IdentityViolation& e) {
            failures.push_back(e.what());
        }
        report["violations"] = failures;
        return emit(g, "identities", text, std::move(report),
                    failures.empty() ? kExitOk : kExitInfeasible);
    }

    int tables_checked = 0, pairings_checked = 0, closure_checked = 0;
    std::vector<std::string> local_failures;
    for (int i = 0; i < trials; ++i) {
        GeneratorConfig cfg{2, derive_seed(g.seed, i), 0.8,
                            GenMode::ObservedOnly};
        auto law = sample_observed<S>(cfg);
        try {
            check_upper_difference_table(law);
            check_lower_difference_table(law);
            ++tables_checked;
        } catch (const IdentityViolation& e) {
            local_failures.push_back("trial " + std::to_string(i) + ": " +
                                     e.what());
        }

        Rng rng(derive_seed(g.seed ^ 0x1d, i));
        auto draws = rng.dirichlet(4, 0.8);
        OutcomeJoint<S> joint;
        joint.q = {{{scalar_traits<S>::from_double(draws[0]),
                     scalar_traits<S>::from_double(draws[1])},
                    {scalar_traits<S>::from_double(draws[2]),
                     scalar_traits<S>::from_double(draws[3])}}};
        S total = joint.total();
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) joint.q[a][b] /= total;
        int k = static_cast<int>(rng.below(2));
        for (const auto& row : check_appendix_a(joint, law, k, feas_tol<S>(g)))
            if (!row.consistent)
                local_failures.push_back("trial " + std::to_string(i) +
                                         ": inconsistent pairing " +
                                         row.pairing);
        ++pairings_checked;

        bool itv = p000_interval(joint, law, k).feasible(feas_tol<S>(g));
        bool mem = membership_test(joint, law, k, feas_tol<S>(g)).pass;
        if (itv != mem)
            local_failures.push_back(
                "trial " + std::to_string(i) +
                ": p000 interval feasibility disagrees with membership");
        ++closure_checked;
    }
    report = json{{"trials", trials},
                  {"difference_tables_checked", tables_checked},
                  {"appendix_pairings_checked", pairings_checked},
                  {"closure_checked", closure_checked},
                  {"violations", local_failures}};
    return emit(g, "identities", std::nullopt, std::move(report),
                local_failures.empty() ? kExitOk : kExitInfeasible);
}

// ---- simulate -----------------------------------------------------------

template <class S>
int run_simulate(const GlobalOpts& g, int K, int trials,
                 double concentration, const std::string& gen) {
    GenMode mode = GenMode::FullM1;
    if (gen == "boundary") mode = GenMode::BoundaryBiased;
    else if (gen == "observed") mode = GenMode::ObservedOnly;
    else if (gen != "full-m1")
        throw Error("unknown generator " + gen);

    int coverage_trials = 0, coverage_violations = 0;
    int sharp_trials = 0;
    double max_excess = 0.0, max_sharp_residual = 0.0;

    if (mode == GenMode::ObservedOnly) {
        for (int i = 0; i < trials; ++i) {
            GeneratorConfig cfg{K, derive_seed(g.seed, i), concentration,
                                mode};
            auto law = sample_observed<S>(cfg);
            auto rep = ace_interval(law);
            if (!rep.feasible) continue;
            for (auto pick :
                 {JointPick::MaximizeAce, JointPick::MinimizeAce}) {
                auto joint = pick_outcome_joint(law, pick);
                auto witness = construct_witness(law, joint);
                S target = pick == JointPick::MaximizeAce ? rep.ace.hi
                                                          : rep.ace.lo;
                double resid = scalar_traits<S>::to_double(
                    abs_val(true_ace(witness) - target));
                max_sharp_residual = std::max(max_sharp_residual, resid);
            }
            ++sharp_trials;
        }
    } else {
        for (int i = 0; i < trials; ++i) {
            GeneratorConfig cfg{K, derive_seed(g.seed, i), concentration,
                                mode};
            auto full = sample_full_m1<S>(cfg);
            auto law = phi(full).second;
            auto rep = ace_interval(law);
            S ace = true_ace(full);
            ++coverage_trials;
            S tol = scalar_traits<S>::exact
                        ? S(0)
                        : scalar_traits<S>::from_double(1e-12);
            if (!rep.ace.contains(ace, tol)) {
                ++coverage_violations;
                double excess = std::max(
                    scalar_traits<S>::to_double(rep.ace.lo - ace),
                    scalar_traits<S>::to_double(ace - rep.ace.hi));
                max_excess = std::max(max_excess, excess);
            }
        }
    }

    bool pass = coverage_violations == 0 &&
                max_sharp_residual <= (scalar_traits<S>::exact ? 0.0 : 1e-9);
    json report{{"k", K},
                {"generator", gen},
                {"coverage",
                 json{{"trials", coverage_trials},
                      {"violations", coverage_violations},
                      {"max_excess", max_excess}}},
                {"sharpness",
                 json{{"trials", sharp_trials},
                      {"max_residual", max_sharp_residual}}},
                {"pass", pass}};
    return emit(g, "simulate", std::nullopt, std::move(report),
                pass ? kExitOk : kExitInfeasible);
}

template <class Fn>
int dispatch(bool exact, Fn&& fn) {
    if (exact) return fn.template operator()<Rat>();
    return fn.template operator()<double>();
}

}  // namespace

int main(int argc, char** argv) {
    GlobalOpts g;
    for (int i = 1; i < argc; ++i) g.argv_echo.emplace_back(argv[i]);

    CLI::App app{"Sharp ACE bounds for the binary IV model: closed forms, "
                 "witness construction, and an exact LP oracle"};
    app.set_version_flag("--version", IVB_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--input", g.input, "Input file (law JSON or counts CSV/JSON)");
    app.add_option("--format", g.format, "Output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--exact", g.exact,
                 "Exact rational arithmetic through the whole pipeline");
    app.add_option("--seed", g.seed, "Master seed for randomized commands");
    app.add_option("--tolerance", g.tolerance,
                   "Feasibility/comparison tolerance (float mode)")
        ->check(CLI::NonNegativeNumber);

    auto* cmd_bounds = app.add_subcommand(
        "bounds", "Sharp intervals for pi0, pi1 and the ACE");

    TripleOpts triple;
    auto* cmd_check = app.add_subcommand(
        "check", "Test whether (pi0, pi1, piAR) is compatible with the law");
    cmd_check->add_option("--pi0", triple.pi0, "P(Y(x0)=1)")->required();
    cmd_check->add_option("--pi1", triple.pi1, "P(Y(x1)=1)")->required();
    cmd_check->add_option("--piar", triple.piar, "P(Y(x0)=1, Y(x1)=1)")
        ->required();

    std::string wmode = "midpoint", p000_rule = "midpoint";
    auto* cmd_witness = app.add_subcommand(
        "witness", "Construct an explicit IV-model law mapping to the input");
    cmd_witness->add_option("--mode", wmode,
                            "midpoint|maximize-ace|minimize-ace|explicit");
    cmd_witness->add_option("--p000-rule", p000_rule, "midpoint|lower|upper");
    cmd_witness->add_option("--pi0", triple.pi0, "explicit mode: P(Y(x0)=1)");
    cmd_witness->add_option("--pi1", triple.pi1, "explicit mode: P(Y(x1)=1)");
    cmd_witness->add_option("--piar", triple.piar,
                            "explicit mode: P(Y(x0)=1, Y(x1)=1)");

    int oc_k = 2, oc_trials = 100;
    double concentration = 1.0;
    std::string oc_mode;
    auto* cmd_oracle = app.add_subcommand(
        "oracle-compare", "Closed-form bounds vs the exact LP oracle");
    cmd_oracle->add_option("--k", oc_k, "Instrument levels (<= 6)");
    cmd_oracle->add_option("--trials", oc_trials, "Random laws to compare");
    cmd_oracle->add_option("--mode", oc_mode, "exact|float arithmetic")
        ->check(CLI::IsMember({"exact", "float"}));
    cmd_oracle->add_option("--concentration", concentration,
                           "Dirichlet concentration");

    int id_trials = 200;
    auto* cmd_identities = app.add_subcommand(
        "identities",
        "Verify the difference tables and the p000 pairing equivalences");
    cmd_identities->add_option("--trials", id_trials, "Random inputs");

    int sim_k = 2, sim_trials = 500;
    std::string sim_gen = "full-m1";
    auto* cmd_simulate = app.add_subcommand(
        "simulate", "Coverage and sharpness checks on synthetic laws");
    cmd_simulate->add_option("--k", sim_k, "Instrument levels");
    cmd_simulate->add_option("--trials", sim_trials, "Sample count");
    cmd_simulate->add_option("--gen", sim_gen, "full-m1|observed|boundary");
    cmd_simulate->add_option("--concentration", concentration,
                             "Dirichlet concentration");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "ivbounds: %s\n", e.what());
        return kExitUsage;
    }

    g.tolerance_set = app.count("--tolerance") > 0;
    if (g.exact && g.tolerance_set) {
        std::fprintf(stderr,
                     "ivbounds: --tolerance has no meaning with --exact\n");
        return kExitUsage;
    }
    if (cmd_oracle->parsed() && !oc_mode.empty()) {
        if (g.exact && oc_mode == "float") {
            std::fprintf(stderr,
                         "ivbounds: --exact conflicts with --mode float\n");
            return kExitUsage;
        }
        g.exact = g.exact || oc_mode == "exact";
    }

    try {
        if (cmd_bounds->parsed())
            return dispatch(g.exact, [&]<class S>() { return run_bounds<S>(g); });
        if (cmd_check->parsed())
            return dispatch(g.exact,
                            [&]<class S>() { return run_check<S>(g, triple); });
        if (cmd_witness->parsed())
            return dispatch(g.exact, [&]<class S>() {
                return run_witness<S>(g, wmode, p000_rule, triple);
            });
        if (cmd_oracle->parsed())
            return dispatch(g.exact, [&]<class S>() {
                return run_oracle_compare<S>(g, oc_k, oc_trials, concentration);
            });
        if (cmd_identities->parsed())
            return dispatch(g.exact, [&]<class S>() {
                return run_identities<S>(g, id_trials);
            });
        if (cmd_simulate->parsed())
            return dispatch(g.exact, [&]<class S>() {
                return run_simulate<S>(g, sim_k, sim_trials, concentration,
                                       sim_gen);
            });
    } catch (const InfeasibleLaw& e) {
        std::fprintf(stderr, "ivbounds: %s\n", e.what());
        return kExitInfeasible;
    } catch (const Error& e) {
        std::fprintf(stderr, "ivbounds: %s\n", e.what());
        return kExitUsage;
    } catch (const json::exception& e) {
        std::fprintf(stderr, "ivbounds: bad input: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "ivbounds: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
