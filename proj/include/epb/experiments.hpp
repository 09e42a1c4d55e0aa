#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "epb/bounds.hpp"
#include "epb/capacity.hpp"
#include "epb/chaining.hpp"
#include "epb/config.hpp"
#include "epb/csv.hpp"
#include "epb/entropy.hpp"
#include "epb/kernel.hpp"
#include "epb/simulate.hpp"
#include "epb/verify.hpp"

namespace epb {

struct RunOutput {
    bool pass = true;
    std::map<std::string, std::string> files; // csv (and json) payloads by name
    nlohmann::json derived;                   // goes into the manifest
    std::vector<std::string> log;
};

namespace runners {

inline std::string task_of(const Config& config, const std::string& path,
                           const std::set<std::string>& allowed) {
    const std::string task =
        cfg::get_string(cfg::require_key(config.block, path, "task"), path + ".task");
    if (!allowed.count(task)) throw ConfigError("at " + path + ".task: unknown task '" + task + "'");
    return task;
}

// ---- capacity -------------------------------------------------------------------

inline RunOutput run_capacity(const Config& config) {
    const std::string path = "$.capacity";
    const std::string task = task_of(config, path, {"shatter", "vc", "packing", "brackets"});
    RunOutput out;

    auto build_sets = [&]() -> ExplicitMatrix {
        const Distribution dist = distribution_from_json(
            cfg::require_key(config.block, path, "distribution"), path + ".distribution");
        if (!dist.is_finite())
            throw ConfigError("at " + path + ": set classes need a finite distribution");
        if (config.block.contains("values")) {
            std::vector<std::vector<double>> rows;
            for (const auto& r : config.block.at("values"))
                rows.push_back(cfg::get_number_array(r, path + ".values[]"));
            return ExplicitMatrix(dist.finite(), std::move(rows));
        }
        const std::string sets =
            cfg::get_string(cfg::require_key(config.block, path, "sets"), path + ".sets");
        if (sets == "thresholds") return threshold_sets(dist.finite());
        if (sets == "intervals") return interval_sets(dist.finite());
        throw ConfigError("at " + path + ".sets: unknown set class '" + sets + "'");
    };

    if (task == "shatter" || task == "vc") {
        cfg::check_keys(config.block, path, {"task", "distribution", "sets", "values", "n_max"});
        const ExplicitMatrix sets = build_sets();
        const auto vc = vc_dimension(sets);
        if (task == "vc") {
            CsvWriter csv({"d", "at_cap"});
            csv.row({CsvWriter::cell(vc.d), CsvWriter::cell(vc.at_cap)});
            out.files["capacity_vc.csv"] = csv.str();
            out.derived["d"] = vc.d;
            out.log.push_back("vc dimension d = " + std::to_string(vc.d));
            return out;
        }
        std::int64_t n_max = 4;
        if (config.block.contains("n_max"))
            n_max = cfg::get_integer(config.block.at("n_max"), path + ".n_max");
        CsvWriter csv({"n", "count", "d", "sauer"});
        for (std::int64_t n = 1; n <= n_max; ++n) {
            const auto tc = shatter_coefficient(sets, static_cast<int>(n));
            const double sb = n >= vc.d ? sauer_bound(vc.d, n) : -1.0;
            csv.row({CsvWriter::cell(n), CsvWriter::cell(tc.count), CsvWriter::cell(vc.d),
                     CsvWriter::cell(sb)});
        }
        out.files["capacity_shatter.csv"] = csv.str();
        return out;
    }

    if (task == "packing") {
        cfg::check_keys(config.block, path, {"task", "points", "csv", "u_grid"});
        if (config.block.contains("points") == config.block.contains("csv"))
            throw ConfigError("at " + path + ": provide exactly one of 'points' or 'csv'");
        std::vector<std::vector<double>> pts;
        if (config.block.contains("points")) {
            for (const auto& r : config.block.at("points"))
                pts.push_back(cfg::get_number_array(r, path + ".points[]"));
        } else {
            const std::string file = cfg::get_string(config.block.at("csv"), path + ".csv");
            std::ifstream in(file);
            if (!in) throw ConfigError("at " + path + ".csv: cannot open '" + file + "'");
            pts = read_numeric_csv(in);
        }
        const auto u_grid =
            cfg::get_number_array(cfg::require_key(config.block, path, "u_grid"), path + ".u_grid");
        CsvWriter csv({"u", "greedy", "brute"});
        for (double u : u_grid) {
            PackingQuery q{pts, u};
            const auto greedy = greedy_packing(q);
            const std::int64_t brute = pts.size() <= 20 ? brute_packing(q) : -1;
            csv.row({CsvWriter::cell(u), CsvWriter::cell(greedy.count), CsvWriter::cell(brute)});
        }
        out.files["capacity_packing.csv"] = csv.str();
        return out;
    }

    cfg::check_keys(config.block, path, {"task", "distribution", "u_grid"});
    const Distribution dist = distribution_from_json(
        cfg::require_key(config.block, path, "distribution"), path + ".distribution");
    if (dist.is_finite())
        throw ConfigError("at " + path + ": brackets need a continuous distribution");
    const auto u_grid =
        cfg::get_number_array(cfg::require_key(config.block, path, "u_grid"), path + ".u_grid");
    CsvWriter csv({"u", "count", "max_width"});
    for (double u : u_grid) {
        const auto brackets = threshold_brackets(u, dist.line());
        double width = 0.0;
        for (const auto& b : brackets) width = std::max(width, b.width);
        csv.row({CsvWriter::cell(u), CsvWriter::cell(static_cast<std::int64_t>(brackets.size())),
                 CsvWriter::cell(width)});
    }
    out.files["capacity_brackets.csv"] = csv.str();
    return out;
}

// ---- entropy --------------------------------------------------------------------

inline RunOutput run_entropy(const Config& config) {
    const std::string path = "$.entropy";
    const std::string task = task_of(config, path, {"phi_curve", "rate_curve"});
    RunOutput out;
    if (task == "phi_curve") {
        cfg::check_keys(config.block, path, {"task", "envelope", "n", "p_grid", "bracketing"});
        const auto env = envelope_from_json(cfg::require_key(config.block, path, "envelope"),
                                            path + ".envelope");
        const std::int64_t n =
            cfg::get_integer(cfg::require_key(config.block, path, "n"), path + ".n");
        const auto p_grid =
            cfg::get_number_array(cfg::require_key(config.block, path, "p_grid"), path + ".p_grid");
        bool bracketing = false;
        if (config.block.contains("bracketing"))
            bracketing = config.block.at("bracketing").get<bool>();
        EntropyIntegralSpec spec{env, n, 1e-8};
        CsvWriter csv({"p", "phi"});
        for (double p : p_grid)
            csv.row({CsvWriter::cell(p),
                     CsvWriter::cell(bracketing ? phi_bracketing(spec, p) : phi(spec, p))});
        out.files["entropy_phi.csv"] = csv.str();
        return out;
    }
    cfg::check_keys(config.block, path, {"task", "c", "gamma_grid", "u", "n_grid"});
    const double c = cfg::get_number(cfg::require_key(config.block, path, "c"), path + ".c");
    const double u = cfg::get_number(cfg::require_key(config.block, path, "u"), path + ".u");
    const auto gammas = cfg::get_number_array(cfg::require_key(config.block, path, "gamma_grid"),
                                              path + ".gamma_grid");
    const auto n_grid =
        cfg::get_integer_array(cfg::require_key(config.block, path, "n_grid"), path + ".n_grid");
    CsvWriter csv({"gamma", "n", "p", "asymptote", "k_gamma"});
    for (double gamma : gammas) {
        const auto curve = zero_error_curve(RateSpec{c, gamma, u}, n_grid);
        for (const auto& pt : curve.points)
            csv.row({CsvWriter::cell(gamma), CsvWriter::cell(pt.n), CsvWriter::cell(pt.p),
                     CsvWriter::cell(pt.asymptote), CsvWriter::cell(curve.k_gamma)});
    }
    out.files["entropy_rate.csv"] = csv.str();
    return out;
}

// ---- chain ----------------------------------------------------------------------

inline RunOutput run_chain(const Config& config) {
    const std::string path = "$.chain";
    cfg::check_keys(config.block, path,
                    {"class", "distribution", "n", "resolution", "j_max", "u", "envelope"});
    const std::uint64_t seed = config.require_seed();
    const Distribution dist = distribution_from_json(
        cfg::require_key(config.block, path, "distribution"), path + ".distribution");
    const auto fclass =
        class_from_json(cfg::require_key(config.block, path, "class"), path + ".class", dist);
    const std::int64_t n =
        cfg::get_integer(cfg::require_key(config.block, path, "n"), path + ".n");
    const double resolution = cfg::get_number(
        cfg::require_key(config.block, path, "resolution"), path + ".resolution");
    std::int64_t j_max = 20;
    if (config.block.contains("j_max"))
        j_max = cfg::get_integer(config.block.at("j_max"), path + ".j_max");
    double u = 36.0;
    if (config.block.contains("u")) u = cfg::get_number(config.block.at("u"), path + ".u");
    EntropyEnvelope env = haussler_envelope(1);
    if (config.block.contains("envelope"))
        env = envelope_from_json(config.block.at("envelope"), path + ".envelope", &dist);

    const Sample x = draw_sample(dist, static_cast<std::size_t>(n), seed, 0);
    const Sample y = draw_sample(dist, static_cast<std::size_t>(n), derive_seed(seed, 1), 0);
    const auto ids = fclass->members(resolution);
    std::vector<std::vector<double>> vecs;
    for (MemberId f : ids) {
        std::vector<double> v(static_cast<std::size_t>(2 * n));
        for (std::int64_t i = 0; i < n; ++i) {
            v[static_cast<std::size_t>(i)] = fclass->eval(f, x.points[static_cast<std::size_t>(i)]);
            v[static_cast<std::size_t>(n + i)] =
                fclass->eval(f, y.points[static_cast<std::size_t>(i)]);
        }
        vecs.push_back(std::move(v));
    }
    PointSet2n pts(std::move(vecs));
    const auto h = build_hierarchy(pts, static_cast<int>(j_max));
    const auto deltas = delta_sets(h);

    RunOutput out;
    CsvWriter levels({"j", "size", "scale_d", "collapsed_with_next"});
    for (int j = 0; j <= h.j_max; ++j)
        levels.row({CsvWriter::cell(j),
                    CsvWriter::cell(static_cast<std::int64_t>(h.levels[static_cast<std::size_t>(j)].size())),
                    CsvWriter::cell(h.level_scale_d[static_cast<std::size_t>(j)]),
                    CsvWriter::cell(static_cast<bool>(h.collapsed_with_next[static_cast<std::size_t>(j)]))});
    out.files["chain_levels.csv"] = levels.str();

    CsvWriter members({"member", "dist0", "level", "bound", "dist_le_sqrt_mean"});
    nlohmann::json proj_json = nlohmann::json::object();
    for (std::size_t f = 0; f < pts.vectors.size(); ++f) {
        const auto cb = chained_sup_bound(h, env, u, f);
        members.row({CsvWriter::cell(static_cast<std::int64_t>(f)), CsvWriter::cell(cb.dist0),
                     CsvWriter::cell(cb.level_j), CsvWriter::cell(cb.bound),
                     CsvWriter::cell(cb.dist_le_sqrt_mean)});
        proj_json[std::to_string(f)] = project(h, f);
    }
    out.files["chain_members.csv"] = members.str();

    nlohmann::json dump;
    dump["j_max"] = h.j_max;
    dump["levels"] = h.levels;
    dump["projections"] = proj_json;
    nlohmann::json dj = nlohmann::json::array();
    for (int j = 0; j <= h.j_max; ++j) {
        nlohmann::json lvl;
        lvl["j"] = j;
        lvl["zero_only"] = deltas[static_cast<std::size_t>(j)].zero_only;
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& [g, q] : deltas[static_cast<std::size_t>(j)].pairs)
            pairs.push_back({g, q});
        lvl["pairs"] = pairs;
        dj.push_back(lvl);
    }
    dump["deltas"] = dj;
    out.files["chain_hierarchy.json"] = dump.dump(2) + "\n";
    out.derived["members"] = pts.vectors.size();
    return out;
}

// ---- kernel ---------------------------------------------------------------------

inline RunOutput run_kernel(const Config& config, int threads) {
    const std::string path = "$.kernel";
    cfg::check_keys(config.block, path,
                    {"atoms", "probs", "n", "alphas", "gap_tol", "sampled_events"});
    FiniteSpace space(
        cfg::get_number_array(cfg::require_key(config.block, path, "atoms"), path + ".atoms"),
        cfg::get_number_array(cfg::require_key(config.block, path, "probs"), path + ".probs"));
    const std::int64_t n =
        cfg::get_integer(cfg::require_key(config.block, path, "n"), path + ".n");
    const auto alphas =
        cfg::get_number_array(cfg::require_key(config.block, path, "alphas"), path + ".alphas");
    KernelCheckOptions opt;
    opt.threads = threads;
    if (config.block.contains("gap_tol"))
        opt.gap_tol = cfg::get_number(config.block.at("gap_tol"), path + ".gap_tol");
    if (config.block.contains("sampled_events"))
        opt.sampled_events = static_cast<int>(
            cfg::get_integer(config.block.at("sampled_events"), path + ".sampled_events"));
    const double points = std::pow(static_cast<double>(space.size()), static_cast<double>(n));
    if (points > opt.max_exhaustive_points) {
        opt.seed = config.require_seed();
        opt.has_seed = true;
    }

    RunOutput out;
    CsvWriter csv({"alpha", "L", "event_id", "prob", "integral", "product", "pass"});
    for (double alpha : alphas) {
        const auto report = verify_kernel_integrability(space, static_cast<int>(n), alpha, opt);
        out.pass = out.pass && report.pass;
        for (const auto& row : report.rows)
            csv.row({CsvWriter::cell(alpha), CsvWriter::cell(report.L),
                     CsvWriter::cell(row.event_id), CsvWriter::cell(row.prob),
                     CsvWriter::cell(row.integral), CsvWriter::cell(row.product),
                     CsvWriter::cell(row.pass)});
        out.log.push_back("alpha " + std::to_string(alpha) + ": max product " +
                          fmt_double(report.max_product) + (report.pass ? " (pass)" : " (FAIL)"));
    }
    out.files["kernel_check.csv"] = csv.str();
    return out;
}

// ---- bound ----------------------------------------------------------------------

inline RunOutput run_bound(const Config& config) {
    const std::string path = "$.bound";
    const std::string task = task_of(config, path, {"vc_curve", "comparison", "entropy_curve"});
    RunOutput out;
    if (task == "vc_curve") {
        cfg::check_keys(config.block, path, {"task", "d", "delta", "n_grid"});
        const int d = static_cast<int>(
            cfg::get_integer(cfg::require_key(config.block, path, "d"), path + ".d"));
        const double delta =
            cfg::get_number(cfg::require_key(config.block, path, "delta"), path + ".delta");
        CsvWriter csv({"n", "bound", "term_trace", "term_confidence"});
        for (std::int64_t n : cfg::get_integer_array(
                 cfg::require_key(config.block, path, "n_grid"), path + ".n_grid")) {
            const double nn = static_cast<double>(n);
            const double t1 = std::sqrt(std::log(sauer_bound(d, 2 * n)) / nn);
            const double t2 = std::sqrt(std::log(4.0 / delta) / nn);
            csv.row({CsvWriter::cell(n), CsvWriter::cell(vc_bound_dim(d, n, delta)),
                     CsvWriter::cell(2.0 * t1), CsvWriter::cell(2.0 * t2)});
        }
        out.files["bound_vc.csv"] = csv.str();
        return out;
    }
    if (task == "comparison") {
        cfg::check_keys(config.block, path, {"task", "d", "n", "nu", "delta", "K", "pf_grid"});
        const auto rows = subgraph_li_comparison(
            static_cast<int>(cfg::get_integer(cfg::require_key(config.block, path, "d"), path + ".d")),
            cfg::get_integer(cfg::require_key(config.block, path, "n"), path + ".n"),
            cfg::get_number(cfg::require_key(config.block, path, "nu"), path + ".nu"),
            cfg::get_number(cfg::require_key(config.block, path, "delta"), path + ".delta"),
            cfg::get_number(cfg::require_key(config.block, path, "K"), path + ".K"),
            cfg::get_number_array(cfg::require_key(config.block, path, "pf_grid"),
                                  path + ".pf_grid"));
        CsvWriter csv({"pf", "subgraph_value", "relative_value", "ratio"});
        for (const auto& row : rows)
            csv.row({CsvWriter::cell(row.pf), CsvWriter::cell(row.eq_subgraph),
                     CsvWriter::cell(row.eq_relative), CsvWriter::cell(row.ratio)});
        out.files["bound_comparison.csv"] = csv.str();
        return out;
    }
    cfg::check_keys(config.block, path, {"task", "n", "u", "K", "envelope", "pf_grid"});
    const std::int64_t n = cfg::get_integer(cfg::require_key(config.block, path, "n"), path + ".n");
    const double u = cfg::get_number(cfg::require_key(config.block, path, "u"), path + ".u");
    const double K = cfg::get_number(cfg::require_key(config.block, path, "K"), path + ".K");
    const auto env =
        envelope_from_json(cfg::require_key(config.block, path, "envelope"), path + ".envelope");
    CsvWriter csv({"pf", "bound", "entropy_term", "root_term"});
    for (double pf : cfg::get_number_array(cfg::require_key(config.block, path, "pf_grid"),
                                           path + ".pf_grid")) {
        const double ent = phi({env, n, 1e-8}, pf);
        const double root = std::sqrt(static_cast<double>(n) * u * pf);
        csv.row({CsvWriter::cell(pf), CsvWriter::cell(K * (ent + root)),
                 CsvWriter::cell(K * ent), CsvWriter::cell(K * root)});
    }
    out.files["bound_entropy.csv"] = csv.str();
    return out;
}

// ---- simulate -------------------------------------------------------------------

inline RunOutput run_simulate(const Config& config, int threads) {
    const std::string path = "$.simulate";
    const std::string task = task_of(
        config, path,
        {"median", "tail", "integrated_tail", "symmetrization", "median_scan", "rademacher",
         "h_check"});
    RunOutput out;

    if (task == "h_check") {
        cfg::check_keys(config.block, path, {"task", "law", "c_grid"});
        std::vector<std::pair<double, double>> law;
        for (const auto& r : cfg::require_key(config.block, path, "law")) {
            const auto pair = cfg::get_number_array(r, path + ".law[]");
            if (pair.size() != 2) throw ConfigError("at " + path + ".law: rows must be [t, q]");
            law.emplace_back(pair[0], pair[1]);
        }
        const auto c_grid = cfg::get_number_array(
            cfg::require_key(config.block, path, "c_grid"), path + ".c_grid");
        const auto report = h_check(law, c_grid, 50, 25, config.require_seed());
        CsvWriter csv({"c", "h"});
        for (const auto& row : report.rows)
            csv.row({CsvWriter::cell(row.c), CsvWriter::cell(row.h)});
        out.files["simulate_h.csv"] = csv.str();
        out.pass = report.pass;
        out.derived["h0"] = report.h0;
        out.derived["h1"] = report.h1;
        return out;
    }

    cfg::check_keys(config.block, path,
                    {"task", "class", "distribution", "normalizer", "n", "replicates",
                     "resolution", "u_grid", "tail_replicates", "tail_seed", "constants",
                     "refine_check", "n_grid", "sign_draws"});
    const Distribution dist = distribution_from_json(
        cfg::require_key(config.block, path, "distribution"), path + ".distribution");
    Experiment exp;
    exp.dist = dist;
    exp.fclass =
        class_from_json(cfg::require_key(config.block, path, "class"), path + ".class", dist);
    exp.normalizer = normalizer_from_json(cfg::require_key(config.block, path, "normalizer"),
                                          path + ".normalizer", &dist);
    exp.n = cfg::get_integer(cfg::require_key(config.block, path, "n"), path + ".n");
    exp.replicates = cfg::get_integer(cfg::require_key(config.block, path, "replicates"),
                                      path + ".replicates");
    exp.resolution = cfg::get_number(cfg::require_key(config.block, path, "resolution"),
                                     path + ".resolution");
    exp.seed = config.require_seed();
    if (config.block.contains("u_grid"))
        exp.u_grid = cfg::get_number_array(config.block.at("u_grid"), path + ".u_grid");

    const bool needs_median =
        task == "median" || task == "tail" || task == "integrated_tail" || task == "median_scan";
    if (needs_median && exp.replicates % 2 == 0)
        throw ConfigError("at " + path + ".replicates: median estimation requires an odd count");

    nlohmann::json meta;
    meta["config_hash"] = config_hash(config.raw);
    meta["seed"] = exp.seed;

    auto tail_seed = [&]() -> std::uint64_t {
        if (!config.block.contains("tail_seed"))
            throw ConfigError("at " + path + ": tail experiments require 'tail_seed'");
        const std::uint64_t s = static_cast<std::uint64_t>(
            cfg::get_integer(config.block.at("tail_seed"), path + ".tail_seed"));
        if (s == exp.seed)
            throw ProtocolError("at " + path +
                                ".tail_seed: tail phase must not reuse the median-phase seed");
        return s;
    };
    auto constants = [&](const char* key, std::optional<double> fallback) -> double {
        if (config.block.contains("constants")) {
            const json& c = config.block.at("constants");
            cfg::check_keys(c, path + ".constants", {"M", "L", "K"});
            if (c.contains(key)) return cfg::get_number(c.at(key), path + ".constants");
        }
        if (fallback) return *fallback;
        throw ConfigError("at " + path + ".constants: missing '" + std::string(key) + "'");
    };

    auto median_csv = [&](const MedianEstimate& est, std::int64_t n) {
        CsvWriter csv({"n", "replicates", "median", "below", "above", "q25", "q75", "min", "max"});
        csv.row({CsvWriter::cell(n), CsvWriter::cell(est.replicates), CsvWriter::cell(est.median),
                 CsvWriter::cell(est.below), CsvWriter::cell(est.above), CsvWriter::cell(est.q25),
                 CsvWriter::cell(est.q75), CsvWriter::cell(est.min), CsvWriter::cell(est.max)});
        return csv.str();
    };
    auto tail_csv_rows = [&](CsvWriter& csv, const TailReport& report, double a_const) {
        for (const auto& row : report.rows)
            csv.row({CsvWriter::cell(report.resolution), CsvWriter::cell(row.u),
                     CsvWriter::cell(a_const), CsvWriter::cell(row.violations),
                     CsvWriter::cell(row.freq), CsvWriter::cell(row.stderr_freq),
                     CsvWriter::cell(row.budget), CsvWriter::cell(row.pass)});
    };

    if (task == "median") {
        const auto est = estimate_median(exp, threads);
        out.files["simulate_median.csv"] = median_csv(est, exp.n);
        out.derived["median"] = est.median;
    } else if (task == "tail" || task == "integrated_tail") {
        const std::uint64_t ts = tail_seed();
        meta["tail_seed"] = ts;
        std::int64_t tail_reps = exp.replicates;
        if (config.block.contains("tail_replicates"))
            tail_reps = cfg::get_integer(config.block.at("tail_replicates"),
                                         path + ".tail_replicates");
        bool refine = false;
        if (config.block.contains("refine_check"))
            refine = config.block.at("refine_check").get<bool>();

        Experiment tail = exp;
        tail.replicates = tail_reps;
        CsvWriter csv({"resolution", "u", "constant", "violations", "freq", "stderr", "budget",
                       "pass"});
        if (task == "tail") {
            const auto est = estimate_median(exp, threads);
            out.files["simulate_median.csv"] = median_csv(est, exp.n);
            const double M = constants("M", est.median);
            const double L = constants("L", solve_l(1.0));
            meta["M"] = M;
            meta["L"] = L;
            for (int stage = 0; stage < (refine ? 2 : 1); ++stage) {
                tail.resolution = stage == 0 ? exp.resolution : exp.resolution / 2.0;
                const auto report = tail_experiment(tail, M, L, ts, threads);
                out.pass = out.pass && report.pass;
                tail_csv_rows(csv, report, M);
            }
        } else {
            const double K = constants("K", std::nullopt);
            meta["K"] = K;
            for (int stage = 0; stage < (refine ? 2 : 1); ++stage) {
                tail.resolution = stage == 0 ? exp.resolution : exp.resolution / 2.0;
                const auto report = integrated_tail_experiment(tail, K, ts, threads);
                out.pass = out.pass && report.pass;
                tail_csv_rows(csv, report, K);
            }
        }
        out.files["simulate_tail.csv"] = csv.str();
    } else if (task == "symmetrization") {
        const auto report = symmetrization_experiment(exp, threads);
        CsvWriter csv({"u", "lhs_freq", "rhs_freq", "lhs_stderr", "rhs_stderr", "shift", "pass"});
        for (const auto& row : report.rows)
            csv.row({CsvWriter::cell(row.u), CsvWriter::cell(row.lhs_freq),
                     CsvWriter::cell(row.rhs_freq), CsvWriter::cell(row.lhs_stderr),
                     CsvWriter::cell(row.rhs_stderr), CsvWriter::cell(report.shift),
                     CsvWriter::cell(row.pass)});
        out.files["simulate_symmetrization.csv"] = csv.str();
        out.pass = report.pass;
        out.derived["shift"] = report.shift;
    } else if (task == "median_scan") {
        const auto n_grid = cfg::get_integer_array(
            cfg::require_key(config.block, path, "n_grid"), path + ".n_grid");
        const auto scan = median_stability_scan(exp, n_grid, threads);
        CsvWriter csv({"n", "median", "q25", "q75"});
        for (const auto& row : scan.rows)
            csv.row({CsvWriter::cell(row.n), CsvWriter::cell(row.estimate.median),
                     CsvWriter::cell(row.estimate.q25), CsvWriter::cell(row.estimate.q75)});
        out.files["simulate_median_scan.csv"] = csv.str();
        out.derived["band_factor"] = scan.band_factor();
    } else { // rademacher
        std::int64_t draws = 1000;
        if (config.block.contains("sign_draws"))
            draws = cfg::get_integer(config.block.at("sign_draws"), path + ".sign_draws");
        const Sample x = draw_sample(exp.dist, static_cast<std::size_t>(exp.n), exp.seed, 0);
        const Sample y =
            draw_sample(exp.dist, static_cast<std::size_t>(exp.n), derive_seed(exp.seed, 1), 0);
        const auto summary = rademacher_sup(*exp.fclass, x, y, exp.normalizer, exp.resolution,
                                            draws, derive_seed(exp.seed, 2), threads);
        CsvWriter csv({"draws", "mean", "q50", "q90", "max", "frac_ge_36"});
        csv.row({CsvWriter::cell(summary.draws), CsvWriter::cell(summary.mean),
                 CsvWriter::cell(summary.q50), CsvWriter::cell(summary.q90),
                 CsvWriter::cell(summary.max), CsvWriter::cell(summary.frac_at_least(36.0))});
        out.files["simulate_rademacher.csv"] = csv.str();
        out.pass = summary.frac_at_least(36.0) < 0.5;
    }
    out.files["simulate_meta.json"] = meta.dump(2) + "\n";
    return out;
}

// ---- verify-all -----------------------------------------------------------------

inline RunOutput run_verify_all_config(const Config& config, int threads) {
    const std::string path = "$.verify-all";
    cfg::check_keys(config.block, path, {"tail_seed", "quick"});
    VerifySettings settings;
    settings.seed = config.require_seed();
    settings.tail_seed = config.block.contains("tail_seed")
                             ? static_cast<std::uint64_t>(cfg::get_integer(
                                   config.block.at("tail_seed"), path + ".tail_seed"))
                             : derive_seed(settings.seed, 0xAA);
    if (config.block.contains("quick")) settings.quick = config.block.at("quick").get<bool>();
    settings.threads = threads;
    const auto result = run_verify_all(settings);
    RunOutput out;
    out.pass = result.pass;
    out.files = result.csvs;
    out.derived = result.derived;
    for (const auto& c : result.criteria) {
        char line[160];
        std::snprintf(line, sizeof(line), "[%2d/12] %s - %s (%s)", c.id,
                      c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
        out.log.push_back(line);
    }
    return out;
}

} // namespace runners

inline RunOutput run_experiment(const Config& config, int threads) {
    switch (config.kind) {
        case ExperimentKind::Capacity: return runners::run_capacity(config);
        case ExperimentKind::Entropy: return runners::run_entropy(config);
        case ExperimentKind::Chain: return runners::run_chain(config);
        case ExperimentKind::Kernel: return runners::run_kernel(config, threads);
        case ExperimentKind::Bound: return runners::run_bound(config);
        case ExperimentKind::Simulate: return runners::run_simulate(config, threads);
        case ExperimentKind::VerifyAll: return runners::run_verify_all_config(config, threads);
    }
    throw ConfigError("unknown experiment kind");
}

} // namespace epb
