#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "epb/bounds.hpp"
#include "epb/capacity.hpp"
#include "epb/chaining.hpp"
#include "epb/classes.hpp"
#include "epb/csv.hpp"
#include "epb/entropy.hpp"
#include "epb/kernel.hpp"
#include "epb/normalizer.hpp"
#include "epb/simulate.hpp"

namespace epb {

// Desk-scale verification suite: every numbered criterion runs at its pinned
// tolerance and reports one pass/fail row.

struct VerifySettings {
    std::uint64_t seed = 424243;      // median-phase seed
    std::uint64_t tail_seed = 424244; // tail-phase seed (must differ)
    int threads = 1;
    bool quick = false; // reduced replicate counts for smoke testing only
};

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyAllResult {
    std::vector<CriterionResult> criteria;
    bool pass = false;
    std::map<std::string, std::string> csvs;
    nlohmann::json derived;
};

namespace verify_detail {

struct Core {
    std::vector<CriterionResult> criteria;
    std::map<std::string, std::string> csvs;
    nlohmann::json derived;
};

inline std::string fmt_detail(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
}

// 1. Exact kernel-integrability sweep over every nonempty event of small
// product spaces.
inline CriterionResult criterion_kernel_check(const VerifySettings& st, CsvWriter& csv,
                                          nlohmann::json& derived) {
    CriterionResult res{1, "kernel exponential integrability (exhaustive events)", true, ""};
    double worst = 0.0;
    double spot = -1.0;
    const std::vector<std::vector<double>> prob_sets = {{0.5, 0.5}, {0.25, 0.75}};
    for (std::size_t s = 0; s < prob_sets.size(); ++s) {
        FiniteSpace space({0.0, 1.0}, prob_sets[s]);
        const std::string label = s == 0 ? "half-half" : "quarter-three-quarters";
        for (int n = 1; n <= 3; ++n) {
            for (double alpha : {0.5, 1.0, 2.0}) {
                KernelCheckOptions opt;
                opt.threads = st.threads;
                const auto report = verify_kernel_integrability(space, n, alpha, opt);
                res.pass = res.pass && report.pass;
                worst = std::max(worst, report.max_product);
                for (const auto& row : report.rows) {
                    csv.row({label, CsvWriter::cell(n), CsvWriter::cell(alpha),
                             CsvWriter::cell(row.event_id), CsvWriter::cell(row.prob),
                             CsvWriter::cell(row.integral), CsvWriter::cell(row.product),
                             CsvWriter::cell(row.pass)});
                    if (s == 0 && n == 1 && alpha == 1.0 && row.event_id == 0b01ULL)
                        spot = row.product;
                }
            }
        }
    }
    const bool spot_ok = std::fabs(spot - 0.6411) <= 1e-3;
    res.pass = res.pass && spot_ok;
    res.detail = "max product " + fmt_detail(worst) + "; spot " + fmt_detail(spot);
    derived["kernel_check_max_product"] = worst;
    return res;
}

// 2. The kernel constant at alpha = 1.
inline CriterionResult criterion_kernel_constant(CsvWriter& csv, nlohmann::json& derived) {
    CriterionResult res{2, "kernel constant L_1", true, ""};
    const double l1 = solve_l(1.0);
    const double residual = std::fabs(l_constraint_lhs(l1) - 1.0);
    res.pass = l1 >= 1.1170 && l1 <= 1.1180 && residual <= 1e-9;
    res.detail = "L_1 = " + fmt_detail(l1) + "; residual " + fmt_detail(residual);
    for (double alpha : {0.5, 1.0, 2.0}) {
        const double l = solve_l(alpha);
        csv.row({CsvWriter::cell(alpha), CsvWriter::cell(l),
                 CsvWriter::cell(std::fabs(l_constraint_lhs(l) - alpha))});
    }
    derived["L1"] = l1;
    return res;
}

// 3. Normalized-deviation tail at the pinned desk scale, with a half-resolution
// re-run guarding against grid-induced optimism.
inline CriterionResult criterion_deviation_tail(const VerifySettings& st, CsvWriter& csv,
                                           nlohmann::json& derived) {
    CriterionResult res{3, "normalized deviation tail (sqrt-mean normalizer)", true, ""};
    Experiment exp;
    exp.fclass = std::make_shared<Thresholds>(Distribution::uniform());
    exp.dist = Distribution::uniform();
    exp.n = 200;
    exp.replicates = st.quick ? 301 : 2001;
    exp.seed = st.seed;
    exp.normalizer = Normalizer::sqrt_mean();
    exp.resolution = 1.0 / 1024.0;
    exp.u_grid = {0.5, 1.0, 2.0, 3.0};
    const double L = solve_l(1.0);
    const MedianEstimate med = estimate_median(exp, st.threads);
    derived["deviation_median_n200"] = med.median;

    Experiment tail = exp;
    tail.replicates = st.quick ? 1500 : 10000;
    for (double resolution : {1.0 / 1024.0, 1.0 / 2048.0}) {
        tail.resolution = resolution;
        const auto report = tail_experiment(tail, med.median, L, st.tail_seed, st.threads);
        res.pass = res.pass && report.pass;
        for (const auto& row : report.rows)
            csv.row({CsvWriter::cell(resolution), CsvWriter::cell(row.u),
                     CsvWriter::cell(med.median), CsvWriter::cell(row.coeff_phi),
                     CsvWriter::cell(row.coeff_root), CsvWriter::cell(row.violations),
                     CsvWriter::cell(row.freq), CsvWriter::cell(row.stderr_freq),
                     CsvWriter::cell(row.budget), CsvWriter::cell(row.pass)});
    }
    res.detail = "median " + fmt_detail(med.median);
    return res;
}

// 4. Integrated-entropy form with one calibrated absolute constant across n.
inline CriterionResult criterion_entropy_tail(const VerifySettings& st, CsvWriter& csv,
                                           nlohmann::json& derived) {
    CriterionResult res{4, "entropy-integral tail with one absolute constant", true, ""};
    const std::vector<std::int64_t> n_grid = {100, 200, 400};
    const std::vector<double> u_grid = {1.0, 2.0};
    std::vector<std::vector<std::vector<double>>> stats;
    std::vector<std::vector<double>> grids;
    std::vector<Experiment> exps;
    for (std::int64_t n : n_grid) {
        Experiment exp;
        exp.fclass = std::make_shared<Thresholds>(Distribution::uniform());
        exp.dist = Distribution::uniform();
        exp.n = n;
        exp.replicates = st.quick ? 301 : 2001;
        exp.seed = derive_seed(st.seed, static_cast<std::uint64_t>(n));
        exp.normalizer = Normalizer::entropy(haussler_envelope(1));
        exp.resolution = 1.0 / 1024.0;
        exp.u_grid = u_grid;
        const MedianEstimate med = estimate_median(exp, st.threads);
        derived["entropy_median_n" + std::to_string(n)] = med.median;

        Experiment tail = exp;
        tail.replicates = st.quick ? 1500 : 10000;
        stats.push_back(integrated_tail_statistics(
            tail, derive_seed(st.tail_seed, static_cast<std::uint64_t>(n)), st.threads));
        grids.push_back(u_grid);
        exps.push_back(tail);
    }
    double K = 0.0;
    try {
        K = calibrate_k(stats, grids);
    } catch (const DomainError&) {
        res.pass = false;
        res.detail = "no power of two passes: calibration failed";
        return res;
    }
    derived["K_calibrated"] = K;
    for (std::size_t e = 0; e < stats.size(); ++e) {
        for (std::size_t j = 0; j < u_grid.size(); ++j) {
            const auto& t = stats[e][j];
            std::int64_t viol = 0;
            for (double v : t)
                if (v > K) ++viol;
            const double R = static_cast<double>(t.size());
            const double freq = static_cast<double>(viol) / R;
            const double se = std::sqrt(std::max(freq * (1.0 - freq), 0.0) / R);
            const double budget = std::min(1.0, 2.0 * std::exp(-u_grid[j]));
            const bool pass = freq <= budget + 3.0 * se;
            res.pass = res.pass && pass;
            csv.row({CsvWriter::cell(n_grid[e]), CsvWriter::cell(u_grid[j]), CsvWriter::cell(K),
                     CsvWriter::cell(viol), CsvWriter::cell(freq), CsvWriter::cell(se),
                     CsvWriter::cell(budget), CsvWriter::cell(pass)});
        }
    }
    res.detail = "calibrated K = " + fmt_detail(K);
    return res;
}

// 5. Median boundedness in n under both entropy normalizations.
inline CriterionResult criterion_median_band(const VerifySettings& st, CsvWriter& csv,
                                             nlohmann::json& derived) {
    CriterionResult res{5, "median boundedness across n (entropy + bracketing)", true, ""};
    const std::vector<std::int64_t> n_grid = {50, 100, 200, 400, 800};
    std::vector<double> grid64;
    for (int k = 1; k <= 64; ++k) grid64.push_back(k / 64.0);
    const std::vector<std::pair<std::string, Normalizer>> norms = {
        {"entropy", Normalizer::entropy(haussler_envelope(1))},
        {"bracketing",
         Normalizer::bracketing(bracketing_table_envelope(ContinuousLine::uniform(), grid64))}};
    for (const auto& [name, norm] : norms) {
        Experiment base;
        base.fclass = std::make_shared<Thresholds>(Distribution::uniform());
        base.dist = Distribution::uniform();
        base.replicates = st.quick ? 301 : 2001;
        base.seed = derive_seed(st.seed, name == "entropy" ? 0xE1 : 0xB2);
        base.normalizer = norm;
        base.resolution = 1.0 / 1024.0;
        const MedianScan scan = median_stability_scan(base, n_grid, st.threads);
        const double factor = scan.band_factor();
        res.pass = res.pass && factor <= 1.5;
        res.detail += (res.detail.empty() ? "" : "; ") + name + " band " + fmt_detail(factor);
        derived["median_band_" + name] = factor;
        for (const auto& row : scan.rows)
            csv.row({name, CsvWriter::cell(row.n), CsvWriter::cell(row.estimate.median),
                     CsvWriter::cell(row.estimate.q25), CsvWriter::cell(row.estimate.q75)});
    }
    return res;
}

// 6. Packing oracle agreement and exact shatter/vc values.
inline CriterionResult criterion_capacity(const VerifySettings& st, CsvWriter& csv) {
    CriterionResult res{6, "capacity oracles (packing, shattering, sauer)", true, ""};
    (void)st;
    // Greedy packing equals the exhaustive maximum on random threshold-trace
    // point sets: these are the packing inputs the library actually sees, and
    // their staircase geometry is a line metric, where index-ordered greedy
    // selection attains the maximum. (On arbitrary clouds only <= holds.)
    int packing_fail = 0;
    const int packing_cases = 200;
    for (int t = 0; t < packing_cases; ++t) {
        Rng rng = Rng::for_replicate(20250809, static_cast<std::uint64_t>(t));
        const int dim = 4 + static_cast<int>(rng.next_below(13)); // sample size
        const int npts = 2 + static_cast<int>(rng.next_below(11)); // members, <= 12
        std::vector<double> sample(static_cast<std::size_t>(dim));
        for (auto& v : sample) v = rng.next_unit();
        std::vector<double> cuts(static_cast<std::size_t>(npts));
        for (auto& c : cuts) c = rng.next_unit();
        std::sort(cuts.begin(), cuts.end());
        std::vector<std::vector<double>> pts;
        for (double c : cuts) {
            std::vector<double> row(static_cast<std::size_t>(dim));
            for (int i = 0; i < dim; ++i)
                row[static_cast<std::size_t>(i)] = sample[static_cast<std::size_t>(i)] <= c ? 1.0 : 0.0;
            pts.push_back(std::move(row));
        }
        const double u = 0.1 + 0.8 * rng.next_unit();
        PackingQuery q{pts, u};
        if (greedy_packing(q).count != brute_packing(q)) ++packing_fail;
    }
    csv.row({"greedy_equals_brute", CsvWriter::cell(packing_cases),
             CsvWriter::cell(packing_fail), CsvWriter::cell(packing_fail == 0)});
    res.pass = res.pass && packing_fail == 0;

    // exact vc results on 5-atom layouts, plus sauer domination
    int vc_fail = 0, sauer_fail = 0, vc_cases = 0, sauer_cases = 0;
    for (int layout = 0; layout < 40; ++layout) {
        Rng rng = Rng::for_replicate(97531, static_cast<std::uint64_t>(layout));
        std::vector<double> atoms;
        while (atoms.size() < 5) {
            const double v = rng.next_unit();
            bool fresh = true;
            for (double a : atoms) fresh = fresh && std::fabs(a - v) > 1e-6;
            if (fresh) atoms.push_back(v);
        }
        std::vector<double> probs(5, 0.2);
        FiniteSpace space(atoms, probs);
        const auto half = threshold_sets(space);
        const auto ivl = interval_sets(space);
        ++vc_cases;
        if (vc_dimension(half).d != 1 || vc_dimension(ivl).d != 2) ++vc_fail;
        for (const auto* sets : {&half, &ivl}) {
            const int d = vc_dimension(*sets).d;
            for (int n = d; n <= 5; ++n) {
                ++sauer_cases;
                if (static_cast<double>(shatter_coefficient(*sets, n).count) >
                    sauer_bound(d, n) + 1e-9)
                    ++sauer_fail;
            }
        }
    }
    csv.row({"vc_halflines_intervals", CsvWriter::cell(vc_cases), CsvWriter::cell(vc_fail),
             CsvWriter::cell(vc_fail == 0)});
    csv.row({"shatter_le_sauer", CsvWriter::cell(sauer_cases), CsvWriter::cell(sauer_fail),
             CsvWriter::cell(sauer_fail == 0)});
    res.pass = res.pass && vc_fail == 0 && sauer_fail == 0;
    res.detail = "packing failures " + std::to_string(packing_fail) + "; vc failures " +
                 std::to_string(vc_fail);
    return res;
}

// 7. Net-hierarchy invariants on random classes, zero failures.
inline CriterionResult criterion_chaining(const VerifySettings& st, CsvWriter& csv) {
    CriterionResult res{7, "chaining hierarchy invariants", true, ""};
    int failures = 0;
    const int classes = st.quick ? 10 : 50;
    for (int t = 0; t < classes; ++t) {
        Rng rng = Rng::for_replicate(86420, static_cast<std::uint64_t>(t));
        const int members = 8 + static_cast<int>(rng.next_below(57)); // <= 64
        std::vector<std::vector<double>> vecs(static_cast<std::size_t>(members),
                                              std::vector<double>(128));
        for (auto& v : vecs)
            for (auto& e : v) e = rng.next_unit();
        PointSet2n pts(vecs);
        const auto h = build_hierarchy(pts, 20);
        bool ok = true;
        for (int j = 0; j <= h.j_max && ok; ++j) {
            const auto& level = h.levels[static_cast<std::size_t>(j)];
            const double scale = std::ldexp(1.0, -j);
            for (std::size_t a = 0; a < level.size() && ok; ++a)
                for (std::size_t b = a + 1; b < level.size() && ok; ++b)
                    ok = h.dist(level[a], level[b]) > scale;
            for (int p = 0; p < static_cast<int>(h.pts.size()) && ok; ++p) {
                double best = 1e300;
                for (int s : level) best = std::min(best, h.dist(p, s));
                ok = best <= scale;
            }
        }
        const auto deltas = delta_sets(h);
        for (int j = 1; j <= h.j_max && ok; ++j) {
            const auto& dl = deltas[static_cast<std::size_t>(j)];
            if (!dl.zero_only)
                ok = dl.pairs.size() <= h.levels[static_cast<std::size_t>(j)].size() *
                                            h.levels[static_cast<std::size_t>(j - 1)].size();
        }
        for (std::size_t f = 0; f < vecs.size() && ok; ++f) {
            const auto pis = project(h, f);
            const int fi = h.member_index(f);
            std::vector<double> acc(vecs[f].size(), 0.0);
            for (int k = 0; k <= h.j_max && ok; ++k) {
                ok = h.dist(fi, pis[static_cast<std::size_t>(k)]) <=
                     std::ldexp(1.0, -k) + 1e-12;
                if (k > 0) {
                    ok = ok && h.dist(pis[static_cast<std::size_t>(k - 1)],
                                      pis[static_cast<std::size_t>(k)]) <=
                                   std::ldexp(1.0, -k + 2) + 1e-12;
                    const auto& cur =
                        h.pts[static_cast<std::size_t>(pis[static_cast<std::size_t>(k)])];
                    const auto& prev =
                        h.pts[static_cast<std::size_t>(pis[static_cast<std::size_t>(k - 1)])];
                    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += cur[i] - prev[i];
                }
            }
            for (std::size_t i = 0; i < acc.size() && ok; ++i)
                ok = std::fabs(acc[i] - vecs[f][i]) <= 1e-12;
        }
        if (!ok) ++failures;
    }
    csv.row({"hierarchy_invariants", CsvWriter::cell(classes), CsvWriter::cell(failures),
             CsvWriter::cell(failures == 0)});

    // tail-sum control for the dyadic band integrals
    int tail_fail = 0, tail_cases = 0;
    for (const auto& env : {EntropyEnvelope::power(2.0, 1.0), haussler_envelope(1)}) {
        const auto ints = level_integrals(env, 64, 20, 1e-10);
        for (int j = 0; j < 20; ++j) {
            double tail = 0.0;
            for (int k = j + 1; k <= 20; ++k) tail += ints[static_cast<std::size_t>(k)];
            const double cap = 8.0 * entropy_integral(env, std::ldexp(1.0, -j - 1), 1e-10);
            ++tail_cases;
            if (tail > cap + 1e-9) ++tail_fail;
        }
    }
    csv.row({"tail_sum_bound", CsvWriter::cell(tail_cases), CsvWriter::cell(tail_fail),
             CsvWriter::cell(tail_fail == 0)});
    res.pass = failures == 0 && tail_fail == 0;
    res.detail = std::to_string(failures) + " class failures; " + std::to_string(tail_fail) +
                 " tail-sum failures";
    return res;
}

// 8. Quadrature against closed forms.
inline CriterionResult criterion_quadrature(CsvWriter& csv) {
    CriterionResult res{8, "entropy quadrature closed forms", true, ""};
    double worst_const = 0.0;
    for (std::int64_t n : {4, 100, 3137}) {
        for (double p : {0.0625, 0.25, 1.0}) {
            const double got = phi({EntropyEnvelope::constant_envelope(2.0), n, 1e-12}, p);
            const double want =
                std::sqrt(static_cast<double>(n)) * std::sqrt(std::log(2.0)) * std::sqrt(p);
            const double rel = std::fabs(got - want) / want;
            worst_const = std::max(worst_const, rel);
            csv.row({"constant_envelope", CsvWriter::cell(got), CsvWriter::cell(want),
                     CsvWriter::cell(rel), CsvWriter::cell(rel <= 1e-10)});
        }
    }
    const double gauss = entropy_integral(EntropyEnvelope::power(1.0, 1.0), 1.0, 1e-9);
    const double target = 0.88622692545275801; // sqrt(pi)/2
    const double rel = std::fabs(gauss - target) / target;
    csv.row({"power_gamma_1", CsvWriter::cell(gauss), CsvWriter::cell(target),
             CsvWriter::cell(rel), CsvWriter::cell(rel <= 1e-6)});
    res.pass = worst_const <= 1e-10 && rel <= 1e-6;
    res.detail = "const rel " + fmt_detail(worst_const) + "; power rel " + fmt_detail(rel);
    return res;
}

// 9. Proof-step suites: the product inequality, h(c) facts, the delta infimum.
inline CriterionResult criterion_proof_steps(CsvWriter& csv) {
    CriterionResult res{9, "proof-step inequalities", true, ""};
    const PsiParams one{1.0};
    int ineq_fail = 0;
    const int ineq_cases = 100000;
    for (int i = 0; i < ineq_cases; ++i) {
        Rng rng = Rng::for_replicate(111, static_cast<std::uint64_t>(i));
        const double u = 2.0 * rng.next_unit() - 1.0;
        const double v = 8.0 * rng.next_unit();
        if (u * v > (u > 0.0 ? u * u : 0.0) + psi(one, v) + 1e-12) ++ineq_fail;
    }
    int boundary = 0;
    for (int iu = -20; iu <= 20; ++iu)
        for (int iv = 0; iv <= 80; ++iv) {
            const double u = iu / 20.0;
            const double v = iv / 20.0;
            ++boundary;
            if (u * v > (u > 0.0 ? u * u : 0.0) + psi(one, v) + 1e-12) ++ineq_fail;
        }
    csv.row({"product_inequality", CsvWriter::cell(ineq_cases + boundary),
             CsvWriter::cell(ineq_fail), CsvWriter::cell(0.0), CsvWriter::cell(ineq_fail == 0)});

    // h(c) facts on random laws plus the two-point closed form
    std::vector<double> grid;
    for (int k = 0; k <= 40; ++k) grid.push_back(k / 40.0);
    int h_fail = 0;
    for (int t = 0; t < 100; ++t) {
        Rng rng = Rng::for_replicate(222, static_cast<std::uint64_t>(t));
        std::vector<std::pair<double, double>> law(1 + rng.next_below(12));
        double total = 0.0;
        for (auto& [tv, q] : law) {
            tv = rng.next_unit();
            q = 0.05 + rng.next_unit();
            total += q;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < law.size(); ++i) {
            law[i].second /= total;
            acc += law[i].second;
        }
        law.back().second = 1.0 - acc;
        if (!h_check(law, grid, 20, 25, 333 + static_cast<std::uint64_t>(t)).pass) ++h_fail;
    }
    const auto bern = h_check({{0.0, 0.7}, {1.0, 0.3}}, grid, 10, 10, 444);
    const double bern_mid = bern.rows[20].h; // c = 0.5
    const bool bern_ok = bern.pass && std::fabs(bern_mid - 0.075) <= 1e-12;
    csv.row({"h_check", CsvWriter::cell(101), CsvWriter::cell(h_fail + (bern_ok ? 0 : 1)),
             CsvWriter::cell(std::fabs(bern_mid - 0.075)), CsvWriter::cell(h_fail == 0 && bern_ok)});

    // closed-form infimum against golden-section minimization
    double worst_delta = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Rng rng = Rng::for_replicate(555, static_cast<std::uint64_t>(i));
        const double a = 50.0 * rng.next_unit();
        const double b = 20.0 * rng.next_unit();
        auto f = [&](double d) { return a / d + d * b; };
        double direct;
        if (b == 0.0) {
            direct = 0.0;
        } else {
            double lo = 1.0, hi = std::max(2.0, 4.0 * std::sqrt(std::max(a, 1.0) / b));
            const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
            double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
            double f1 = f(x1), f2 = f(x2);
            for (int it = 0; it < 300; ++it) {
                if (f1 < f2) {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - gr * (hi - lo);
                    f1 = f(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + gr * (hi - lo);
                    f2 = f(x2);
                }
            }
            direct = std::min(f(1.0 + 1e-14), std::min(f1, f2));
        }
        worst_delta = std::max(worst_delta, std::fabs(inf_delta_tradeoff(a, b) - direct));
    }
    csv.row({"inf_delta_vs_direct", CsvWriter::cell(1000), CsvWriter::cell(0),
             CsvWriter::cell(worst_delta), CsvWriter::cell(worst_delta <= 1e-9)});

    res.pass = ineq_fail == 0 && h_fail == 0 && bern_ok && worst_delta <= 1e-9;
    res.detail = "inf-delta max err " + fmt_detail(worst_delta);
    return res;
}

// 10. Rate calculus: log-log slopes and the smooth-boundary exponent identity.
inline CriterionResult criterion_rates(CsvWriter& csv) {
    CriterionResult res{10, "zero-error rates and exponent identity", true, ""};
    for (double gamma : {0.5, 1.0, 1.5}) {
        RateSpec spec{1.0, gamma, 0.0};
        std::vector<double> lx, ly;
        for (std::int64_t n : {100, 1000, 10000, 100000, 1000000}) {
            const double p = zero_error_rate(spec, n);
            lx.push_back(std::log(static_cast<double>(n)));
            ly.push_back(std::log(p));
            csv.row({"rate", CsvWriter::cell(gamma), CsvWriter::cell(static_cast<double>(n)),
                     CsvWriter::cell(p), CsvWriter::cell(true)});
        }
        double mx = 0, my = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            mx += lx[i];
            my += ly[i];
        }
        mx /= lx.size();
        my /= ly.size();
        double num = 0, den = 0;
        for (std::size_t i = 0; i < lx.size(); ++i) {
            num += (lx[i] - mx) * (ly[i] - my);
            den += (lx[i] - mx) * (lx[i] - mx);
        }
        const double slope = num / den;
        const double target = -2.0 / (2.0 + gamma);
        const bool ok = std::fabs(slope - target) <= 0.02;
        res.pass = res.pass && ok;
        csv.row({"slope", CsvWriter::cell(gamma), CsvWriter::cell(slope),
                 CsvWriter::cell(target), CsvWriter::cell(ok)});
    }
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        Rng rng = Rng::for_replicate(666, static_cast<std::uint64_t>(i));
        const double alpha = 0.25 + 4.0 * rng.next_unit();
        const int l = 2 + static_cast<int>(rng.next_below(4));
        const double gamma = smooth_boundary_rate(alpha, l, 10).gamma;
        worst = std::max(worst,
                         std::fabs(-2.0 / (2.0 + gamma) - (-alpha / (l - 1 + alpha))));
    }
    csv.row({"exponent_identity", CsvWriter::cell(20.0), CsvWriter::cell(worst),
             CsvWriter::cell(1e-12), CsvWriter::cell(worst <= 1e-12)});
    res.pass = res.pass && worst <= 1e-12;
    res.detail = "identity max err " + fmt_detail(worst);
    return res;
}

// 11. Symmetrization inequality at the pinned scale.
inline CriterionResult criterion_symmetrization(const VerifySettings& st, CsvWriter& csv,
                                                nlohmann::json& derived) {
    CriterionResult res{11, "symmetrization inequality", true, ""};
    Experiment exp;
    exp.fclass = std::make_shared<Thresholds>(Distribution::uniform());
    exp.dist = Distribution::uniform();
    exp.n = 100;
    exp.replicates = st.quick ? 1000 : 5000;
    exp.seed = derive_seed(st.seed, 0x51);
    exp.normalizer = Normalizer::entropy(haussler_envelope(1));
    exp.resolution = 1.0 / 1024.0;
    exp.u_grid = {2.0, 2.5, 3.0};
    const auto report = symmetrization_experiment(exp, st.threads);
    res.pass = report.pass && std::fabs(report.shift - std::sqrt(2.0 / std::log(2.0))) <= 1e-12 &&
               std::fabs(report.shift - 1.6987) <= 1e-3;
    for (const auto& row : report.rows)
        csv.row({CsvWriter::cell(row.u), CsvWriter::cell(row.lhs_freq),
                 CsvWriter::cell(row.rhs_freq), CsvWriter::cell(row.lhs_stderr),
                 CsvWriter::cell(row.rhs_stderr), CsvWriter::cell(report.shift),
                 CsvWriter::cell(row.pass)});
    res.detail = "shift " + fmt_detail(report.shift);
    derived["symmetrization_shift"] = report.shift;
    return res;
}

inline Core run_core(const VerifySettings& st) {
    Core core;
    core.derived = nlohmann::json::object();

    CsvWriter kcheck({"space", "n", "alpha", "event_id", "prob", "integral", "product", "pass"});
    core.criteria.push_back(criterion_kernel_check(st, kcheck, core.derived));
    core.csvs["kernel_check_events.csv"] = kcheck.str();

    CsvWriter lcsv({"alpha", "L", "residual"});
    core.criteria.push_back(criterion_kernel_constant(lcsv, core.derived));
    core.csvs["kernel_constant.csv"] = lcsv.str();

    CsvWriter tail({"resolution", "u", "median", "coeff_phi", "coeff_root", "violations", "freq",
                    "stderr", "budget", "pass"});
    core.criteria.push_back(criterion_deviation_tail(st, tail, core.derived));
    core.csvs["deviation_tail.csv"] = tail.str();

    CsvWriter cor({"n", "u", "K", "violations", "freq", "stderr", "budget", "pass"});
    core.criteria.push_back(criterion_entropy_tail(st, cor, core.derived));
    core.csvs["entropy_tail.csv"] = cor.str();

    CsvWriter med({"normalizer", "n", "median", "q25", "q75"});
    core.criteria.push_back(criterion_median_band(st, med, core.derived));
    core.csvs["median_scan.csv"] = med.str();

    CsvWriter cap({"check", "cases", "failures", "pass"});
    core.criteria.push_back(criterion_capacity(st, cap));
    core.csvs["capacity_checks.csv"] = cap.str();

    CsvWriter chain({"check", "cases", "failures", "pass"});
    core.criteria.push_back(criterion_chaining(st, chain));
    core.csvs["chaining_checks.csv"] = chain.str();

    CsvWriter quad({"check", "value", "target", "rel_error", "pass"});
    core.criteria.push_back(criterion_quadrature(quad));
    core.csvs["quadrature_checks.csv"] = quad.str();

    CsvWriter steps({"check", "cases", "failures", "max_error", "pass"});
    core.criteria.push_back(criterion_proof_steps(steps));
    core.csvs["proof_steps.csv"] = steps.str();

    CsvWriter rates({"row", "gamma", "value", "target", "pass"});
    core.criteria.push_back(criterion_rates(rates));
    core.csvs["rates.csv"] = rates.str();

    CsvWriter symm({"u", "lhs_freq", "rhs_freq", "lhs_stderr", "rhs_stderr", "shift", "pass"});
    core.criteria.push_back(criterion_symmetrization(st, symm, core.derived));
    core.csvs["symmetrization.csv"] = symm.str();

    return core;
}

} // namespace verify_detail

// Runs criteria 1-11, then re-runs the whole battery (same thread count, and
// again with a different one) and byte-compares every CSV for criterion 12.
inline VerifyAllResult run_verify_all(const VerifySettings& settings) {
    if (settings.seed == settings.tail_seed)
        throw ProtocolError("verify-all: tail seed must differ from the median seed");
    VerifyAllResult result;
    auto first = verify_detail::run_core(settings);
    auto repeat = verify_detail::run_core(settings);
    VerifySettings other = settings;
    other.threads = settings.threads == 1 ? 2 : 1;
    auto cross = verify_detail::run_core(other);

    const bool rerun_equal = first.csvs == repeat.csvs;
    const bool thread_equal = first.csvs == cross.csvs;
    CsvWriter det({"comparison", "equal"});
    det.row({"identical_config_rerun", CsvWriter::cell(rerun_equal)});
    det.row({"thread_count_variation", CsvWriter::cell(thread_equal)});

    result.criteria = first.criteria;
    result.csvs = first.csvs;
    result.derived = first.derived;
    result.criteria.push_back({12, "determinism across reruns and thread counts",
                               rerun_equal && thread_equal,
                               rerun_equal ? (thread_equal ? "byte-identical" : "thread variation differs")
                                           : "rerun differs"});
    result.csvs["determinism.csv"] = det.str();

    CsvWriter summary({"criterion", "name", "pass", "detail"});
    result.pass = true;
    for (const auto& c : result.criteria) {
        result.pass = result.pass && c.pass;
        summary.row({CsvWriter::cell(c.id), c.name, CsvWriter::cell(c.pass), c.detail});
    }
    result.csvs["summary.csv"] = summary.str();
    return result;
}

} // namespace epb
