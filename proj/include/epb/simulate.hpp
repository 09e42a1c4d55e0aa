#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "epb/bounds.hpp"
#include "epb/classes.hpp"
#include "epb/errors.hpp"
#include "epb/normalizer.hpp"
#include "epb/parallel.hpp"
#include "epb/rng.hpp"
#include "epb/space.hpp"

namespace epb {

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
    return Rng::for_replicate(seed, 0x70AEB1ULL + tag).next_u64();
}

// One Monte Carlo experiment: class, law, sample size, replicate budget,
// seed, normalizer, deviation grid, and the class discretization.
struct Experiment {
    std::shared_ptr<const FunctionClass> fclass;
    Distribution dist = Distribution::uniform();
    std::int64_t n = 100;
    std::int64_t replicates = 1001;
    std::uint64_t seed = 1;
    Normalizer normalizer = Normalizer::sqrt_mean();
    std::vector<double> u_grid = {1.0, 2.0};
    double resolution = 1.0 / 1024.0;

    void validate() const {
        if (!fclass) throw DomainError("experiment: missing function class");
        if (n < 1) throw DomainError("experiment: n >= 1 required");
        if (replicates < 1) throw DomainError("experiment: replicates >= 1 required");
        if (!(resolution > 0.0)) throw DomainError("experiment: resolution must be > 0");
    }
};

namespace detail {
// Member grid with exact means and phi values fixed once per experiment.
struct MemberTable {
    std::vector<MemberId> ids;
    std::vector<double> pf;
    std::vector<double> phi;

    MemberTable(const FunctionClass& cls, double resolution, std::int64_t n,
                const Normalizer& norm) {
        ids = cls.members(resolution);
        if (ids.empty()) throw DomainError("experiment: empty member list at this resolution");
        pf.resize(ids.size());
        phi.resize(ids.size());
        for (std::size_t k = 0; k < ids.size(); ++k) {
            pf[k] = cls.true_mean(ids[k]);
            phi[k] = norm.phi_p(pf[k], n);
        }
    }
};

// Deviation sums n Pf - sum_i f(x_i) for every member of the table.
inline void deviations(const FunctionClass& cls, const MemberTable& table, const Sample& x,
                       std::vector<double>& sums, std::vector<double>& dev) {
    sums.resize(table.ids.size());
    dev.resize(table.ids.size());
    cls.sums_on(x.points, table.ids, sums);
    const double n = static_cast<double>(x.n());
    for (std::size_t k = 0; k < table.ids.size(); ++k) dev[k] = n * table.pf[k] - sums[k];
}
} // namespace detail

// ---- median estimation ----------------------------------------------------------

struct MedianEstimate {
    double median = 0.0;
    double below = 0.0; // order statistics adjacent to the median
    double above = 0.0;
    double q25 = 0.0;
    double q75 = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::int64_t replicates = 0;
};

// Sample median of Z over R independent replicates; R must be odd so the
// median is an order statistic, matching the definitional median condition.
inline MedianEstimate estimate_median(const Experiment& exp, int threads = 1) {
    exp.validate();
    if (exp.replicates % 2 == 0)
        throw DomainError("estimate_median: replicate count must be odd");
    const detail::MemberTable table(*exp.fclass, exp.resolution, exp.n, exp.normalizer);
    std::vector<double> z(static_cast<std::size_t>(exp.replicates));
    parallel_for(0, exp.replicates, threads, [&](std::int64_t r) {
        const Sample x = draw_sample(exp.dist, static_cast<std::size_t>(exp.n), exp.seed,
                                     static_cast<std::uint64_t>(r));
        std::vector<double> sums, dev;
        detail::deviations(*exp.fclass, table, x, sums, dev);
        double best = dev[0] / table.phi[0];
        for (std::size_t k = 1; k < dev.size(); ++k)
            best = std::max(best, dev[k] / table.phi[k]);
        z[static_cast<std::size_t>(r)] = best;
    });
    std::sort(z.begin(), z.end());
    MedianEstimate est;
    est.replicates = exp.replicates;
    const std::size_t mid = z.size() / 2;
    est.median = z[mid];
    est.below = mid > 0 ? z[mid - 1] : z[mid];
    est.above = mid + 1 < z.size() ? z[mid + 1] : z[mid];
    est.q25 = z[z.size() / 4];
    est.q75 = z[(3 * z.size()) / 4];
    est.min = z.front();
    est.max = z.back();
    return est;
}

// ---- tail experiments -------------------------------------------------------------

struct TailRow {
    double u = 0.0;
    double coeff_phi = 0.0;  // multiplies phi(f)
    double coeff_root = 0.0; // multiplies sqrt(n u Pf)
    std::int64_t violations = 0;
    double freq = 0.0;
    double stderr_freq = 0.0;
    double budget = 0.0; // min(1, 2 e^{-u})
    bool pass = false;
};

struct TailReport {
    std::vector<TailRow> rows;
    std::int64_t replicates = 0;
    double resolution = 0.0;
    bool pass = false;
};

namespace detail {
inline TailReport tail_run(const Experiment& exp, double coeff_phi, double coeff_root,
                           std::uint64_t tail_seed, int threads) {
    exp.validate();
    if (tail_seed == exp.seed)
        throw ProtocolError("tail phase must not reuse the median-phase seed");
    if (exp.u_grid.empty()) throw DomainError("tail experiment: empty u grid");
    const MemberTable table(*exp.fclass, exp.resolution, exp.n, exp.normalizer);
    const std::size_t nu = exp.u_grid.size();
    const double n = static_cast<double>(exp.n);

    // per-(u, member) thresholds
    std::vector<std::vector<double>> thresholds(nu);
    for (std::size_t j = 0; j < nu; ++j) {
        thresholds[j].resize(table.ids.size());
        for (std::size_t k = 0; k < table.ids.size(); ++k)
            thresholds[j][k] = coeff_phi * table.phi[k] +
                               coeff_root * std::sqrt(n * exp.u_grid[j] * table.pf[k]);
    }

    std::vector<std::uint32_t> violation_mask(static_cast<std::size_t>(exp.replicates), 0);
    parallel_for(0, exp.replicates, threads, [&](std::int64_t r) {
        const Sample x = draw_sample(exp.dist, static_cast<std::size_t>(exp.n), tail_seed,
                                     static_cast<std::uint64_t>(r));
        std::vector<double> sums, dev;
        deviations(*exp.fclass, table, x, sums, dev);
        std::uint32_t mask = 0;
        for (std::size_t j = 0; j < nu; ++j) {
            for (std::size_t k = 0; k < dev.size(); ++k)
                if (dev[k] >= thresholds[j][k]) {
                    mask |= 1u << j;
                    break;
                }
        }
        violation_mask[static_cast<std::size_t>(r)] = mask;
    });

    TailReport report;
    report.replicates = exp.replicates;
    report.resolution = exp.resolution;
    report.pass = true;
    for (std::size_t j = 0; j < nu; ++j) {
        TailRow row;
        row.u = exp.u_grid[j];
        row.coeff_phi = coeff_phi;
        row.coeff_root = coeff_root;
        for (std::uint32_t mask : violation_mask)
            if (mask >> j & 1u) ++row.violations;
        const double R = static_cast<double>(exp.replicates);
        row.freq = static_cast<double>(row.violations) / R;
        row.stderr_freq = std::sqrt(std::max(row.freq * (1.0 - row.freq), 0.0) / R);
        row.budget = std::min(1.0, 2.0 * std::exp(-row.u));
        row.pass = row.freq <= row.budget + 3.0 * row.stderr_freq;
        report.pass = report.pass && row.pass;
        report.rows.push_back(row);
    }
    return report;
}
} // namespace detail

// Violation frequency of sum(Pf - f) >= M phi(f) + 2 sqrt(L n u Pf) on fresh
// replicates, per u; passes when the frequency stays within 2 e^{-u} plus
// three binomial standard errors.
inline TailReport tail_experiment(const Experiment& exp, double M, double L,
                                  std::uint64_t tail_seed, int threads = 1) {
    return detail::tail_run(exp, M, 2.0 * std::sqrt(L), tail_seed, threads);
}

// Same protocol for the integrated form sum(Pf - f) >= K (phi(f) + sqrt(n u Pf)).
inline TailReport integrated_tail_experiment(const Experiment& exp, double K,
                                            std::uint64_t tail_seed, int threads = 1) {
    return detail::tail_run(exp, K, K, tail_seed, threads);
}

// Per-replicate statistic max_f dev(f) / (phi(f) + sqrt(n u Pf)): the
// integrated bound holds at level K exactly when the statistic stays below K, so one
// pass of samples calibrates every K.
inline std::vector<std::vector<double>> integrated_tail_statistics(const Experiment& exp,
                                                             std::uint64_t tail_seed,
                                                             int threads = 1) {
    exp.validate();
    if (tail_seed == exp.seed)
        throw ProtocolError("tail phase must not reuse the median-phase seed");
    const detail::MemberTable table(*exp.fclass, exp.resolution, exp.n, exp.normalizer);
    const std::size_t nu = exp.u_grid.size();
    const double n = static_cast<double>(exp.n);
    std::vector<std::vector<double>> stats(nu,
                                           std::vector<double>(static_cast<std::size_t>(exp.replicates)));
    std::vector<std::vector<double>> denom(nu);
    for (std::size_t j = 0; j < nu; ++j) {
        denom[j].resize(table.ids.size());
        for (std::size_t k = 0; k < table.ids.size(); ++k)
            denom[j][k] = table.phi[k] + std::sqrt(n * exp.u_grid[j] * table.pf[k]);
    }
    parallel_for(0, exp.replicates, threads, [&](std::int64_t r) {
        const Sample x = draw_sample(exp.dist, static_cast<std::size_t>(exp.n), tail_seed,
                                     static_cast<std::uint64_t>(r));
        std::vector<double> sums, dev;
        detail::deviations(*exp.fclass, table, x, sums, dev);
        for (std::size_t j = 0; j < nu; ++j) {
            double best = dev[0] / denom[j][0];
            for (std::size_t k = 1; k < dev.size(); ++k)
                best = std::max(best, dev[k] / denom[j][k]);
            stats[j][static_cast<std::size_t>(r)] = best;
        }
    });
    return stats;
}

// Smallest power of two passing every (experiment, u) at budget + 3 stderr.
inline double calibrate_k(const std::vector<std::vector<std::vector<double>>>& stats_per_exp,
                          const std::vector<std::vector<double>>& u_grids, double k_cap = 64.0) {
    for (double K = 1.0; K <= k_cap; K *= 2.0) {
        bool ok = true;
        for (std::size_t e = 0; e < stats_per_exp.size() && ok; ++e)
            for (std::size_t j = 0; j < stats_per_exp[e].size() && ok; ++j) {
                const auto& t = stats_per_exp[e][j];
                const double R = static_cast<double>(t.size());
                std::int64_t viol = 0;
                for (double v : t)
                    if (v > K) ++viol;
                const double freq = static_cast<double>(viol) / R;
                const double se = std::sqrt(std::max(freq * (1.0 - freq), 0.0) / R);
                const double budget = std::min(1.0, 2.0 * std::exp(-u_grids[e][j]));
                ok = freq <= budget + 3.0 * se;
            }
        if (ok) return K;
    }
    throw DomainError("calibrate_k: no power of two up to the cap passes all experiments");
}

// ---- symmetrization ---------------------------------------------------------------

struct SymmRow {
    double u = 0.0;
    double lhs_freq = 0.0;
    double rhs_freq = 0.0;
    double lhs_stderr = 0.0;
    double rhs_stderr = 0.0;
    bool pass = false;
};

struct SymmReport {
    std::vector<SymmRow> rows;
    double shift = 0.0;
    std::int64_t replicates = 0;
    bool pass = false;
};

// Empirical check of the symmetrization step: the one-sample normalized tail
// against twice the two-sample tail at u - (2/log 2)^{1/2}, where the
// two-sample process is normalized by phi at the pooled mean fbar(x, y).
inline SymmReport symmetrization_experiment(const Experiment& exp, int threads = 1) {
    exp.validate();
    if (exp.u_grid.empty()) throw DomainError("symmetrization: empty u grid");
    if (exp.normalizer.kind == Normalizer::Kind::EntropyIntegral ||
        exp.normalizer.kind == Normalizer::Kind::BracketingIntegral) {
        if (!exp.normalizer.envelope.satisfies_d1_at_least_2())
            throw HypothesisError("symmetrization: envelope must satisfy D(1) >= 2");
    }
    const detail::MemberTable table(*exp.fclass, exp.resolution, exp.n, exp.normalizer);
    const double n = static_cast<double>(exp.n);
    const double shift = std::sqrt(2.0 / std::log(2.0));
    const std::uint64_t seed_y = derive_seed(exp.seed, 1);

    // phi at the pooled-mean lattice k/(2n), k = 0..2n (k = 0 members carry a
    // zero numerator and are skipped)
    std::vector<double> phi_pooled(static_cast<std::size_t>(2 * exp.n) + 1, 0.0);
    for (std::size_t k = 1; k < phi_pooled.size(); ++k)
        phi_pooled[k] =
            exp.normalizer.phi_p(static_cast<double>(k) / (2.0 * n), exp.n);

    std::vector<double> z_one(static_cast<std::size_t>(exp.replicates));
    std::vector<double> z_two(static_cast<std::size_t>(exp.replicates));
    parallel_for(0, exp.replicates, threads, [&](std::int64_t r) {
        const Sample x = draw_sample(exp.dist, static_cast<std::size_t>(exp.n), exp.seed,
                                     static_cast<std::uint64_t>(r));
        const Sample y = draw_sample(exp.dist, static_cast<std::size_t>(exp.n), seed_y,
                                     static_cast<std::uint64_t>(r));
        std::vector<double> sx(table.ids.size()), sy(table.ids.size());
        exp.fclass->sums_on(x.points, table.ids, sx);
        exp.fclass->sums_on(y.points, table.ids, sy);
        double best_one = -std::numeric_limits<double>::infinity();
        double best_two = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < table.ids.size(); ++k) {
            best_one = std::max(best_one, (n * table.pf[k] - sx[k]) / table.phi[k]);
            const double pooled = sx[k] + sy[k];
            const std::int64_t cell = static_cast<std::int64_t>(std::llround(pooled));
            double phi_two;
            if (exp.normalizer.kind == Normalizer::Kind::SqrtMean ||
                exp.normalizer.kind == Normalizer::Kind::EntropyIntegral ||
                exp.normalizer.kind == Normalizer::Kind::BracketingIntegral) {
                if (pooled <= 0.0) continue;
                // thresholds and indicators give integer pooled counts; fall
                // back to a direct evaluation otherwise
                if (std::fabs(pooled - static_cast<double>(cell)) < 1e-9 && cell >= 0 &&
                    cell < static_cast<std::int64_t>(phi_pooled.size()))
                    phi_two = phi_pooled[static_cast<std::size_t>(cell)];
                else
                    phi_two = exp.normalizer.phi_p(pooled / (2.0 * n), exp.n);
            } else {
                phi_two = exp.normalizer.phi_p(std::max(pooled, 1.0) / (2.0 * n), exp.n);
            }
            best_two = std::max(best_two, (sy[k] - sx[k]) / phi_two);
        }
        z_one[static_cast<std::size_t>(r)] = best_one;
        z_two[static_cast<std::size_t>(r)] = best_two;
    });

    SymmReport report;
    report.shift = shift;
    report.replicates = exp.replicates;
    report.pass = true;
    const double R = static_cast<double>(exp.replicates);
    for (double u : exp.u_grid) {
        SymmRow row;
        row.u = u;
        std::int64_t cl = 0, cr = 0;
        for (std::size_t r = 0; r < z_one.size(); ++r) {
            if (z_one[r] >= u) ++cl;
            if (z_two[r] >= u - shift) ++cr;
        }
        row.lhs_freq = static_cast<double>(cl) / R;
        row.rhs_freq = static_cast<double>(cr) / R;
        row.lhs_stderr = std::sqrt(std::max(row.lhs_freq * (1.0 - row.lhs_freq), 0.0) / R);
        row.rhs_stderr = std::sqrt(std::max(row.rhs_freq * (1.0 - row.rhs_freq), 0.0) / R);
        const double combined = std::sqrt(row.lhs_stderr * row.lhs_stderr +
                                          4.0 * row.rhs_stderr * row.rhs_stderr);
        row.pass = row.lhs_freq <= 2.0 * row.rhs_freq + 3.0 * combined;
        report.pass = report.pass && row.pass;
        report.rows.push_back(row);
    }
    return report;
}

// ---- Rademacher conditional suprema ----------------------------------------------

struct RademacherSummary {
    std::int64_t draws = 0;
    double mean = 0.0;
    double q50 = 0.0;
    double q90 = 0.0;
    double max = 0.0;
    std::vector<double> sups; // sorted

    double frac_at_least(double threshold) const {
        const auto it = std::lower_bound(sups.begin(), sups.end(), threshold);
        return static_cast<double>(sups.end() - it) / static_cast<double>(sups.size());
    }
};

// Sign-conditional tail of sup_f sum_i eps_i (f(y_i) - f(x_i)) / phi(fbar(x,y))
// for a fixed pair of samples.
inline RademacherSummary rademacher_sup(const FunctionClass& cls, const Sample& x,
                                        const Sample& y, const Normalizer& norm,
                                        double resolution, std::int64_t sign_draws,
                                        std::uint64_t seed, int threads = 1) {
    if (x.n() != y.n() || x.n() == 0)
        throw DomainError("rademacher_sup: x and y must share a positive length");
    if (sign_draws < 1) throw DomainError("rademacher_sup: sign draws >= 1 required");
    const std::vector<MemberId> ids = cls.members(resolution);
    if (ids.empty()) throw DomainError("rademacher_sup: empty member list");
    const std::int64_t n = static_cast<std::int64_t>(x.n());

    // difference rows f(y_i) - f(x_i) and pooled-mean normalizers
    std::vector<std::vector<double>> diff(ids.size(), std::vector<double>(x.n()));
    std::vector<double> phis(ids.size());
    std::vector<char> usable(ids.size(), 1);
    for (std::size_t k = 0; k < ids.size(); ++k) {
        double pooled = 0.0;
        for (std::size_t i = 0; i < x.n(); ++i) {
            const double fy = cls.eval(ids[k], y.points[i]);
            const double fx = cls.eval(ids[k], x.points[i]);
            diff[k][i] = fy - fx;
            pooled += fy + fx;
        }
        const double fbar = pooled / (2.0 * static_cast<double>(n));
        if (fbar <= 0.0) {
            usable[k] = 0; // identically zero on both samples: zero numerator
            continue;
        }
        phis[k] = norm.phi_p(fbar, n);
    }

    std::vector<double> sups(static_cast<std::size_t>(sign_draws));
    parallel_for(0, sign_draws, threads, [&](std::int64_t d) {
        Rng rng = Rng::for_replicate(seed, static_cast<std::uint64_t>(d));
        std::vector<double> eps(x.n());
        for (std::size_t i = 0; i < x.n(); ++i) eps[i] = rng.next_sign() ? 1.0 : -1.0;
        double best = 0.0; // the zero function always belongs to the closure
        for (std::size_t k = 0; k < ids.size(); ++k) {
            if (!usable[k]) continue;
            double s = 0.0;
            for (std::size_t i = 0; i < x.n(); ++i) s += eps[i] * diff[k][i];
            best = std::max(best, s / phis[k]);
        }
        sups[static_cast<std::size_t>(d)] = best;
    });

    RademacherSummary summary;
    summary.draws = sign_draws;
    std::sort(sups.begin(), sups.end());
    double total = 0.0;
    for (double s : sups) total += s;
    summary.mean = total / static_cast<double>(sign_draws);
    summary.q50 = sups[sups.size() / 2];
    summary.q90 = sups[(9 * sups.size()) / 10];
    summary.max = sups.back();
    summary.sups = std::move(sups);
    return summary;
}

// ---- h(c) facts from the concentration proof --------------------------------------

struct HCheckRow {
    double c = 0.0;
    double h = 0.0;
};

struct HReport {
    std::vector<HCheckRow> rows;
    double h0 = 0.0;
    double second_moment = 0.0; // P f^2
    double h1 = 0.0;
    bool endpoints_ok = false;
    bool monotone_ok = false;
    bool convex_ok = false;
    bool averaged_ok = false;
    bool pass = false;
};

// h(c) = int_c^1 (t - c)^2 dF(t) for a discrete law on [0,1]: decreasing,
// convex, h(0) = E t^2, h(1) = 0, and mean h(c_i) <= (1 - mean c_i) h(0).
inline HReport h_check(const std::vector<std::pair<double, double>>& law,
                       const std::vector<double>& c_grid, std::int64_t random_vectors,
                       std::int64_t vector_len, std::uint64_t seed) {
    if (law.empty()) throw DomainError("h_check: empty law");
    double mass = 0.0;
    for (const auto& [t, q] : law) {
        if (!(t >= 0.0 && t <= 1.0)) throw DomainError("h_check: support must lie in [0, 1]");
        if (q < 0.0) throw DomainError("h_check: probabilities must be >= 0");
        mass += q;
    }
    if (std::fabs(mass - 1.0) > 1e-12) throw DomainError("h_check: probabilities must sum to 1");
    if (c_grid.size() < 3) throw DomainError("h_check: need at least 3 grid points");
    for (std::size_t i = 1; i < c_grid.size(); ++i)
        if (!(c_grid[i] > c_grid[i - 1])) throw DomainError("h_check: grid must increase");

    auto h = [&](double c) {
        double acc = 0.0;
        for (const auto& [t, q] : law)
            if (t > c) acc += q * (t - c) * (t - c);
        return acc;
    };

    HReport report;
    for (double c : c_grid) report.rows.push_back({c, h(c)});
    report.h0 = h(0.0);
    report.h1 = h(1.0);
    for (const auto& [t, q] : law) report.second_moment += q * t * t;
    report.endpoints_ok =
        std::fabs(report.h0 - report.second_moment) <= 1e-12 && std::fabs(report.h1) <= 1e-12;

    report.monotone_ok = true;
    for (std::size_t i = 1; i < report.rows.size(); ++i)
        report.monotone_ok =
            report.monotone_ok && report.rows[i].h <= report.rows[i - 1].h + 1e-12;

    // second differences on a uniform grid
    report.convex_ok = true;
    for (std::size_t i = 1; i + 1 < report.rows.size(); ++i) {
        const double dd = report.rows[i + 1].h - 2.0 * report.rows[i].h + report.rows[i - 1].h;
        report.convex_ok = report.convex_ok && dd >= -1e-12;
    }

    report.averaged_ok = true;
    for (std::int64_t r = 0; r < random_vectors; ++r) {
        Rng rng = Rng::for_replicate(seed, static_cast<std::uint64_t>(r));
        double sum_h = 0.0, sum_c = 0.0;
        for (std::int64_t i = 0; i < vector_len; ++i) {
            const double c = rng.next_unit();
            sum_h += h(c);
            sum_c += c;
        }
        const double lhs = sum_h / static_cast<double>(vector_len);
        const double cbar = sum_c / static_cast<double>(vector_len);
        report.averaged_ok = report.averaged_ok && lhs <= (1.0 - cbar) * report.h0 + 1e-12;
    }
    report.pass =
        report.endpoints_ok && report.monotone_ok && report.convex_ok && report.averaged_ok;
    return report;
}

// ---- median stability across n ------------------------------------------------------

struct MedianScanRow {
    std::int64_t n = 0;
    MedianEstimate estimate;
};

struct MedianScan {
    std::vector<MedianScanRow> rows;

    // max over n of the ratio between M(n) and the cross-n median of medians
    double band_factor() const {
        std::vector<double> meds;
        for (const auto& row : rows) meds.push_back(row.estimate.median);
        std::vector<double> sorted = meds;
        std::sort(sorted.begin(), sorted.end());
        const double center = sorted[sorted.size() / 2];
        double factor = 1.0;
        for (double m : meds) {
            if (center <= 0.0 || m <= 0.0) return std::numeric_limits<double>::infinity();
            factor = std::max(factor, std::max(m / center, center / m));
        }
        return factor;
    }
};

// M(n) across an n-grid under a fixed normalizer; the claimed boundedness
// shows up as a narrow band.
inline MedianScan median_stability_scan(const Experiment& base,
                                        const std::vector<std::int64_t>& n_grid,
                                        int threads = 1) {
    if (n_grid.empty()) throw DomainError("median scan: empty n grid");
    MedianScan scan;
    for (std::int64_t n : n_grid) {
        Experiment exp = base;
        exp.n = n;
        MedianScanRow row;
        row.n = n;
        row.estimate = estimate_median(exp, threads);
        scan.rows.push_back(row);
    }
    return scan;
}

} // namespace epb
