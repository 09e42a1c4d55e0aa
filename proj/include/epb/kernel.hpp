#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "epb/errors.hpp"
#include "epb/parallel.hpp"
#include "epb/rng.hpp"
#include "epb/space.hpp"

namespace epb {

// ---- psi_alpha and the kernel constant ---------------------------------------

struct PsiParams {
    double alpha = 1.0;
};

// Quadratic below the knee at 2 alpha, linear above; continuous there.
inline double psi(const PsiParams& params, double v) {
    if (!(params.alpha > 0.0)) throw DomainError("psi: alpha > 0 required");
    if (v < 0.0) throw DomainError("psi: argument must be >= 0");
    return v <= 2.0 * params.alpha ? v * v / (4.0 * params.alpha) : v - params.alpha;
}

inline double psi_deriv(double alpha, double v) {
    return v <= 2.0 * alpha ? v / (2.0 * alpha) : 1.0;
}

// Left side of the defining inequality for L_alpha; strictly decreasing in L.
inline double l_constraint_lhs(double L) {
    return 2.0 * L * (std::exp(1.0 / L) - 1.0) / (1.0 + 2.0 * L);
}

// Minimal L with 2L(e^{1/L}-1)/(1+2L) <= alpha, located by bisection; any
// larger L also satisfies the inequality.
inline double solve_l(double alpha) {
    if (!(alpha > 0.0)) throw DomainError("solve_l: alpha > 0 required");
    double lo = 1e-3, hi = 1.0;
    while (l_constraint_lhs(lo) < alpha) lo *= 0.5;
    while (l_constraint_lhs(hi) > alpha) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (l_constraint_lhs(mid) > alpha)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

// ---- kernel problems on finite product spaces ---------------------------------

// Point of Omega^n encoded in base m (coordinate i at digit i).
using PointCode = std::uint32_t;

inline std::vector<int> decode_point(PointCode code, int n, int m) {
    std::vector<int> coords(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        coords[static_cast<std::size_t>(i)] = static_cast<int>(code % static_cast<PointCode>(m));
        code /= static_cast<PointCode>(m);
    }
    return coords;
}

inline PointCode encode_point(const std::vector<int>& coords, int m) {
    PointCode code = 0;
    for (std::size_t i = coords.size(); i-- > 0;)
        code = code * static_cast<PointCode>(m) + static_cast<PointCode>(coords[i]);
    return code;
}

// (A, x, alpha) on a finite Omega^n with the enumeration guard n log2(m) <= 24.
struct KernelProblem {
    FiniteSpace space;
    int n = 1;
    double alpha = 1.0;
    std::vector<PointCode> event; // sorted, distinct points of A
    PointCode x = 0;

    KernelProblem(FiniteSpace sp, int n_, double alpha_, std::vector<PointCode> a, PointCode x_)
        : space(std::move(sp)), n(n_), alpha(alpha_), event(std::move(a)), x(x_) {
        if (n < 1) throw DomainError("kernel problem: n >= 1 required");
        if (!(alpha > 0.0)) throw DomainError("kernel problem: alpha > 0 required");
        const double bits = n * std::log2(static_cast<double>(space.size()));
        if (bits > 24.0 + 1e-9)
            throw CapacityError("kernel problem: n log2(m) exceeds the enumeration guard of 24");
        if (event.empty()) throw DomainError("kernel problem: event must be nonempty");
        std::sort(event.begin(), event.end());
        event.erase(std::unique(event.begin(), event.end()), event.end());
        const double total = std::pow(static_cast<double>(space.size()), n);
        for (PointCode p : event)
            if (static_cast<double>(p) >= total)
                throw DomainError("kernel problem: event point outside Omega^n");
        if (static_cast<double>(x) >= total)
            throw DomainError("kernel problem: x outside Omega^n");
    }

    bool x_in_event() const {
        return std::binary_search(event.begin(), event.end(), x);
    }
};

// Probability measure supported on the event, represented by simplex weights
// aligned with KernelProblem::event.
struct KernelMeasure {
    std::vector<double> weights;

    void validate(std::size_t event_size) const {
        if (weights.size() != event_size)
            throw DomainError("kernel measure: weight count must match event size");
        double total = 0.0;
        for (double w : weights) {
            if (w < 0.0) throw DomainError("kernel measure: weights must be >= 0");
            total += w;
        }
        if (std::fabs(total - 1.0) > 1e-12)
            throw DomainError("kernel measure: weights must sum to 1 within 1e-12");
    }

    static KernelMeasure point_mass(std::size_t event_size, std::size_t index) {
        KernelMeasure nu;
        nu.weights.assign(event_size, 0.0);
        nu.weights[index] = 1.0;
        return nu;
    }
    static KernelMeasure uniform(std::size_t event_size) {
        KernelMeasure nu;
        nu.weights.assign(event_size, 1.0 / static_cast<double>(event_size));
        return nu;
    }
};

namespace detail {
struct KernelGeometry {
    int n = 0, m = 0;
    std::vector<int> x_coords;
    std::vector<std::vector<int>> event_coords;

    explicit KernelGeometry(const KernelProblem& prob)
        : n(prob.n), m(static_cast<int>(prob.space.size())) {
        x_coords = decode_point(prob.x, n, m);
        event_coords.reserve(prob.event.size());
        for (PointCode p : prob.event) event_coords.push_back(decode_point(p, n, m));
    }

    // masses mu[i][om] = nu({y : y_i = om, y_i != x_i})
    std::vector<double> masses(const std::vector<double>& w) const {
        std::vector<double> mu(static_cast<std::size_t>(n) * m, 0.0);
        for (std::size_t k = 0; k < event_coords.size(); ++k) {
            if (w[k] == 0.0) continue;
            const auto& y = event_coords[k];
            for (int i = 0; i < n; ++i)
                if (y[static_cast<std::size_t>(i)] != x_coords[static_cast<std::size_t>(i)])
                    mu[static_cast<std::size_t>(i) * m +
                       static_cast<std::size_t>(y[static_cast<std::size_t>(i)])] += w[k];
        }
        return mu;
    }
};
} // namespace detail

// Density of the i-th-coordinate pushforward of nu restricted to {y_i != x_i},
// with respect to P: d_i(om) = nu({y : y_i = om, y_i != x_i}) / p_om.
inline std::vector<double> radon_nikodym(const KernelProblem& prob, const KernelMeasure& nu,
                                         int i) {
    if (i < 0 || i >= prob.n) throw DomainError("radon_nikodym: coordinate out of range");
    nu.validate(prob.event.size());
    const detail::KernelGeometry geom(prob);
    const auto mu = geom.masses(nu.weights);
    std::vector<double> density(prob.space.size());
    for (std::size_t om = 0; om < prob.space.size(); ++om)
        density[om] = mu[static_cast<std::size_t>(i) * geom.m + om] / prob.space.prob(om);
    return density;
}

// m_alpha(nu, x) = sum_i int psi_alpha(d_i) dP, evaluated exactly.
inline double cost_measure(const KernelProblem& prob, const KernelMeasure& nu) {
    nu.validate(prob.event.size());
    const detail::KernelGeometry geom(prob);
    const auto mu = geom.masses(nu.weights);
    const PsiParams params{prob.alpha};
    double total = 0.0;
    for (int i = 0; i < prob.n; ++i)
        for (std::size_t om = 0; om < prob.space.size(); ++om) {
            const double mass = mu[static_cast<std::size_t>(i) * geom.m + om];
            if (mass > 0.0)
                total += prob.space.prob(om) * psi(params, mass / prob.space.prob(om));
        }
    return total;
}

struct CostResult {
    double value = 0.0;
    KernelMeasure nu;
    double gap = 0.0;
    int iterations = 0;
    bool converged = true;
};

// m_alpha(A, x): convex minimization over the |A|-simplex by conditional
// gradient with pairwise (swap) steps and exact line search; the standard
// Frank-Wolfe gap certifies optimality.
inline CostResult cost_set(const KernelProblem& prob, double gap_tol = 1e-6,
                           int max_iter = 10000) {
    const std::size_t K = prob.event.size();
    if (prob.x_in_event()) {
        const std::size_t at = static_cast<std::size_t>(
            std::lower_bound(prob.event.begin(), prob.event.end(), prob.x) - prob.event.begin());
        CostResult r;
        r.nu = KernelMeasure::point_mass(K, at);
        return r;
    }
    const detail::KernelGeometry geom(prob);
    const double alpha = prob.alpha;
    const int n = prob.n, m = geom.m;

    std::vector<double> w(K, 1.0 / static_cast<double>(K));
    std::vector<double> mu = geom.masses(w);

    auto density = [&](int i, int om) {
        return mu[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(om)] /
               prob.space.prob(static_cast<std::size_t>(om));
    };
    auto objective = [&]() {
        const PsiParams params{alpha};
        double total = 0.0;
        for (int i = 0; i < n; ++i)
            for (int om = 0; om < m; ++om) {
                const double mass = mu[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(om)];
                if (mass > 0.0)
                    total += prob.space.prob(static_cast<std::size_t>(om)) *
                             psi(params, mass / prob.space.prob(static_cast<std::size_t>(om)));
            }
        return total;
    };
    auto gradient_at = [&](std::size_t k) {
        double g = 0.0;
        const auto& y = geom.event_coords[k];
        for (int i = 0; i < n; ++i) {
            const int om = y[static_cast<std::size_t>(i)];
            if (om != geom.x_coords[static_cast<std::size_t>(i)])
                g += psi_deriv(alpha, density(i, om));
        }
        return g;
    };

    CostResult result;
    std::vector<double> grad(K);
    for (int it = 0; it < max_iter; ++it) {
        for (std::size_t k = 0; k < K; ++k) grad[k] = gradient_at(k);
        std::size_t toward = 0, away = K;
        double dot = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            dot += grad[k] * w[k];
            if (grad[k] < grad[toward]) toward = k;
            if (w[k] > 0.0 && (away == K || grad[k] > grad[away])) away = k;
        }
        const double gap = dot - grad[toward];
        result.iterations = it;
        if (gap <= gap_tol || toward == away) {
            result.value = objective();
            result.nu.weights = w;
            result.gap = gap;
            result.converged = gap <= gap_tol;
            if (!result.converged)
                throw OptimizationError("cost_set: pairwise steps stalled before reaching the gap tolerance",
                                        result.value);
            return result;
        }

        // exact line search over t in [0, w_away] along e_toward - e_away:
        // the directional derivative is nondecreasing, so bisect its sign
        const auto& ys = geom.event_coords[toward];
        const auto& yr = geom.event_coords[away];
        auto deriv = [&](double t) {
            double g = 0.0;
            for (int i = 0; i < n; ++i) {
                const int os = ys[static_cast<std::size_t>(i)];
                const int orr = yr[static_cast<std::size_t>(i)];
                const int xi = geom.x_coords[static_cast<std::size_t>(i)];
                if (os == orr) continue;
                if (os != xi) {
                    const double mass = mu[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(os)] + t;
                    g += psi_deriv(alpha, mass / prob.space.prob(static_cast<std::size_t>(os)));
                }
                if (orr != xi) {
                    const double mass = mu[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(orr)] - t;
                    g -= psi_deriv(alpha, std::max(0.0, mass) / prob.space.prob(static_cast<std::size_t>(orr)));
                }
            }
            return g;
        };
        const double t_max = w[away];
        double t = t_max;
        if (deriv(t_max) > 0.0) {
            double lo = 0.0, hi = t_max;
            for (int b = 0; b < 60; ++b) {
                const double mid = 0.5 * (lo + hi);
                if (deriv(mid) <= 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            t = 0.5 * (lo + hi);
        }
        // apply the swap to w and the masses
        w[toward] += t;
        w[away] -= t;
        if (t == t_max) w[away] = 0.0;
        for (int i = 0; i < n; ++i) {
            const int os = ys[static_cast<std::size_t>(i)];
            const int orr = yr[static_cast<std::size_t>(i)];
            const int xi = geom.x_coords[static_cast<std::size_t>(i)];
            if (os == orr) continue;
            if (os != xi) mu[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(os)] += t;
            if (orr != xi)
                mu[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(orr)] =
                    std::max(0.0, mu[static_cast<std::size_t>(i) * m + static_cast<std::size_t>(orr)] - t);
        }
    }
    for (std::size_t k = 0; k < K; ++k) grad[k] = gradient_at(k);
    double dot = 0.0, best = grad[0];
    for (std::size_t k = 0; k < K; ++k) {
        dot += grad[k] * w[k];
        best = std::min(best, grad[k]);
    }
    result.value = objective();
    result.nu.weights = w;
    result.gap = dot - best;
    result.iterations = max_iter;
    result.converged = result.gap <= gap_tol;
    if (!result.converged)
        throw OptimizationError("cost_set: iteration cap reached at gap " + std::to_string(result.gap),
                                result.value);
    return result;
}

// Independent oracle: exhaustive barycentric grid of mesh 1/64 over the
// simplex, then locally refined grids around the incumbent. Never consults
// the conditional-gradient path.
inline double brute_cost_oracle(const KernelProblem& prob, int mesh = 64, int refine_rounds = 4) {
    const std::size_t K = prob.event.size();
    if (K > 6) throw CapacityError("brute_cost_oracle: event too large for grid search");
    if (prob.x_in_event()) return 0.0;
    KernelMeasure nu;
    nu.weights.assign(K, 0.0);

    double best = -1.0;
    std::vector<double> best_w(K, 0.0);
    std::vector<int> counts(K, 0);
    auto eval = [&](const std::vector<double>& w) {
        KernelMeasure cand;
        cand.weights = w;
        const double v = cost_measure(prob, cand);
        if (best < 0.0 || v < best) {
            best = v;
            best_w = w;
        }
    };
    // global stage: compositions of `mesh` into K parts
    std::vector<double> w(K, 0.0);
    std::vector<int> comp(K, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t idx, int rem) {
        if (idx + 1 == K) {
            comp[idx] = rem;
            for (std::size_t k = 0; k < K; ++k)
                w[k] = static_cast<double>(comp[k]) / mesh;
            eval(w);
            return;
        }
        for (int c = 0; c <= rem; ++c) {
            comp[idx] = c;
            rec(idx + 1, rem - c);
        }
    };
    rec(0, mesh);

    // local stages: boxes of half-width 2*step around the incumbent
    double step = 1.0 / mesh;
    for (int round = 0; round < refine_rounds; ++round) {
        const double sub = step / 8.0;
        std::vector<double> center = best_w;
        std::vector<int> off(K - 1, -16);
        while (true) {
            double head = 0.0;
            bool feasible = true;
            for (std::size_t k = 0; k + 1 < K; ++k) {
                w[k] = center[k] + off[k] * sub;
                if (w[k] < -1e-15) feasible = false;
                w[k] = std::max(0.0, w[k]);
                head += w[k];
            }
            if (feasible && head <= 1.0 + 1e-15) {
                w[K - 1] = std::max(0.0, 1.0 - head);
                double total = 0.0;
                for (double ww : w) total += ww;
                for (double& ww : w) ww /= total;
                eval(w);
            }
            std::size_t carry = 0;
            while (carry < off.size()) {
                if (++off[carry] <= 16) break;
                off[carry] = -16;
                ++carry;
            }
            if (carry == off.size()) break;
        }
        step = sub;
    }
    return best;
}

// ---- exponential integrability of the kernel cost -------------------------------

struct KernelCheckRow {
    std::uint64_t event_id = 0;
    double prob = 0.0;
    double integral = 0.0;
    double product = 0.0;
    bool pass = false;
};

struct KernelCheckReport {
    double alpha = 0.0;
    double L = 0.0;
    std::vector<KernelCheckRow> rows;
    double max_product = 0.0;
    std::uint64_t argmax_event = 0;
    bool exhaustive = true;
    bool pass = false;
};

struct KernelCheckOptions {
    double gap_tol = 1e-6;
    double slack = 1e-6;          // pass iff product <= 1 + slack
    int max_exhaustive_points = 16; // enumerate all events when m^n is at most this
    int sampled_events = 512;
    std::uint64_t seed = 0;
    bool has_seed = false;
    int threads = 1;
};

// For every event A in scope, evaluates the exact integral of
// exp(m_alpha(A, x)/L) over x in Omega^n and multiplies by P^n(A).
inline KernelCheckReport verify_kernel_integrability(const FiniteSpace& space, int n, double alpha,
                                  const KernelCheckOptions& opt = {}) {
    const double bits = n * std::log2(static_cast<double>(space.size()));
    if (bits > 24.0 + 1e-9)
        throw CapacityError("verify_kernel_integrability: n log2(m) exceeds the enumeration guard of 24");
    const int m = static_cast<int>(space.size());
    const std::int64_t points = static_cast<std::int64_t>(std::llround(std::pow(m, n)));

    std::vector<double> point_prob(static_cast<std::size_t>(points));
    for (std::int64_t p = 0; p < points; ++p) {
        const auto coords = decode_point(static_cast<PointCode>(p), n, m);
        double q = 1.0;
        for (int c : coords) q *= space.prob(static_cast<std::size_t>(c));
        point_prob[static_cast<std::size_t>(p)] = q;
    }

    // event list: all nonempty subsets when feasible, otherwise singletons,
    // coordinate cylinders {y : y_i = om}, the full space, and random draws
    std::vector<std::vector<PointCode>> events;
    bool exhaustive = points <= opt.max_exhaustive_points;
    if (exhaustive) {
        const std::uint64_t masks = (1ULL << points) - 1ULL;
        events.reserve(masks);
        for (std::uint64_t mask = 1; mask <= masks; ++mask) {
            std::vector<PointCode> ev;
            for (std::int64_t p = 0; p < points; ++p)
                if (mask >> p & 1ULL) ev.push_back(static_cast<PointCode>(p));
            events.push_back(std::move(ev));
        }
    } else {
        if (!opt.has_seed)
            throw ConfigError("verify_kernel_integrability: sampled events require a seed");
        for (std::int64_t p = 0; p < points; ++p)
            events.push_back({static_cast<PointCode>(p)});
        for (int i = 0; i < n; ++i)
            for (int om = 0; om < m; ++om) {
                std::vector<PointCode> ev;
                for (std::int64_t p = 0; p < points; ++p)
                    if (decode_point(static_cast<PointCode>(p), n, m)[static_cast<std::size_t>(i)] == om)
                        ev.push_back(static_cast<PointCode>(p));
                events.push_back(std::move(ev));
            }
        {
            std::vector<PointCode> full(static_cast<std::size_t>(points));
            for (std::int64_t p = 0; p < points; ++p) full[static_cast<std::size_t>(p)] = static_cast<PointCode>(p);
            events.push_back(std::move(full));
        }
        for (int s = 0; s < opt.sampled_events; ++s) {
            Rng rng = Rng::for_replicate(opt.seed, static_cast<std::uint64_t>(s));
            std::vector<PointCode> ev;
            for (std::int64_t p = 0; p < points; ++p)
                if (rng.next_sign()) ev.push_back(static_cast<PointCode>(p));
            if (ev.empty()) ev.push_back(static_cast<PointCode>(rng.next_below(
                static_cast<std::uint64_t>(points))));
            events.push_back(std::move(ev));
        }
    }

    KernelCheckReport report;
    report.alpha = alpha;
    report.L = solve_l(alpha);
    report.exhaustive = exhaustive;
    report.rows.resize(events.size());

    parallel_for(0, static_cast<std::int64_t>(events.size()), opt.threads, [&](std::int64_t e) {
        const auto& ev = events[static_cast<std::size_t>(e)];
        double prob_a = 0.0;
        for (PointCode p : ev) prob_a += point_prob[p];
        double integral = 0.0;
        for (std::int64_t p = 0; p < points; ++p) {
            KernelProblem prob(space, n, alpha, ev, static_cast<PointCode>(p));
            const double cost = prob.x_in_event() ? 0.0 : cost_set(prob, opt.gap_tol).value;
            integral += point_prob[static_cast<std::size_t>(p)] * std::exp(cost / report.L);
        }
        KernelCheckRow row;
        row.event_id = exhaustive ? [&] {
            std::uint64_t mask = 0;
            for (PointCode p : ev) mask |= 1ULL << p;
            return mask;
        }()
                                  : static_cast<std::uint64_t>(e);
        row.prob = prob_a;
        row.integral = integral;
        row.product = integral * prob_a;
        row.pass = row.product <= 1.0 + opt.slack;
        report.rows[static_cast<std::size_t>(e)] = row;
    });

    report.pass = true;
    for (const auto& row : report.rows) {
        if (row.product > report.max_product) {
            report.max_product = row.product;
            report.argmax_event = row.event_id;
        }
        report.pass = report.pass && row.pass;
    }
    return report;
}

} // namespace epb
