#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "epb/capacity.hpp"
#include "epb/entropy.hpp"
#include "epb/envelope.hpp"
#include "epb/errors.hpp"
#include "epb/kernel.hpp"

namespace epb {

// Constants entering the closed-form bounds: the absolute constant K (from
// calibration), the kernel constant L, and the median M (measured or given).
struct BoundConstants {
    double K = 1.0;
    double L = 0.0;
    double M = 0.0;
};

// Normalized-deviation bound from the trace count: 2 ((1/n) log S(2n) + (1/n) log(4/delta))^{1/2}.
inline double vc_bound(double s2n, std::int64_t n, double delta) {
    if (!(s2n >= 1.0)) throw DomainError("vc_bound: S(2n) >= 1 required");
    if (n < 1) throw DomainError("vc_bound: n >= 1 required");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("vc_bound: delta must lie in (0, 1)");
    const double nn = static_cast<double>(n);
    return 2.0 * std::sqrt(std::log(s2n) / nn + std::log(4.0 / delta) / nn);
}

// Same bound through the Sauer estimate S(2n) <= (2en/d)^d.
inline double vc_bound_dim(int d, std::int64_t n, double delta) {
    if (n < d) throw DomainError("vc_bound_dim: n >= d required");
    return vc_bound(sauer_bound(d, 2 * n), n, delta);
}

// Deviation threshold whose exceedance probability is at most 2 e^{-u}:
// M phi(f) + 2 sqrt(L n u Pf).
inline double deviation_threshold(double M, double phi_f, std::int64_t n, double u, double pf,
                             double L) {
    if (n < 1) throw DomainError("deviation_threshold: n >= 1 required");
    return M * phi_f + 2.0 * std::sqrt(L * static_cast<double>(n) * u * pf);
}

// inf over delta > 1 of (a/delta + delta b) with a = nPf, b = Lu: the
// stationary point gives 2 sqrt(ab) when it lies at delta >= 1, otherwise the
// boundary value a + b.
inline double inf_delta_tradeoff(double n_pf, double l_u) {
    if (n_pf < 0.0 || l_u < 0.0) throw DomainError("inf_delta_tradeoff: arguments must be >= 0");
    if (l_u == 0.0) return 0.0; // delta -> infinity kills the second term
    if (n_pf >= l_u) return 2.0 * std::sqrt(n_pf * l_u);
    return n_pf + l_u;
}

// K (sqrt(n) int_0^sqrt(Pf) sqrt(log D) + sqrt(n u Pf)) under D(1) >= 2.
inline double entropy_deviation_bound(std::int64_t n, double pf, const EntropyEnvelope& env, double u,
                               double K, double tol = 1e-8) {
    if (!(pf > 0.0 && pf <= 1.0)) throw DomainError("entropy_deviation_bound: Pf must lie in (0, 1]");
    if (!(u > 0.0)) throw DomainError("entropy_deviation_bound: u > 0 required");
    if (!env.satisfies_d1_at_least_2())
        throw HypothesisError("entropy_deviation_bound: envelope must satisfy D(1) >= 2");
    const double entropy_term = phi(EntropyIntegralSpec{env, n, tol}, pf);
    return K * (entropy_term + std::sqrt(static_cast<double>(n) * u * pf));
}

// Same shape with a bracketing envelope.
inline double bracketing_deviation_bound(std::int64_t n, double pf, const EntropyEnvelope& env, double u,
                               double K, double tol = 1e-8) {
    return entropy_deviation_bound(n, pf, env, u, K, tol);
}

// VC-subgraph bound K ((d/n log n)^{1/2} + ((1/n) log(1/delta))^{1/2}); a flag
// switches the log n factor to log(1/Pf) for comparison curves.
inline double subgraph_bound(int d, std::int64_t n, double delta, double K,
                             bool log_inv_pf_variant = false, double pf = 0.0) {
    if (n < 2) throw DomainError("subgraph_bound: n >= 2 required");
    if (d < 1) throw DomainError("subgraph_bound: d >= 1 required");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("subgraph_bound: delta must lie in (0, 1)");
    const double nn = static_cast<double>(n);
    double log_factor = std::log(nn);
    if (log_inv_pf_variant) {
        if (!(pf > 0.0 && pf <= 1.0))
            throw DomainError("subgraph_bound: the log(1/Pf) variant needs Pf in (0, 1]");
        log_factor = std::log(1.0 / pf);
    }
    return K * (std::sqrt(d / nn * log_factor) + std::sqrt(std::log(1.0 / delta) / nn));
}

// Relative-deviation bound K ((1/(n nu)) (d log(1/nu) + log(1/delta)))^{1/2}
// on sum(Pf - f) / (sum(Pf + f) + n nu).
inline double relative_deviation_bound(int d, std::int64_t n, double nu, double delta, double K) {
    if (n < 1) throw DomainError("relative_deviation_bound: n >= 1 required");
    if (!(nu > 0.0 && nu < 1.0)) throw DomainError("relative_deviation_bound: nu must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("relative_deviation_bound: delta must lie in (0, 1)");
    const double nn = static_cast<double>(n);
    return K * std::sqrt((d * std::log(1.0 / nu) + std::log(1.0 / delta)) / (nn * nu));
}

// ---- comparison curves ---------------------------------------------------------

struct BoundCurveRow {
    double x = 0.0;
    double value = 0.0;
    double term1 = 0.0;
    double term2 = 0.0;
};

struct BoundCurve {
    std::string abscissa;
    std::vector<BoundCurveRow> rows;
};

// Mean-deviation scale implied by the two subgraph-type bounds across Pf; the
// ratio column exposes the extra (Pf/nu)^{1/2} factor of the relative form.
struct ComparisonRow {
    double pf = 0.0;
    double eq_subgraph = 0.0; // sqrt(Pf) * subgraph bound
    double eq_relative = 0.0; // (2 Pf + nu) * relative bound
    double ratio = 0.0;
};

inline std::vector<ComparisonRow> subgraph_li_comparison(int d, std::int64_t n, double nu,
                                                         double delta, double K,
                                                         const std::vector<double>& pf_grid) {
    std::vector<ComparisonRow> out;
    out.reserve(pf_grid.size());
    const double sg = subgraph_bound(d, n, delta, K);
    const double li = relative_deviation_bound(d, n, nu, delta, K);
    for (double pf : pf_grid) {
        if (!(pf > 0.0 && pf <= 1.0))
            throw DomainError("subgraph_li_comparison: Pf grid must lie in (0, 1]");
        ComparisonRow row;
        row.pf = pf;
        row.eq_subgraph = std::sqrt(pf) * sg;
        row.eq_relative = (2.0 * pf + nu) * li;
        row.ratio = row.eq_relative / row.eq_subgraph;
        out.push_back(row);
    }
    return out;
}

} // namespace epb
