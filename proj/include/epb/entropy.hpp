#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "epb/envelope.hpp"
#include "epb/errors.hpp"
#include "epb/quadrature.hpp"

namespace epb {

inline double sqrt_log_envelope(const EntropyEnvelope& env, double u) {
    const double D = env.at(u);
    if (!std::isfinite(D)) throw IntegrationError("envelope value is not finite");
    return std::sqrt(std::max(0.0, std::log(D)));
}

// G(b) = int_0^b sqrt(log D(u)) du.
//  - constant envelopes: closed form;
//  - step tables: exact cell sums;
//  - power shapes C u^-g: substitute u = e^{-s^2}, which turns the log
//    singularity at 0 into a smooth Gaussian-type integrand;
//  - anything else: graded adaptive quadrature toward 0.
inline double entropy_integral(const EntropyEnvelope& env, double b, double tol = 1e-8) {
    if (!(b > 0.0)) return 0.0;
    if (b > 1.0 + 1e-12) throw DomainError("entropy integral: upper limit must be <= 1");
    b = std::min(b, 1.0);

    if (env.kind == EntropyEnvelope::Kind::AnalyticConstant)
        return std::sqrt(std::max(0.0, std::log(std::max(1.0, env.constant)))) * b;

    if (env.kind == EntropyEnvelope::Kind::Table ||
        env.kind == EntropyEnvelope::Kind::EmpiricalMax) {
        double total = 0.0, prev = 0.0;
        for (const auto& [u, D] : env.table) {
            const double hi = std::min(u, b);
            if (hi > prev) {
                total += std::sqrt(std::max(0.0, std::log(D))) * (hi - prev);
                prev = hi;
            }
            if (prev >= b) break;
        }
        if (prev < b)
            total += std::sqrt(std::max(0.0, std::log(env.table.back().second))) * (b - prev);
        return total;
    }

    double C = 0.0, g = 0.0;
    if (env.power_form(C, g)) {
        const double u_floor = std::pow(C, 1.0 / g); // D(u) = 1 at and beyond
        const double hi = std::min(b, u_floor);
        if (!(hi > 0.0)) return 0.0;
        const double s_lo = std::sqrt(std::max(0.0, std::log(1.0 / hi)));
        const double s_hi = std::sqrt(s_lo * s_lo + 50.0);
        const double logC = std::log(C);
        auto f = [&](double s) {
            return 2.0 * s * std::exp(-s * s) * std::sqrt(std::max(0.0, logC + g * s * s));
        };
        return integrate_adaptive(f, s_lo, s_hi, tol * 0.5, 1e-300);
    }

    auto f = [&](double u) { return sqrt_log_envelope(env, u); };
    return integrate_graded_to_zero(f, b, tol);
}

// phi(p) = sqrt(n) int_0^sqrt(p) sqrt(log D(u)) du.
struct EntropyIntegralSpec {
    EntropyEnvelope envelope;
    std::int64_t n = 1;
    double tol = 1e-8;
};

inline double phi(const EntropyIntegralSpec& spec, double p) {
    if (!(p > 0.0) || p > 1.0 + 1e-12)
        throw DomainError("phi: p must lie in (0, 1]");
    if (spec.n < 1) throw DomainError("phi: n >= 1 required");
    return std::sqrt(static_cast<double>(spec.n)) *
           entropy_integral(spec.envelope, std::sqrt(std::min(1.0, p)), spec.tol);
}

// Identical contract with a bracketing envelope in place of the packing one.
inline double phi_bracketing(const EntropyIntegralSpec& spec, double p) { return phi(spec, p); }

// ---- zero-error rate calculus -------------------------------------------------

// Power-law entropy D(u) <= c u^-gamma with gamma in (0,2); u is the
// deviation parameter of the tail bound.
struct RateSpec {
    double c = 1.0;
    double gamma = 1.0;
    double u = 0.0;

    void validate() const {
        if (!(gamma > 0.0 && gamma < 2.0)) throw DomainError("rate spec: gamma must lie in (0, 2)");
        if (c < 0.0) throw DomainError("rate spec: c must be >= 0");
        if (u < 0.0) throw DomainError("rate spec: u must be >= 0");
    }
};

// Root of p = (c/sqrt(n)) (p^{1/2 - gamma/4} + sqrt(u p)) by monotone
// bisection. Valid for u <= n^{gamma/(2+gamma)}.
inline double zero_error_rate(const RateSpec& spec, std::int64_t n) {
    spec.validate();
    if (n < 1) throw DomainError("zero_error_rate: n >= 1 required");
    const double window = std::pow(static_cast<double>(n), spec.gamma / (2.0 + spec.gamma));
    if (spec.u > window * (1.0 + 1e-12))
        throw DomainError("zero_error_rate: u outside the validity window u <= n^{gamma/(2+gamma)}");
    if (spec.c == 0.0) return 0.0;
    const double scale = spec.c / std::sqrt(static_cast<double>(n));
    auto rhs = [&](double p) {
        return scale * (std::pow(p, 0.5 - spec.gamma / 4.0) + std::sqrt(spec.u * p));
    };
    double lo = 0.0, hi = 1.0;
    while (rhs(hi) > hi) {
        hi *= 2.0;
        if (hi > 1e9) throw DomainError("zero_error_rate: no bracket for the fixed point");
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rhs(mid) > mid)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

struct RatePoint {
    std::int64_t n = 0;
    double p = 0.0;
    double asymptote = 0.0;
};

struct RateCurve {
    std::vector<RatePoint> points;
    double k_gamma = 0.0; // calibrated at the largest configured n
};

// Roots across an n-grid plus the asymptotic form K_gamma n^{-2/(2+gamma)}
// with K_gamma pinned at the largest n.
inline RateCurve zero_error_curve(const RateSpec& spec, const std::vector<std::int64_t>& n_grid) {
    if (n_grid.empty()) throw DomainError("zero_error_curve: empty n grid");
    RateCurve out;
    std::int64_t n_max = 0;
    for (std::int64_t n : n_grid) n_max = std::max(n_max, n);
    const double expo = 2.0 / (2.0 + spec.gamma);
    out.k_gamma = zero_error_rate(spec, n_max) * std::pow(static_cast<double>(n_max), expo);
    for (std::int64_t n : n_grid) {
        RatePoint pt;
        pt.n = n;
        pt.p = zero_error_rate(spec, n);
        pt.asymptote = out.k_gamma * std::pow(static_cast<double>(n), -expo);
        out.points.push_back(pt);
    }
    return out;
}

struct SmoothBoundaryRate {
    double rate = 0.0;
    double gamma = 0.0;
    bool outside_covered_range = false; // gamma >= 2: stated rate needs the truncation extension
};

// Indicators of alpha-smooth boundaries in [0,1]^l: gamma = 2(l-1)/alpha and
// the zero-error rate K n^{-alpha/(l-1+alpha)}.
inline SmoothBoundaryRate smooth_boundary_rate(double alpha, int l, std::int64_t n,
                                               double K = 1.0) {
    if (!(alpha > 0.0)) throw DomainError("smooth_boundary_rate: alpha > 0 required");
    if (l < 2) throw DomainError("smooth_boundary_rate: ambient dimension l >= 2 required");
    if (n < 1) throw DomainError("smooth_boundary_rate: n >= 1 required");
    SmoothBoundaryRate out;
    out.gamma = 2.0 * (l - 1) / alpha;
    out.outside_covered_range = out.gamma >= 2.0;
    out.rate = K * std::pow(static_cast<double>(n), -alpha / (l - 1 + alpha));
    return out;
}

} // namespace epb
