#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "epb/classes.hpp"
#include "epb/entropy.hpp"
#include "epb/envelope.hpp"
#include "epb/errors.hpp"

namespace epb {

// phi: F -> (0, inf) indexed through p = Pf (or a plug-in mean), one of
// sqrt-mean sqrt(n p), an entropy integral, a bracketing integral, or a
// constant.
struct Normalizer {
    enum class Kind { SqrtMean, EntropyIntegral, BracketingIntegral, Constant };

    Kind kind = Kind::SqrtMean;
    double constant = 1.0;
    EntropyEnvelope envelope;
    double tol = 1e-8;

    static Normalizer sqrt_mean() { return Normalizer{Kind::SqrtMean, 1.0, {}, 1e-8}; }
    static Normalizer constant_phi(double value) {
        if (!(value > 0.0)) throw NormalizerError("constant normalizer must be > 0");
        return Normalizer{Kind::Constant, value, {}, 1e-8};
    }
    static Normalizer entropy(EntropyEnvelope env, double tol = 1e-8) {
        return Normalizer{Kind::EntropyIntegral, 1.0, std::move(env), tol};
    }
    static Normalizer bracketing(EntropyEnvelope env, double tol = 1e-8) {
        return Normalizer{Kind::BracketingIntegral, 1.0, std::move(env), tol};
    }

    // phi as a function of p. Strict positivity is part of the contract; a
    // degenerate member (p = 0 under a mean-driven kind) raises.
    double phi_p(double p, std::int64_t n) const {
        switch (kind) {
            case Kind::Constant:
                return constant;
            case Kind::SqrtMean: {
                if (!(p > 0.0))
                    throw NormalizerError("sqrt-mean normalizer undefined at Pf = 0");
                return std::sqrt(static_cast<double>(n) * p);
            }
            case Kind::EntropyIntegral:
            case Kind::BracketingIntegral: {
                if (!(p > 0.0))
                    throw NormalizerError("entropy normalizer undefined at p = 0");
                const double v = phi(EntropyIntegralSpec{envelope, n, tol}, std::min(1.0, p));
                if (!(v > 0.0))
                    throw NormalizerError("entropy normalizer is not strictly positive");
                return v;
            }
        }
        throw NormalizerError("unknown normalizer kind");
    }

    std::string name() const {
        switch (kind) {
            case Kind::SqrtMean: return "sqrt_mean";
            case Kind::EntropyIntegral: return "entropy";
            case Kind::BracketingIntegral: return "bracketing";
            case Kind::Constant: return "constant";
        }
        return "?";
    }
};

// Per-member phi values for a fixed member list.
inline std::vector<double> member_phis(const FunctionClass& cls,
                                       const std::vector<MemberId>& ids,
                                       std::int64_t n, const Normalizer& norm) {
    std::vector<double> out(ids.size());
    for (std::size_t k = 0; k < ids.size(); ++k)
        out[k] = norm.phi_p(cls.true_mean(ids[k]), n);
    return out;
}

struct SupResult {
    double value = 0.0;
    MemberId argmax = -1;
};

// Z(x) = max over the resolution grid of (sum_i (Pf - f(x_i))) / phi(f).
inline SupResult normalized_sup(const FunctionClass& cls, const Sample& x,
                                const Normalizer& norm, double resolution) {
    const std::vector<MemberId> ids = cls.members(resolution);
    if (ids.empty()) throw DomainError("normalized_sup: empty member list at this resolution");
    const std::int64_t n = static_cast<std::int64_t>(x.n());
    std::vector<double> sums(ids.size());
    cls.sums_on(x.points, ids, sums);
    SupResult best;
    bool first = true;
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const double pf = cls.true_mean(ids[k]);
        const double phi_f = norm.phi_p(pf, n);
        const double z = (static_cast<double>(n) * pf - sums[k]) / phi_f;
        if (first || z > best.value) {
            best.value = z;
            best.argmax = ids[k];
            first = false;
        }
    }
    return best;
}

} // namespace epb
