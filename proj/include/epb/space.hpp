#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "epb/errors.hpp"
#include "epb/rng.hpp"

namespace epb {

// Finite sample space: distinct real-valued atoms with strictly positive
// probabilities summing to 1.
class FiniteSpace {
public:
    FiniteSpace(std::vector<double> atoms, std::vector<double> probs)
        : atoms_(std::move(atoms)), probs_(std::move(probs)) {
        if (atoms_.empty() || atoms_.size() != probs_.size())
            throw DomainError("finite space: atoms/probs size mismatch or empty");
        double total = 0.0;
        for (double p : probs_) {
            if (!(p > 0.0)) throw DomainError("finite space: probabilities must be strictly positive");
            total += p;
        }
        if (std::fabs(total - 1.0) > 1e-12)
            throw DomainError("finite space: probabilities must sum to 1 within 1e-12");
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            for (std::size_t j = i + 1; j < atoms_.size(); ++j)
                if (atoms_[i] == atoms_[j])
                    throw DomainError("finite space: atom identifiers must be distinct");
        cum_.resize(probs_.size());
        double c = 0.0;
        for (std::size_t i = 0; i < probs_.size(); ++i) {
            c += probs_[i];
            cum_[i] = c;
        }
        cum_.back() = 1.0;
    }

    std::size_t size() const { return atoms_.size(); }
    double atom(std::size_t i) const { return atoms_[i]; }
    double prob(std::size_t i) const { return probs_[i]; }
    const std::vector<double>& atoms() const { return atoms_; }
    const std::vector<double>& probs() const { return probs_; }

    std::size_t index_of(double atom_value) const {
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (atoms_[i] == atom_value) return i;
        throw DomainError("finite space: unknown atom value");
    }

    std::size_t sample_index(Rng& rng) const {
        const double q = rng.next_unit();
        return static_cast<std::size_t>(
            std::lower_bound(cum_.begin(), cum_.end(), q) - cum_.begin());
    }

private:
    std::vector<double> atoms_;
    std::vector<double> probs_;
    std::vector<double> cum_;
};

// The unit interval carrying a named law: uniform, or a piecewise-constant
// density sampled through its inverse CDF.
class ContinuousLine {
public:
    static ContinuousLine uniform() { return ContinuousLine({0.0, 1.0}, {1.0}); }

    static ContinuousLine piecewise(std::vector<double> breaks, std::vector<double> densities) {
        return ContinuousLine(std::move(breaks), std::move(densities));
    }

    double cdf(double x) const {
        if (x <= breaks_.front()) return 0.0;
        if (x >= breaks_.back()) return 1.0;
        double acc = 0.0;
        for (std::size_t c = 0; c + 1 < breaks_.size(); ++c) {
            const double lo = breaks_[c], hi = breaks_[c + 1];
            if (x >= hi) {
                acc += dens_[c] * (hi - lo);
            } else {
                acc += dens_[c] * (x - lo);
                break;
            }
        }
        return std::min(1.0, acc);
    }

    double quantile(double q) const {
        if (q <= 0.0) return breaks_.front();
        if (q >= 1.0) return breaks_.back();
        double acc = 0.0;
        for (std::size_t c = 0; c + 1 < breaks_.size(); ++c) {
            const double lo = breaks_[c], hi = breaks_[c + 1];
            const double cellmass = dens_[c] * (hi - lo);
            if (acc + cellmass >= q) {
                if (cellmass <= 0.0) continue;
                return lo + (q - acc) / dens_[c];
            }
            acc += cellmass;
        }
        return breaks_.back();
    }

    double sample(Rng& rng) const { return quantile(rng.next_unit()); }

    // Exact integral of clamp((x - t)/w, 0, 1) against the density.
    double ramp_mean(double t, double w) const {
        double acc = 0.0;
        for (std::size_t c = 0; c + 1 < breaks_.size(); ++c) {
            const double lo = breaks_[c], hi = breaks_[c + 1];
            if (dens_[c] == 0.0) continue;
            // linear part on [t, t+w]
            const double a = std::max(lo, t), b = std::min(hi, t + w);
            if (b > a) acc += dens_[c] * ((b - t) * (b - t) - (a - t) * (a - t)) / (2.0 * w);
            // saturated part on [t+w, 1]
            const double a2 = std::max(lo, t + w), b2 = hi;
            if (b2 > a2) acc += dens_[c] * (b2 - a2);
        }
        return std::min(1.0, std::max(0.0, acc));
    }

    const std::vector<double>& breaks() const { return breaks_; }
    const std::vector<double>& densities() const { return dens_; }

private:
    ContinuousLine(std::vector<double> breaks, std::vector<double> densities)
        : breaks_(std::move(breaks)), dens_(std::move(densities)) {
        if (breaks_.size() < 2 || dens_.size() + 1 != breaks_.size())
            throw DomainError("piecewise density: need k+1 breakpoints for k cells");
        if (breaks_.front() != 0.0 || breaks_.back() != 1.0)
            throw DomainError("piecewise density: support must be [0, 1]");
        double mass = 0.0;
        for (std::size_t c = 0; c + 1 < breaks_.size(); ++c) {
            if (!(breaks_[c + 1] > breaks_[c]))
                throw DomainError("piecewise density: breakpoints must increase");
            if (dens_[c] < 0.0) throw DomainError("piecewise density: density must be nonnegative");
            mass += dens_[c] * (breaks_[c + 1] - breaks_[c]);
        }
        if (std::fabs(mass - 1.0) > 1e-9)
            throw DomainError("piecewise density: must integrate to 1 within 1e-9");
    }

    std::vector<double> breaks_;
    std::vector<double> dens_;
};

// Value-level union of the two carriers. Points are plain doubles: atoms of a
// finite space are identified with their numeric value.
class Distribution {
public:
    Distribution(FiniteSpace fs) : impl_(std::move(fs)) {}
    Distribution(ContinuousLine cl) : impl_(std::move(cl)) {}

    static Distribution uniform() { return Distribution(ContinuousLine::uniform()); }

    bool is_finite() const { return std::holds_alternative<FiniteSpace>(impl_); }
    const FiniteSpace& finite() const {
        if (!is_finite()) throw DomainError("distribution is not a finite space");
        return std::get<FiniteSpace>(impl_);
    }
    const ContinuousLine& line() const {
        if (is_finite()) throw DomainError("distribution is not a continuous line");
        return std::get<ContinuousLine>(impl_);
    }

    double sample(Rng& rng) const {
        if (is_finite()) {
            const auto& fs = std::get<FiniteSpace>(impl_);
            return fs.atom(fs.sample_index(rng));
        }
        return std::get<ContinuousLine>(impl_).sample(rng);
    }

    // P(X <= t)
    double prob_leq(double t) const {
        if (is_finite()) {
            const auto& fs = std::get<FiniteSpace>(impl_);
            double acc = 0.0;
            for (std::size_t i = 0; i < fs.size(); ++i)
                if (fs.atom(i) <= t) acc += fs.prob(i);
            return acc;
        }
        return std::get<ContinuousLine>(impl_).cdf(t);
    }

    // P(a <= X <= b)
    double prob_interval(double a, double b) const {
        if (a > b) return 0.0;
        if (is_finite()) {
            const auto& fs = std::get<FiniteSpace>(impl_);
            double acc = 0.0;
            for (std::size_t i = 0; i < fs.size(); ++i)
                if (fs.atom(i) >= a && fs.atom(i) <= b) acc += fs.prob(i);
            return acc;
        }
        const auto& cl = std::get<ContinuousLine>(impl_);
        return std::max(0.0, cl.cdf(b) - cl.cdf(a));
    }

    // E clamp((X - t)/w, 0, 1)
    double ramp_mean(double t, double w) const {
        if (is_finite()) {
            const auto& fs = std::get<FiniteSpace>(impl_);
            double acc = 0.0;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                const double v = (fs.atom(i) - t) / w;
                acc += fs.prob(i) * std::min(1.0, std::max(0.0, v));
            }
            return acc;
        }
        return std::get<ContinuousLine>(impl_).ramp_mean(t, w);
    }

private:
    std::variant<FiniteSpace, ContinuousLine> impl_;
};

// A drawn point of Omega^n together with its seed provenance.
struct Sample {
    std::vector<double> points;
    std::uint64_t seed = 0;
    std::uint64_t replicate = 0;

    std::size_t n() const { return points.size(); }
};

inline Sample draw_sample(const Distribution& dist, std::size_t n, std::uint64_t seed,
                          std::uint64_t replicate) {
    if (n < 1) throw DomainError("sample size must be >= 1");
    Sample s;
    s.seed = seed;
    s.replicate = replicate;
    s.points.resize(n);
    Rng rng = Rng::for_replicate(seed, replicate);
    for (std::size_t i = 0; i < n; ++i) s.points[i] = dist.sample(rng);
    return s;
}

} // namespace epb
