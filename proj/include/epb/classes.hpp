#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "epb/csv.hpp"
#include "epb/errors.hpp"
#include "epb/space.hpp"

namespace epb {

using MemberId = std::int64_t;

// A finitely-discretized family of [0,1]-valued functions with exact means.
// Member ids are stable: they identify a parameter point on a fixed fine
// lattice, independent of the resolution used to enumerate them.
class FunctionClass {
public:
    virtual ~FunctionClass() = default;

    virtual double eval(MemberId f, double point) const = 0;
    virtual std::vector<MemberId> members(double resolution) const = 0;
    virtual double true_mean(MemberId f) const = 0;
    virtual std::string label(MemberId f) const { return std::to_string(f); }

    // sum_i f(x_i) for each requested member; subclasses may batch.
    virtual void sums_on(std::span<const double> pts, std::span<const MemberId> ids,
                         std::span<double> out) const {
        if (out.size() != ids.size()) throw DomainError("sums_on: output size mismatch");
        for (std::size_t k = 0; k < ids.size(); ++k) {
            double s = 0.0;
            for (double x : pts) s += eval(ids[k], x);
            out[k] = s;
        }
    }
};

namespace detail {
// Parameter lattice: ids address multiples of 2^-20. members(resolution)
// returns the sub-lattice with the largest power-of-two step not exceeding
// the requested resolution, so finer grids are supersets of coarser ones.
constexpr std::int64_t kLattice = 1 << 20;

inline std::int64_t lattice_step(double resolution) {
    if (!(resolution > 0.0)) throw DomainError("resolution must be > 0");
    std::int64_t step = kLattice;
    while (step > 1 && static_cast<double>(step) / kLattice > resolution) step >>= 1;
    return step;
}
} // namespace detail

// {x -> 1(x <= t)} with t on the lattice, t in (0, 1].
class Thresholds final : public FunctionClass {
public:
    explicit Thresholds(Distribution dist) : dist_(std::move(dist)) {}

    double eval(MemberId f, double point) const override {
        return point <= param(f) ? 1.0 : 0.0;
    }

    std::vector<MemberId> members(double resolution) const override {
        const std::int64_t step = detail::lattice_step(resolution);
        std::vector<MemberId> ids;
        ids.reserve(static_cast<std::size_t>(detail::kLattice / step));
        for (std::int64_t k = step; k <= detail::kLattice; k += step) ids.push_back(k);
        return ids;
    }

    double true_mean(MemberId f) const override { return dist_.prob_leq(param(f)); }

    std::string label(MemberId f) const override { return "1(x<=" + fmt_double(param(f)) + ")"; }

    double param(MemberId f) const {
        if (f < 1 || f > detail::kLattice)
            throw DomainError("thresholds: unknown member id " + std::to_string(f));
        return static_cast<double>(f) / detail::kLattice;
    }

    void sums_on(std::span<const double> pts, std::span<const MemberId> ids,
                 std::span<double> out) const override {
        if (out.size() != ids.size()) throw DomainError("sums_on: output size mismatch");
        std::vector<double> sorted(pts.begin(), pts.end());
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k < ids.size(); ++k) {
            const double t = param(ids[k]);
            out[k] = static_cast<double>(
                std::upper_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
        }
    }

private:
    Distribution dist_;
};

// {x -> 1(a <= x <= b)} with both endpoints on the lattice.
class Intervals final : public FunctionClass {
public:
    explicit Intervals(Distribution dist) : dist_(std::move(dist)) {}

    double eval(MemberId f, double point) const override {
        const auto [a, b] = params(f);
        return (point >= a && point <= b) ? 1.0 : 0.0;
    }

    std::vector<MemberId> members(double resolution) const override {
        const std::int64_t step = detail::lattice_step(resolution);
        std::vector<MemberId> ids;
        for (std::int64_t a = 0; a <= detail::kLattice; a += step)
            for (std::int64_t b = a; b <= detail::kLattice; b += step)
                ids.push_back(a * (detail::kLattice + 1) + b);
        return ids;
    }

    double true_mean(MemberId f) const override {
        const auto [a, b] = params(f);
        return dist_.prob_interval(a, b);
    }

    std::string label(MemberId f) const override {
        const auto [a, b] = params(f);
        return "1(" + fmt_double(a) + "<=x<=" + fmt_double(b) + ")";
    }

    std::pair<double, double> params(MemberId f) const {
        const std::int64_t a = f / (detail::kLattice + 1);
        const std::int64_t b = f % (detail::kLattice + 1);
        if (a < 0 || b < a || b > detail::kLattice)
            throw DomainError("intervals: unknown member id " + std::to_string(f));
        return {static_cast<double>(a) / detail::kLattice,
                static_cast<double>(b) / detail::kLattice};
    }

private:
    Distribution dist_;
};

// {x -> clamp((x - t)/w, 0, 1)} with t on the lattice (t < 1) and w from a
// fixed dyadic grid.
class Ramps final : public FunctionClass {
public:
    explicit Ramps(Distribution dist) : dist_(std::move(dist)) {}

    static constexpr double kWidths[4] = {1.0, 0.5, 0.25, 0.125};

    double eval(MemberId f, double point) const override {
        const auto [t, w] = params(f);
        return std::min(1.0, std::max(0.0, (point - t) / w));
    }

    std::vector<MemberId> members(double resolution) const override {
        const std::int64_t step = detail::lattice_step(resolution);
        std::vector<MemberId> ids;
        for (std::int64_t k = 0; k < detail::kLattice; k += step)
            for (std::int64_t wi = 0; wi < 4; ++wi) ids.push_back(k * 4 + wi);
        return ids;
    }

    double true_mean(MemberId f) const override {
        const auto [t, w] = params(f);
        return dist_.ramp_mean(t, w);
    }

    std::string label(MemberId f) const override {
        const auto [t, w] = params(f);
        return "ramp(t=" + fmt_double(t) + ",w=" + fmt_double(w) + ")";
    }

    std::pair<double, double> params(MemberId f) const {
        const std::int64_t k = f / 4;
        const std::int64_t wi = f % 4;
        if (f < 0 || k >= detail::kLattice)
            throw DomainError("ramps: unknown member id " + std::to_string(f));
        return {static_cast<double>(k) / detail::kLattice, kWidths[wi]};
    }

private:
    Distribution dist_;
};

// Values tabulated on a finite space: rows are members, columns are atoms.
class ExplicitMatrix final : public FunctionClass {
public:
    ExplicitMatrix(FiniteSpace space, std::vector<std::vector<double>> values)
        : space_(std::move(space)), values_(std::move(values)) {
        if (values_.empty()) throw DomainError("explicit matrix: no members");
        for (const auto& row : values_) {
            if (row.size() != space_.size())
                throw DomainError("explicit matrix: row width must equal atom count");
            for (double v : row)
                if (!(v >= 0.0 && v <= 1.0))
                    throw DomainError("explicit matrix: values must lie in [0, 1]");
        }
    }

    static ExplicitMatrix from_csv(std::istream& in, FiniteSpace space) {
        return ExplicitMatrix(std::move(space), read_numeric_csv(in));
    }

    double eval(MemberId f, double point) const override {
        return row(f)[space_.index_of(point)];
    }

    std::vector<MemberId> members(double) const override {
        std::vector<MemberId> ids(values_.size());
        for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = static_cast<MemberId>(i);
        return ids;
    }

    double true_mean(MemberId f) const override {
        const auto& r = row(f);
        double acc = 0.0;
        for (std::size_t j = 0; j < space_.size(); ++j) acc += space_.prob(j) * r[j];
        return acc;
    }

    std::size_t member_count() const { return values_.size(); }
    const FiniteSpace& space() const { return space_; }
    const std::vector<double>& row(MemberId f) const {
        if (f < 0 || static_cast<std::size_t>(f) >= values_.size())
            throw DomainError("explicit matrix: unknown member id " + std::to_string(f));
        return values_[static_cast<std::size_t>(f)];
    }

    bool is_binary() const {
        for (const auto& r : values_)
            for (double v : r)
                if (v != 0.0 && v != 1.0) return false;
        return true;
    }

private:
    FiniteSpace space_;
    std::vector<std::vector<double>> values_;
};

// ---- basic empirical-process operations -----------------------------------

inline double empirical_mean(const FunctionClass& cls, MemberId f, const Sample& x) {
    if (x.points.empty()) throw DomainError("empirical_mean: empty sample");
    double s = 0.0;
    for (double p : x.points) s += cls.eval(f, p);
    return s / static_cast<double>(x.n());
}

// sum_i (Pf - f(x_i)) = n (Pf - fbar)
inline double deviation_sum(const FunctionClass& cls, MemberId f, const Sample& x) {
    if (x.points.empty()) throw DomainError("deviation_sum: empty sample");
    const double pf = cls.true_mean(f);
    double s = 0.0;
    for (double p : x.points) s += cls.eval(f, p);
    return static_cast<double>(x.n()) * pf - s;
}

} // namespace epb
