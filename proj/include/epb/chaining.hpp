#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "epb/entropy.hpp"
#include "epb/envelope.hpp"
#include "epb/errors.hpp"

namespace epb {

// Class members evaluated at a pair of samples (x_1..x_n, y_1..y_n), viewed
// as points of R^{2n} under d(f,g) = ((2n)^-1 sum (f_i-g_i)^2)^{1/2}.
struct PointSet2n {
    std::vector<std::vector<double>> vectors;

    PointSet2n() = default;
    explicit PointSet2n(std::vector<std::vector<double>> vecs) : vectors(std::move(vecs)) {
        if (vectors.empty()) throw DomainError("point set: empty");
        const std::size_t dim = vectors.front().size();
        if (dim == 0 || dim % 2 != 0)
            throw DomainError("point set: dimension must be a positive even number");
        for (const auto& v : vectors) {
            if (v.size() != dim) throw DomainError("point set: vectors must share dimension");
            for (double e : v)
                if (!(e >= 0.0 && e <= 1.0))
                    throw DomainError("point set: entries must lie in [0, 1]");
        }
    }

    std::size_t dim() const { return vectors.front().size(); }
    std::size_t half_n() const { return dim() / 2; }
};

namespace detail {
inline double vec_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.size()));
}
} // namespace detail

// Dyadic net hierarchy {0} = F_0 <= F_1 <= ... from the chaining construction.
// Internal point index 0 is the zero anchor; member i maps to index i+1.
struct NetHierarchy {
    std::vector<std::vector<double>> pts; // pts[0] = 0
    std::size_t half_n = 0;
    int j_max = 0;
    std::vector<std::vector<int>> levels; // levels[j]: internal indices, sorted
    std::vector<double> level_scale_d;    // D value driving the collapse rule per level
    std::vector<char> collapsed_with_next; // F_j was set equal to F_{j+1}

    double dist(int a, int b) const {
        return detail::vec_dist(pts[static_cast<std::size_t>(a)],
                                pts[static_cast<std::size_t>(b)]);
    }
    double dist_to_zero(int a) const { return dist(0, a); }
    int member_index(std::size_t member) const { return static_cast<int>(member) + 1; }
};

// Greedy maximal 2^-j-separated nets grown incrementally (level j+1 extends
// level j); maximality makes every level a 2^-j cover. When an envelope is
// supplied and D(2^-j) = D(2^-j-1), level j reuses level j+1 verbatim.
inline NetHierarchy build_hierarchy(const PointSet2n& points, int j_max = 20,
                                    const EntropyEnvelope* envelope = nullptr) {
    if (j_max < 0) throw DomainError("build_hierarchy: j_max must be >= 0");
    NetHierarchy h;
    h.half_n = points.half_n();
    h.j_max = j_max;
    h.pts.reserve(points.vectors.size() + 1);
    h.pts.emplace_back(points.dim(), 0.0);
    for (const auto& v : points.vectors) h.pts.push_back(v);

    // resolution guard: the deepest level must separate all distinct points
    double min_dist = 2.0;
    for (std::size_t a = 0; a < h.pts.size(); ++a)
        for (std::size_t b = a + 1; b < h.pts.size(); ++b) {
            const double d =
                detail::vec_dist(h.pts[a], h.pts[b]);
            if (d > 0.0) min_dist = std::min(min_dist, d);
        }
    if (std::ldexp(1.0, -j_max) >= min_dist)
        throw ResolutionError("build_hierarchy: 2^-j_max must fall below the minimum nonzero distance");

    // raw greedy levels
    std::vector<std::vector<int>> raw(static_cast<std::size_t>(j_max) + 1);
    raw[0] = {0};
    for (int j = 1; j <= j_max; ++j) {
        const double scale = std::ldexp(1.0, -j);
        std::vector<int> level = raw[static_cast<std::size_t>(j - 1)];
        for (int cand = 0; cand < static_cast<int>(h.pts.size()); ++cand) {
            bool separated = true;
            for (int s : level)
                if (h.dist(cand, s) <= scale && cand != s) {
                    separated = false;
                    break;
                }
            bool present = false;
            for (int s : level) present = present || s == cand;
            if (separated && !present) level.push_back(cand);
        }
        std::sort(level.begin(), level.end());
        raw[static_cast<std::size_t>(j)] = std::move(level);
    }
    std::sort(raw[0].begin(), raw[0].end());

    h.levels.assign(static_cast<std::size_t>(j_max) + 1, {});
    h.level_scale_d.assign(static_cast<std::size_t>(j_max) + 1, 0.0);
    h.collapsed_with_next.assign(static_cast<std::size_t>(j_max) + 1, 0);

    if (envelope) {
        for (int j = 0; j <= j_max; ++j)
            h.level_scale_d[static_cast<std::size_t>(j)] = envelope->at(std::ldexp(1.0, -j));
        h.levels[static_cast<std::size_t>(j_max)] = raw[static_cast<std::size_t>(j_max)];
        for (int j = j_max - 1; j >= 0; --j) {
            if (h.level_scale_d[static_cast<std::size_t>(j)] ==
                h.level_scale_d[static_cast<std::size_t>(j + 1)]) {
                h.levels[static_cast<std::size_t>(j)] = h.levels[static_cast<std::size_t>(j + 1)];
                h.collapsed_with_next[static_cast<std::size_t>(j)] = 1;
            } else {
                h.levels[static_cast<std::size_t>(j)] = raw[static_cast<std::size_t>(j)];
            }
        }
        for (int j = 0; j <= j_max; ++j)
            if (static_cast<double>(h.levels[static_cast<std::size_t>(j)].size()) >
                h.level_scale_d[static_cast<std::size_t>(j)])
                throw HypothesisError("build_hierarchy: envelope does not dominate the realized packing");
    } else {
        h.levels = raw;
        for (int j = 0; j <= j_max; ++j) {
            h.level_scale_d[static_cast<std::size_t>(j)] =
                static_cast<double>(h.levels[static_cast<std::size_t>(j)].size());
            if (j < j_max)
                h.collapsed_with_next[static_cast<std::size_t>(j)] =
                    raw[static_cast<std::size_t>(j)] == raw[static_cast<std::size_t>(j + 1)] ? 1 : 0;
        }
    }
    return h;
}

namespace detail {
// j with d in (2^{-j-1}, 2^{-j}], clamped to j >= 0 (entries in [0,1] give d <= 1).
inline int dyadic_level(double d) {
    if (!(d > 0.0)) throw DomainError("dyadic_level: d must be > 0");
    int j = static_cast<int>(std::floor(-std::log2(d)));
    if (j < 0) j = 0;
    while (d <= std::ldexp(1.0, -j - 1)) ++j;
    while (j > 0 && d > std::ldexp(1.0, -j)) --j;
    return j;
}
} // namespace detail

// Projections pi_j(f): zero through the level matching d(f,0), then the
// nearest net point (lowest index on ties) at every finer level.
inline std::vector<int> project(const NetHierarchy& h, std::size_t member) {
    const int f = h.member_index(member);
    if (f >= static_cast<int>(h.pts.size()))
        throw DomainError("project: unknown member index");
    std::vector<int> pis(static_cast<std::size_t>(h.j_max) + 1, 0);
    const double d0 = h.dist_to_zero(f);
    if (d0 == 0.0) return pis; // f is the anchor itself
    const int j0 = detail::dyadic_level(d0);
    for (int k = 0; k <= h.j_max; ++k) {
        if (k <= j0) {
            pis[static_cast<std::size_t>(k)] = 0;
            continue;
        }
        const double scale = std::ldexp(1.0, -k);
        int best = -1;
        double best_d = 0.0;
        for (int cand : h.levels[static_cast<std::size_t>(k)]) {
            const double d = h.dist(f, cand);
            if (best < 0 || d < best_d) {
                best = cand;
                best_d = d;
            }
        }
        if (best < 0 || best_d > scale + 1e-12)
            throw ResolutionError("project: member not covered at level " + std::to_string(k));
        pis[static_cast<std::size_t>(k)] = best;
    }
    return pis;
}

// Delta_j = {g - h : g in F_j, h in F_{j-1}, d(g,h) <= 2^{-j+2}}, stored as
// index pairs; {0} when the collapse rule fired between j-1 and j.
struct DeltaLevel {
    bool zero_only = false;
    std::vector<std::pair<int, int>> pairs;
};

inline std::vector<DeltaLevel> delta_sets(const NetHierarchy& h) {
    std::vector<DeltaLevel> out(static_cast<std::size_t>(h.j_max) + 1);
    for (int j = 1; j <= h.j_max; ++j) {
        DeltaLevel& dl = out[static_cast<std::size_t>(j)];
        if (h.level_scale_d[static_cast<std::size_t>(j)] ==
            h.level_scale_d[static_cast<std::size_t>(j - 1)]) {
            dl.zero_only = true;
            continue;
        }
        const double link = std::ldexp(1.0, -j + 2);
        for (int g : h.levels[static_cast<std::size_t>(j)])
            for (int q : h.levels[static_cast<std::size_t>(j - 1)])
                if (h.dist(g, q) <= link) dl.pairs.emplace_back(g, q);
    }
    return out;
}

// I_j = sqrt(n) int over the dyadic band (2^{-j-1}, 2^{-j}] of sqrt(log D).
inline std::vector<double> level_integrals(const EntropyEnvelope& env, std::int64_t n,
                                           int j_max, double tol = 1e-8) {
    if (n < 1) throw DomainError("level_integrals: n >= 1 required");
    if (j_max < 0) throw DomainError("level_integrals: j_max >= 0 required");
    std::vector<double> out(static_cast<std::size_t>(j_max) + 1);
    const double root_n = std::sqrt(static_cast<double>(n));
    double outer = entropy_integral(env, 1.0, tol);
    for (int j = 0; j <= j_max; ++j) {
        const double inner = entropy_integral(env, std::ldexp(1.0, -j - 1), tol);
        out[static_cast<std::size_t>(j)] = root_n * (outer - inner);
        outer = inner;
    }
    return out;
}

// Chained bound for one member: u sqrt(n) int_0^{2^{-j-1}} sqrt(log D) where
// d(f,0) lands in (2^{-j-1}, 2^{-j}]; the coordinate mean dominates d(f,0)^2.
struct ChainedBound {
    std::size_t member = 0;
    int level_j = 0;
    double dist0 = 0.0;
    double coord_mean = 0.0; // fbar over the 2n coordinates
    double bound = 0.0;
    bool dist_le_sqrt_mean = false;
};

inline ChainedBound chained_sup_bound(const NetHierarchy& h, const EntropyEnvelope& env,
                                      double u, std::size_t member, double tol = 1e-8) {
    const int f = h.member_index(member);
    if (f >= static_cast<int>(h.pts.size()))
        throw DomainError("chained_sup_bound: unknown member index");
    ChainedBound out;
    out.member = member;
    const auto& v = h.pts[static_cast<std::size_t>(f)];
    double mean = 0.0;
    for (double e : v) mean += e;
    mean /= static_cast<double>(v.size());
    out.coord_mean = mean;
    out.dist0 = h.dist_to_zero(f);
    if (out.dist0 == 0.0) {
        out.level_j = h.j_max;
        out.bound = 0.0;
        out.dist_le_sqrt_mean = true;
        return out;
    }
    out.level_j = detail::dyadic_level(out.dist0);
    out.dist_le_sqrt_mean = out.dist0 <= std::sqrt(mean) + 1e-12;
    out.bound = u * std::sqrt(static_cast<double>(h.half_n)) *
                entropy_integral(env, std::ldexp(1.0, -out.level_j - 1), tol);
    return out;
}

} // namespace epb
