#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "epb/classes.hpp"
#include "epb/envelope.hpp"
#include "epb/errors.hpp"
#include "epb/rng.hpp"

namespace epb {

// ---- combinatorial capacity -------------------------------------------------

struct TraceCount {
    int n = 0;
    std::uint64_t count = 0;
};

namespace detail {
inline void check_shatter_guard(std::size_t m, int n) {
    // spec'd enumeration guard: m^n <= 1e7 configurations
    if (n < 1) throw DomainError("shatter_coefficient: n >= 1 required");
    const double lg = n * std::log2(static_cast<double>(m));
    if (lg > std::log2(1e7))
        throw CapacityError("shatter_coefficient: m^n exceeds the 1e7 enumeration guard");
}

// Distinct traces of the set class on a fixed atom subset.
inline std::uint64_t traces_on(const ExplicitMatrix& sets, const std::vector<int>& subset) {
    std::vector<std::uint64_t> patterns;
    patterns.reserve(sets.member_count());
    for (std::size_t r = 0; r < sets.member_count(); ++r) {
        const auto& row = sets.row(static_cast<MemberId>(r));
        std::uint64_t bits = 0;
        for (std::size_t b = 0; b < subset.size(); ++b)
            if (row[static_cast<std::size_t>(subset[b])] != 0.0) bits |= 1ULL << b;
        patterns.push_back(bits);
    }
    std::sort(patterns.begin(), patterns.end());
    patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());
    return patterns.size();
}
} // namespace detail

// S(n): maximum number of distinct intersections with an n-point sample.
// Repeated sample points never enlarge the trace set, so it suffices to scan
// atom subsets of size min(n, m).
inline TraceCount shatter_coefficient(const ExplicitMatrix& sets, int n) {
    if (!sets.is_binary())
        throw DomainError("shatter_coefficient: set class must be 0/1 valued");
    const std::size_t m = sets.space().size();
    detail::check_shatter_guard(m, n);
    const int k = std::min<std::int64_t>(n, static_cast<std::int64_t>(m));
    if (k > 63) throw CapacityError("shatter_coefficient: subset size above 63");

    std::uint64_t best = 0;
    std::vector<int> subset(static_cast<std::size_t>(k));
    // iterate k-combinations of {0..m-1}
    for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = i;
    while (true) {
        best = std::max(best, detail::traces_on(sets, subset));
        int i = k - 1;
        while (i >= 0 && subset[static_cast<std::size_t>(i)] ==
                             static_cast<int>(m) - k + i)
            --i;
        if (i < 0) break;
        ++subset[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
    return TraceCount{n, best};
}

struct VcResult {
    int d = 0;
    bool at_cap = false; // growth never stopped before j_max: read as "d >= j_max"
};

// Largest shattered sample size, floored at 1 so that Sauer's (en/d)^d form
// stays well defined for trivial classes.
inline VcResult vc_dimension(const ExplicitMatrix& sets, int j_max = 32) {
    for (int j = 1; j <= j_max; ++j) {
        const TraceCount tc = shatter_coefficient(sets, j);
        if (tc.count < (1ULL << j)) return VcResult{std::max(1, j - 1), false};
    }
    return VcResult{j_max, true};
}

// Sauer bound (en/d)^d for n >= d >= 1.
inline double sauer_bound(int d, std::int64_t n) {
    if (d < 1) throw DomainError("sauer_bound: d >= 1 required");
    if (n < d) throw DomainError("sauer_bound: n >= d required");
    return std::exp(d * (1.0 + std::log(static_cast<double>(n) / d)));
}

// ---- metric capacity --------------------------------------------------------

// Finite point set in R^k under the empirical L2 metric with the uniform
// measure on coordinates: d(f,g) = sqrt(k^-1 sum (f_i-g_i)^2).
struct PackingQuery {
    std::vector<std::vector<double>> points;
    double u = 0.0;

    void validate() const {
        if (!(u > 0.0)) throw DomainError("packing: separation radius u must be > 0");
        if (points.empty()) throw DomainError("packing: empty point set");
        for (const auto& p : points)
            if (p.size() != points.front().size())
                throw DomainError("packing: vectors must share dimension");
    }
};

inline double coord_l2(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s / static_cast<double>(a.size()));
}

struct PackingResult {
    int count = 0;
    std::vector<int> selected;
};

// Maximal (non-extendable) u-separated subset grown in index order; ties go
// to the lowest index. Maximality makes the result a u-cover as well.
inline PackingResult greedy_packing(const PackingQuery& q) {
    q.validate();
    PackingResult r;
    for (std::size_t i = 0; i < q.points.size(); ++i) {
        bool separated = true;
        for (int s : r.selected)
            if (coord_l2(q.points[i], q.points[static_cast<std::size_t>(s)]) <= q.u) {
                separated = false;
                break;
            }
        if (separated) r.selected.push_back(static_cast<int>(i));
    }
    r.count = static_cast<int>(r.selected.size());
    return r;
}

// Exact maximum u-separated subset by subset enumeration (oracle; <= 20 points).
inline int brute_packing(const PackingQuery& q) {
    q.validate();
    const std::size_t n = q.points.size();
    if (n > 20) throw CapacityError("brute_packing: more than 20 points");
    std::vector<std::uint32_t> compat(n, 0); // bitmask of points farther than u
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && coord_l2(q.points[i], q.points[j]) > q.u)
                compat[i] |= 1u << j;
    const std::uint32_t full = n == 32 ? 0xffffffffu : ((1u << n) - 1u);
    std::vector<char> valid(static_cast<std::size_t>(full) + 1, 0);
    valid[0] = 1;
    int best = 1;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const std::uint32_t low = mask & (~mask + 1u);
        const std::uint32_t rest = mask ^ low;
        const int i = __builtin_ctz(low);
        valid[mask] =
            valid[rest] && ((compat[static_cast<std::size_t>(i)] & rest) == rest);
        if (valid[mask]) best = std::max(best, __builtin_popcount(mask));
    }
    return best;
}

// Haussler's packing bound for a VC-subgraph class of dimension d.
inline EntropyEnvelope haussler_envelope(int d) { return EntropyEnvelope::haussler(d); }

// ---- bracketing -------------------------------------------------------------

// A u-bracket [1(x<=lo), 1(x<=hi)] for the threshold class; width is the
// L2(P) distance between the endpoints.
struct Bracket {
    double lo_param = 0.0;
    double hi_param = 0.0;
    double width = 0.0;
};

// Covers the threshold class with ceil(1/u^2) CDF cells of mass <= u^2 plus a
// degenerate endpoint bracket; the count is an upper bound on the bracketing
// number at scale u.
inline std::vector<Bracket> threshold_brackets(double u, const ContinuousLine& dist) {
    if (!(u > 0.0)) throw DomainError("threshold_brackets: u must be > 0");
    const double cap = std::min(1.0, u);
    const double cell = cap * cap;
    const int cells = static_cast<int>(std::ceil(1.0 / cell - 1e-12));
    std::vector<Bracket> out;
    out.reserve(static_cast<std::size_t>(cells) + 1);
    double prev_t = dist.quantile(0.0);
    for (int k = 1; k <= cells; ++k) {
        const double mass = std::min(1.0, k * cell);
        const double t = dist.quantile(mass);
        Bracket b;
        b.lo_param = prev_t;
        b.hi_param = t;
        b.width = std::sqrt(std::max(0.0, dist.cdf(t) - dist.cdf(prev_t)));
        out.push_back(b);
        prev_t = t;
    }
    out.push_back(Bracket{prev_t, prev_t, 0.0});
    return out;
}

// Measured bracketing counts over a u-grid, packaged as a table envelope.
inline EntropyEnvelope bracketing_table_envelope(const ContinuousLine& dist,
                                                 const std::vector<double>& u_grid) {
    if (u_grid.empty()) throw DomainError("bracketing table: empty u grid");
    std::vector<std::pair<double, double>> rows;
    rows.reserve(u_grid.size());
    for (double u : u_grid)
        rows.emplace_back(u, static_cast<double>(threshold_brackets(u, dist).size()));
    return EntropyEnvelope::from_table(std::move(rows), false);
}

// ---- empirical envelope estimation -------------------------------------------

inline double weighted_l2(const std::vector<double>& a, const std::vector<double>& b,
                          const std::vector<double>& w) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += w[i] * d * d;
    }
    return std::sqrt(s);
}

inline int greedy_packing_weighted(const std::vector<std::vector<double>>& pts,
                                   const std::vector<double>& w, double u) {
    std::vector<int> sel;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool ok = true;
        for (int s : sel)
            if (weighted_l2(pts[i], pts[static_cast<std::size_t>(s)], w) <= u) {
                ok = false;
                break;
            }
        if (ok) sel.push_back(static_cast<int>(i));
    }
    return static_cast<int>(sel.size());
}

// Bootstrap weights over k coordinates (resample counts divided by k).
inline std::vector<std::vector<double>> bootstrap_measures(std::size_t dim, int count,
                                                           std::uint64_t seed) {
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int r = 0; r < count; ++r) {
        Rng rng = Rng::for_replicate(seed, static_cast<std::uint64_t>(r));
        std::vector<double> w(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            w[rng.next_below(dim)] += 1.0 / static_cast<double>(dim);
        out.push_back(std::move(w));
    }
    return out;
}

// Lower estimate of the uniform envelope sup_Q D(F, u, L2(Q)): the best greedy
// packing over the supplied list of discrete measures, tabulated on u_grid.
inline EntropyEnvelope empirical_envelope(const std::vector<std::vector<double>>& pts,
                                          const std::vector<std::vector<double>>& measures,
                                          const std::vector<double>& u_grid) {
    if (pts.empty() || measures.empty() || u_grid.empty())
        throw DomainError("empirical envelope: empty input");
    std::vector<std::pair<double, double>> rows;
    for (double u : u_grid) {
        if (!(u > 0.0)) throw DomainError("empirical envelope: u must be > 0");
        int best = 1;
        for (const auto& w : measures)
            best = std::max(best, greedy_packing_weighted(pts, w, u));
        rows.emplace_back(u, static_cast<double>(best));
    }
    // enforce monotonicity against greedy noise: a packing at a finer scale
    // dominates any coarser one
    std::sort(rows.begin(), rows.end());
    for (std::size_t i = rows.size(); i-- > 1;)
        rows[i - 1].second = std::max(rows[i - 1].second, rows[i].second);
    return EntropyEnvelope::from_table(std::move(rows), true);
}

// ---- canonical set classes over a finite space --------------------------------

// All distinct half-line traces {x <= t} on the atoms, including the empty set.
inline ExplicitMatrix threshold_sets(const FiniteSpace& space) {
    std::vector<double> sorted = space.atoms();
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<double>> rows;
    rows.emplace_back(space.size(), 0.0); // empty trace
    for (double t : sorted) {
        std::vector<double> row(space.size());
        for (std::size_t j = 0; j < space.size(); ++j)
            row[j] = space.atom(j) <= t ? 1.0 : 0.0;
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return ExplicitMatrix(space, std::move(rows));
}

// All distinct interval traces {a <= x <= b} on the atoms, including the empty set.
inline ExplicitMatrix interval_sets(const FiniteSpace& space) {
    std::vector<double> sorted = space.atoms();
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::vector<double>> rows;
    rows.emplace_back(space.size(), 0.0);
    for (std::size_t i = 0; i < sorted.size(); ++i)
        for (std::size_t j = i; j < sorted.size(); ++j) {
            std::vector<double> row(space.size());
            for (std::size_t k = 0; k < space.size(); ++k)
                row[k] = (space.atom(k) >= sorted[i] && space.atom(k) <= sorted[j]) ? 1.0 : 0.0;
            rows.push_back(std::move(row));
        }
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    return ExplicitMatrix(space, std::move(rows));
}

} // namespace epb
