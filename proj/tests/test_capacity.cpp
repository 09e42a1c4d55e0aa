#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "epb/capacity.hpp"
#include "epb/rng.hpp"

using namespace epb;

namespace {
FiniteSpace uniform_space(std::vector<double> atoms) {
    std::vector<double> probs(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
    // nudge the last mass so the sum is exactly 1 in floating point
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) acc += probs[i];
    probs.back() = 1.0 - acc;
    return FiniteSpace(std::move(atoms), std::move(probs));
}

std::vector<double> random_layout(int count, Rng& rng) {
    std::vector<double> atoms;
    while (static_cast<int>(atoms.size()) < count) {
        const double v = rng.next_unit();
        bool fresh = true;
        for (double a : atoms) fresh = fresh && std::fabs(a - v) > 1e-6;
        if (fresh) atoms.push_back(v);
    }
    return atoms;
}
} // namespace

TEST_CASE("shatter coefficient basics") {
    auto space = uniform_space({0.1, 0.5, 0.9});
    // the empty-set class has a single trace everywhere
    ExplicitMatrix empty_only(space, {{0.0, 0.0, 0.0}});
    for (int n = 1; n <= 4; ++n) CHECK(shatter_coefficient(empty_only, n).count == 1);

    // half-lines trace out prefixes of the sorted sample
    auto halflines = threshold_sets(space);
    CHECK(shatter_coefficient(halflines, 3).count == 4);

    // a class shattering a pair reaches S(2) = 4
    ExplicitMatrix pair_shatter(space, {{0.0, 0.0, 0.0}, {1.0, 0.0, 0.0},
                                        {0.0, 1.0, 0.0}, {1.0, 1.0, 0.0}});
    CHECK(shatter_coefficient(pair_shatter, 2).count == 4);

    CHECK_THROWS_AS(shatter_coefficient(ExplicitMatrix(space, {{0.0, 0.5, 1.0}}), 2),
                    DomainError);
}

TEST_CASE("shatter guard rejects oversized enumerations") {
    Rng rng(5);
    auto atoms = random_layout(12, rng);
    auto space = uniform_space(atoms);
    auto sets = threshold_sets(space);
    CHECK_THROWS_AS(shatter_coefficient(sets, 40), CapacityError);
}

TEST_CASE("vc dimension of canonical classes") {
    // d(half-lines) = 1 and d(intervals) = 2 on every layout with >= 3 atoms
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const int count = 3 + static_cast<int>(rng.next_below(3));
        auto space = uniform_space(random_layout(count, rng));
        CHECK(vc_dimension(threshold_sets(space)).d == 1);
        CHECK(vc_dimension(interval_sets(space)).d == 2);
    }

    auto space = uniform_space({0.1, 0.3, 0.5, 0.7, 0.9});
    ExplicitMatrix empty_only(space, {{0, 0, 0, 0, 0}});
    CHECK(vc_dimension(empty_only).d == 1);

    // intervals on 5 atoms: S(2) = 4, S(3) = 7
    auto ivl = interval_sets(space);
    CHECK(shatter_coefficient(ivl, 2).count == 4);
    CHECK(shatter_coefficient(ivl, 3).count == 7);

    // the trace count never exceeds 2^n
    for (int n = 1; n <= 4; ++n)
        CHECK(shatter_coefficient(ivl, n).count <= (1ULL << n));

    // a class shattering everything up to the cap reports a lower bound only
    auto small = uniform_space({0.2, 0.8});
    ExplicitMatrix power_set(small, {{0, 0}, {1, 0}, {0, 1}, {1, 1}});
    const auto capped = vc_dimension(power_set, 2);
    CHECK(capped.at_cap);
    CHECK(capped.d == 2);
    const auto full = vc_dimension(power_set);
    CHECK_FALSE(full.at_cap);
    CHECK(full.d == 2);
}

TEST_CASE("sauer bound values and domination") {
    CHECK(sauer_bound(1, 1) == Catch::Approx(std::exp(1.0)).epsilon(1e-12));
    CHECK(sauer_bound(2, 10) == Catch::Approx(std::pow(5.0 * std::exp(1.0), 2)).epsilon(1e-12));
    CHECK(sauer_bound(3, 3) == Catch::Approx(std::exp(3.0)).epsilon(1e-12));
    CHECK(sauer_bound(3, 3) >= std::pow(2.0, 3));
    CHECK_THROWS_AS(sauer_bound(2, 1), DomainError);
    CHECK_THROWS_AS(sauer_bound(0, 5), DomainError);

    // S(n) <= (en/d)^d across built-in set classes over small spaces
    Rng rng(23);
    for (int trial = 0; trial < 8; ++trial) {
        const int count = 3 + static_cast<int>(rng.next_below(4)); // up to 6 atoms
        auto space = uniform_space(random_layout(count, rng));
        for (const auto& sets : {threshold_sets(space), interval_sets(space)}) {
            const int d = vc_dimension(sets).d;
            for (int n = d; n <= count; ++n)
                CHECK(static_cast<double>(shatter_coefficient(sets, n).count) <=
                      sauer_bound(d, n) + 1e-9);
        }
    }
}

TEST_CASE("greedy packing on threshold vectors") {
    // thresholds on {0.1, 0.5, 0.9}: 4 distinct binary vectors
    std::vector<std::vector<double>> pts = {
        {0.0, 0.0, 0.0}, {1.0, 0.0, 0.0}, {1.0, 1.0, 0.0}, {1.0, 1.0, 1.0}};
    CHECK(greedy_packing({pts, 0.5}).count == 4);
    CHECK(greedy_packing({pts, 1.1}).count == 1);
    CHECK(brute_packing({pts, 0.5}) == 4);

    std::vector<std::vector<double>> same = {{0.3, 0.3}, {0.3, 0.3}, {0.3, 0.3}};
    CHECK(greedy_packing({same, 0.1}).count == 1);
    CHECK(brute_packing({same, 0.1}) == 1);

    // collinear points 0.4 apart (1-d vectors): endpoints are 0.8 apart
    std::vector<std::vector<double>> line = {{0.0}, {0.4}, {0.8}};
    CHECK(brute_packing({line, 0.5}) == 2);

    CHECK_THROWS_AS(greedy_packing({pts, 0.0}), DomainError);
    CHECK_THROWS_AS(brute_packing({std::vector<std::vector<double>>(21, {0.0}), 0.5}),
                    CapacityError);
}

TEST_CASE("greedy packing is separated, covering, and below the brute maximum") {
    Rng rng(421);
    for (int trial = 0; trial < 60; ++trial) {
        const int npts = 2 + static_cast<int>(rng.next_below(11));
        const int dim = 1 + static_cast<int>(rng.next_below(6));
        std::vector<std::vector<double>> pts(static_cast<std::size_t>(npts),
                                             std::vector<double>(static_cast<std::size_t>(dim)));
        for (auto& p : pts)
            for (auto& v : p) v = rng.next_unit();
        const double u = 0.05 + 0.6 * rng.next_unit();
        PackingQuery q{pts, u};
        const auto greedy = greedy_packing(q);
        const int brute = brute_packing(q);
        REQUIRE(greedy.count <= brute);
        // separation of the selected subset
        for (std::size_t a = 0; a < greedy.selected.size(); ++a)
            for (std::size_t b = a + 1; b < greedy.selected.size(); ++b)
                REQUIRE(coord_l2(pts[static_cast<std::size_t>(greedy.selected[a])],
                                 pts[static_cast<std::size_t>(greedy.selected[b])]) > u);
        // covering: every point within u of some selected point
        for (const auto& p : pts) {
            double best = 1e300;
            for (int s : greedy.selected)
                best = std::min(best, coord_l2(p, pts[static_cast<std::size_t>(s)]));
            REQUIRE(best <= u);
        }
    }
}

TEST_CASE("haussler envelope values") {
    const double e = std::exp(1.0);
    auto env = haussler_envelope(1);
    CHECK(env.at(0.5) == Catch::Approx(e * 2.0 * (2.0 * e / 0.25)).epsilon(1e-12));
    CHECK(env.at(100.0) == 1.0);
    auto env2 = haussler_envelope(2);
    CHECK(env2.at(1.0) == Catch::Approx(e * 3.0 * std::pow(2.0 * e, 2)).epsilon(1e-12));
    CHECK_THROWS_AS(haussler_envelope(0), DomainError);
}

TEST_CASE("envelopes are nonincreasing and floored at 1") {
    Rng rng(2718);
    std::vector<EntropyEnvelope> envs = {
        EntropyEnvelope::constant_envelope(2.0), EntropyEnvelope::power(1.5, 1.0),
        haussler_envelope(2),
        EntropyEnvelope::from_table({{0.125, 9.0}, {0.25, 5.0}, {0.5, 3.0}, {1.0, 2.0}})};
    for (const auto& env : envs) {
        for (int i = 0; i < 1000; ++i) {
            double u1 = 0.001 + rng.next_unit();
            double u2 = 0.001 + rng.next_unit();
            if (u1 > u2) std::swap(u1, u2);
            REQUIRE(env.at(u1) >= env.at(u2));
            REQUIRE(env.at(u2) >= 1.0);
        }
    }
    CHECK_THROWS_AS(envs[0].at(0.0), DomainError);
}

TEST_CASE("envelope json round trip") {
    auto tbl = EntropyEnvelope::from_table({{0.25, 4.0}, {0.5, 2.0}});
    auto back = EntropyEnvelope::from_json(tbl.to_json());
    CHECK(back.at(0.3) == tbl.at(0.3));
    auto pw = EntropyEnvelope::power(2.0, 0.5);
    CHECK(EntropyEnvelope::from_json(pw.to_json()).at(0.1) == pw.at(0.1));
    CHECK_THROWS_AS(EntropyEnvelope::from_json(nlohmann::json{{"kind", "power"}, {"c", 1.0}}),
                    ConfigError);
    CHECK_THROWS_AS(EntropyEnvelope::from_json(nlohmann::json{{"kind", "power"},
                                                              {"c", 1.0},
                                                              {"gamma", 1.0},
                                                              {"extra", 1}}),
                    ConfigError);
}

TEST_CASE("threshold brackets construction") {
    const auto uniform = ContinuousLine::uniform();
    CHECK(threshold_brackets(1.0, uniform).size() == 2);
    CHECK(threshold_brackets(0.5, uniform).size() == 5);
    CHECK_THROWS_AS(threshold_brackets(0.0, uniform), DomainError);

    Distribution dist(uniform);
    for (double u : {1.0, 0.7, 0.5, 0.25, 0.11}) {
        const auto brackets = threshold_brackets(u, uniform);
        CHECK(brackets.size() == static_cast<std::size_t>(std::ceil(1.0 / (u * u) - 1e-12)) + 1);
        for (const auto& b : brackets) {
            REQUIRE(b.lo_param <= b.hi_param);
            // width recomputed from the exact CDF mass
            const double mass = dist.prob_leq(b.hi_param) - dist.prob_leq(b.lo_param);
            REQUIRE(std::fabs(b.width - std::sqrt(std::max(0.0, mass))) <= 1e-9);
            REQUIRE(b.width <= u + 1e-9);
        }
    }
}

TEST_CASE("bracketing table envelope dominates nothing beyond its construction") {
    const auto uniform = ContinuousLine::uniform();
    std::vector<double> grid;
    for (int k = 1; k <= 32; ++k) grid.push_back(k / 32.0);
    auto env = bracketing_table_envelope(uniform, grid);
    CHECK(env.at(1.0) == 2.0);
    CHECK(env.at(0.5) == 5.0);
    // values step to the next measured scale
    CHECK(env.at(0.49) == env.at(0.5));
}

TEST_CASE("empirical envelope is a monotone lower estimate") {
    Rng rng(7);
    std::vector<std::vector<double>> pts(10, std::vector<double>(16));
    for (auto& p : pts)
        for (auto& v : p) v = rng.next_unit();
    auto measures = bootstrap_measures(16, 8, 99);
    for (const auto& w : measures) {
        double total = 0.0;
        for (double v : w) total += v;
        REQUIRE(total == Catch::Approx(1.0).margin(1e-12));
    }
    auto env = empirical_envelope(pts, measures, {0.125, 0.25, 0.5, 1.0});
    CHECK(env.lower_estimate);
    CHECK(env.at(0.125) >= env.at(0.25));
    CHECK(env.at(1.0) >= 1.0);
}
