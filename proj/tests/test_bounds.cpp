#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "epb/bounds.hpp"
#include "epb/capacity.hpp"
#include "epb/entropy.hpp"
#include "epb/rng.hpp"

using namespace epb;

TEST_CASE("vc bound values") {
    // S(2n) = 1 with delta = 4 e^{-n}: the bound collapses to 2
    CHECK(vc_bound(1.0, 50, 4.0 * std::exp(-50.0)) == Catch::Approx(2.0).epsilon(1e-12));
    // d=1, n=1000, delta=0.05 through the Sauer form
    CHECK(vc_bound_dim(1, 1000, 0.05) == Catch::Approx(0.22788531408773108).epsilon(1e-10));
    // substitution identity
    CHECK(vc_bound_dim(1, 1000, 0.05) ==
          Catch::Approx(vc_bound(sauer_bound(1, 2000), 1000, 0.05)).epsilon(1e-15));
    CHECK_THROWS_AS(vc_bound(0.5, 10, 0.05), DomainError);
    CHECK_THROWS_AS(vc_bound(1.0, 10, 0.0), DomainError);
    CHECK_THROWS_AS(vc_bound_dim(5, 3, 0.05), DomainError);

    // vanishing in n for fixed d
    CHECK(vc_bound_dim(1, 1 << 24, 0.05) < 0.01);
    // monotone decreasing along an n-grid
    double prev = 1e300;
    for (std::int64_t n = 10; n <= 100000; n *= 10) {
        const double b = vc_bound_dim(2, n, 0.05);
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("sauer domination of the exact trace count") {
    // exact S(2n) never exceeds the Sauer plug-in, so the dim bound dominates
    auto space = FiniteSpace({0.1, 0.3, 0.5, 0.7, 0.9}, {0.2, 0.2, 0.2, 0.2, 0.2});
    for (const auto& sets : {threshold_sets(space), interval_sets(space)}) {
        const int d = vc_dimension(sets).d;
        for (std::int64_t n = d; n <= 4; ++n) {
            const double s2n = static_cast<double>(shatter_coefficient(sets, 2 * static_cast<int>(n)).count);
            CHECK(vc_bound_dim(d, n, 0.1) >= vc_bound(s2n, n, 0.1) - 1e-12);
        }
    }
}

TEST_CASE("deviation threshold") {
    const double L = solve_l(1.0);
    const double t = deviation_threshold(1.0, std::sqrt(100.0 * 0.25), 100, 1.0, 0.25, L);
    CHECK(t == Catch::Approx(5.0 + 2.0 * std::sqrt(L * 100.0 * 0.25)).epsilon(1e-12));
    CHECK(t == Catch::Approx(15.57).margin(5e-3));
    // u -> 0 leaves only M phi(f)
    CHECK(deviation_threshold(1.3, 7.0, 100, 0.0, 0.25, L) == Catch::Approx(1.3 * 7.0));
    // sqrt(n) homogeneity under phi = sqrt(n Pf)
    const double t4 = deviation_threshold(1.0, std::sqrt(400.0 * 0.25), 400, 1.0, 0.25, L);
    CHECK(t4 == Catch::Approx(2.0 * t).epsilon(1e-12));
}

TEST_CASE("infimum over delta > 1") {
    CHECK(inf_delta_tradeoff(1.0, 1.0) == Catch::Approx(2.0));
    CHECK(inf_delta_tradeoff(100.0, 1.0) == Catch::Approx(20.0));
    // boundary case: the infimum exceeds twice the first argument
    CHECK(inf_delta_tradeoff(1.0, 100.0) == Catch::Approx(101.0));
    CHECK(inf_delta_tradeoff(1.0, 100.0) > 2.0);
    CHECK(inf_delta_tradeoff(0.0, 3.0) == Catch::Approx(3.0));
    CHECK(inf_delta_tradeoff(3.0, 0.0) == 0.0);
    CHECK_THROWS_AS(inf_delta_tradeoff(-1.0, 1.0), DomainError);

    // the closed form sits below a/delta + delta b for random delta > 1
    Rng rng(12);
    for (int i = 0; i < 1000; ++i) {
        const double a = 50.0 * rng.next_unit();
        const double b = 20.0 * rng.next_unit();
        const double inf = inf_delta_tradeoff(a, b);
        const double delta = 1.0 + 10.0 * rng.next_unit();
        REQUIRE(inf <= a / delta + delta * b + 1e-12);
    }
}

TEST_CASE("infimum matches direct minimization") {
    // golden-section oracle over delta in (1, delta_hi)
    auto oracle = [](double a, double b) {
        if (b == 0.0) return 0.0;
        auto f = [&](double d) { return a / d + d * b; };
        double lo = 1.0, hi = std::max(2.0, 4.0 * std::sqrt(std::max(a, 1.0) / b));
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = f(x1), f2 = f(x2);
        for (int it = 0; it < 300; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = f(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = f(x2);
            }
        }
        return std::min(f(1.0 + 1e-14), std::min(f1, f2));
    };
    Rng rng(999);
    for (int i = 0; i < 1000; ++i) {
        const double a = 50.0 * rng.next_unit();
        const double b = 20.0 * rng.next_unit();
        REQUIRE(std::fabs(inf_delta_tradeoff(a, b) - oracle(a, b)) <= 1e-9);
    }
}

TEST_CASE("integrated entropy bounds") {
    const auto env = EntropyEnvelope::constant_envelope(2.0);
    // K = 1, n = 100, Pf = 0.25, u = 1: phi + sqrt(n u Pf) = 4.16277... + 5
    const double expect = 10.0 * std::sqrt(std::log(2.0)) * 0.5 + 5.0;
    CHECK(entropy_deviation_bound(100, 0.25, env, 1.0, 1.0) == Catch::Approx(expect).epsilon(1e-9));
    CHECK(entropy_deviation_bound(100, 0.25, env, 1.0, 1.0) == Catch::Approx(9.1628).margin(1e-4));

    // compositional identity against the entropy module
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        const double pf = 0.01 + 0.99 * rng.next_unit();
        const double u = 0.1 + 3.0 * rng.next_unit();
        const double K = 0.5 + 4.0 * rng.next_unit();
        const std::int64_t n = 10 + static_cast<std::int64_t>(rng.next_below(1000));
        const double direct = entropy_deviation_bound(n, pf, env, u, K);
        const double composed =
            K * (phi({env, n, 1e-8}, pf) + std::sqrt(static_cast<double>(n) * u * pf));
        REQUIRE(direct == Catch::Approx(composed).epsilon(1e-12));
    }

    // vanishing Pf sends the whole bound to zero
    CHECK(entropy_deviation_bound(100, 1e-12, env, 1.0, 1.0) < 1e-4);

    // hypothesis D(1) >= 2
    CHECK_THROWS_AS(entropy_deviation_bound(100, 0.25, EntropyEnvelope::constant_envelope(1.0), 1.0, 1.0),
                    HypothesisError);

    // bracketing form mirrors the uniform-entropy form on a shared envelope
    CHECK(bracketing_deviation_bound(100, 0.25, env, 1.0, 1.0) ==
          Catch::Approx(entropy_deviation_bound(100, 0.25, env, 1.0, 1.0)).epsilon(1e-15));

    // table envelope value stays above the second term alone
    const auto tbl = bracketing_table_envelope(ContinuousLine::uniform(), {0.25, 0.5, 1.0});
    CHECK(bracketing_deviation_bound(100, 0.25, tbl, 1.0, 1.0) >= 5.0);
}

TEST_CASE("subgraph bound") {
    // delta = 1/n and d = 1 merge the two terms
    const double b = subgraph_bound(1, 1000, 1e-3, 1.0);
    CHECK(b == Catch::Approx(2.0 * std::sqrt(std::log(1000.0) / 1000.0)).epsilon(1e-12));
    CHECK(subgraph_bound(1, 1000, 0.05, 1.0) == Catch::Approx(0.13784618986457522).epsilon(1e-10));
    CHECK(subgraph_bound(1, 1 << 26, 0.05, 1.0) < 0.01);
    CHECK_THROWS_AS(subgraph_bound(1, 1, 0.05, 1.0), DomainError);
    // log(1/Pf) variant
    const double v = subgraph_bound(1, 1000, 0.05, 1.0, true, 0.5);
    CHECK(v < subgraph_bound(1, 1000, 0.05, 1.0));
}

TEST_CASE("relative-deviation bound") {
    // d log(1/nu) = log(1/delta) merges terms
    const double nu = 0.1, delta = 0.1;
    CHECK(relative_deviation_bound(1, 100, nu, delta, 1.0) ==
          Catch::Approx(std::sqrt(2.0 * std::log(1.0 / delta) / (100.0 * nu))).epsilon(1e-12));
    CHECK(relative_deviation_bound(1, 1000, 0.01, 0.05, 1.0) == Catch::Approx(0.87183154677621539).epsilon(1e-10));
    CHECK_THROWS_AS(relative_deviation_bound(1, 100, 0.0, 0.05, 1.0), DomainError);
    CHECK_THROWS_AS(relative_deviation_bound(1, 100, 1.0, 0.05, 1.0), DomainError);
}

TEST_CASE("comparison curve exposes the (Pf/nu)^{1/2} factor") {
    std::vector<double> grid;
    for (int k = 1; k <= 50; ++k) grid.push_back(k / 50.0);
    const auto rows = subgraph_li_comparison(1, 1000, 0.01, 0.05, 1.0, grid);
    REQUIRE(rows.size() == grid.size());
    // ratio grows with Pf and scales like sqrt(Pf/nu) for Pf >> nu
    for (std::size_t i = 1; i < rows.size(); ++i) REQUIRE(rows[i].ratio >= rows[i - 1].ratio);
    const double r_half = rows[24].ratio;  // Pf = 0.5
    const double r_full = rows[49].ratio;  // Pf = 1.0
    CHECK(r_full / r_half == Catch::Approx(std::sqrt(2.0)).epsilon(0.05));
}

TEST_CASE("bounds stay positive and finite on a grid") {
    Rng rng(808);
    for (int i = 0; i < 1000; ++i) {
        const std::int64_t n = 2 + static_cast<std::int64_t>(rng.next_below(100000));
        const double delta = 0.001 + 0.998 * rng.next_unit();
        const double pf = 0.001 + 0.999 * rng.next_unit();
        const double u = 0.01 + 5.0 * rng.next_unit();
        const double vals[] = {
            vc_bound_dim(1 + static_cast<int>(rng.next_below(3)), n + 3, delta),
            subgraph_bound(1, n, delta, 2.0),
            relative_deviation_bound(2, n, 0.05, delta, 2.0),
            deviation_threshold(1.0, std::sqrt(n * pf), n, u, pf, 1.12),
            entropy_deviation_bound(n, pf, EntropyEnvelope::constant_envelope(2.0), u, 2.0)};
        for (double v : vals) {
            REQUIRE(std::isfinite(v));
            REQUIRE(v > 0.0);
        }
    }
}
