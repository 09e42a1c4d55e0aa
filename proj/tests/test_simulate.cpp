#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <memory>

#include "epb/capacity.hpp"
#include "epb/simulate.hpp"

using namespace epb;

namespace {
Experiment thresholds_experiment(std::int64_t n, std::int64_t reps, std::uint64_t seed,
                                 Normalizer norm, double resolution = 1.0 / 256.0) {
    Experiment exp;
    exp.fclass = std::make_shared<Thresholds>(Distribution::uniform());
    exp.dist = Distribution::uniform();
    exp.n = n;
    exp.replicates = reps;
    exp.seed = seed;
    exp.normalizer = std::move(norm);
    exp.resolution = resolution;
    return exp;
}

std::shared_ptr<ExplicitMatrix> zero_class() {
    FiniteSpace space({0.0, 1.0}, {0.5, 0.5});
    return std::make_shared<ExplicitMatrix>(space,
                                            std::vector<std::vector<double>>{{0.0, 0.0}});
}
} // namespace

TEST_CASE("median of the zero class is zero") {
    Experiment exp;
    exp.fclass = zero_class();
    exp.dist = Distribution(FiniteSpace({0.0, 1.0}, {0.5, 0.5}));
    exp.n = 20;
    exp.replicates = 101;
    exp.seed = 5;
    exp.normalizer = Normalizer::constant_phi(1.0);
    exp.resolution = 1.0;
    const auto est = estimate_median(exp);
    CHECK(est.median == 0.0);
    CHECK(est.min == 0.0);
    CHECK(est.max == 0.0);
}

TEST_CASE("median requires an odd replicate count") {
    auto exp = thresholds_experiment(50, 100, 3, Normalizer::sqrt_mean());
    CHECK_THROWS_AS(estimate_median(exp), DomainError);
}

TEST_CASE("median of normalized threshold deviations is positive and stable") {
    auto exp = thresholds_experiment(64, 801, 11, Normalizer::sqrt_mean());
    const auto est = estimate_median(exp);
    CHECK(est.median > 0.0);
    CHECK(est.q25 <= est.median);
    CHECK(est.median <= est.q75);
    CHECK(est.below <= est.median);
    CHECK(est.above >= est.median);

    // doubling replicates moves the median by less than the quartile spread
    auto exp2 = thresholds_experiment(64, 1601, 11, Normalizer::sqrt_mean());
    const auto est2 = estimate_median(exp2);
    CHECK(std::fabs(est2.median - est.median) <= (est.q75 - est.q25));
}

TEST_CASE("median estimation is thread-invariant") {
    auto exp = thresholds_experiment(32, 201, 21, Normalizer::sqrt_mean());
    const auto a = estimate_median(exp, 1);
    const auto b = estimate_median(exp, 3);
    CHECK(a.median == b.median);
    CHECK(a.q25 == b.q25);
    CHECK(a.q75 == b.q75);
}

TEST_CASE("tail experiment enforces the phase-seed protocol") {
    auto exp = thresholds_experiment(50, 200, 3, Normalizer::sqrt_mean());
    CHECK_THROWS_AS(tail_experiment(exp, 1.0, 1.12, 3), ProtocolError);
}

TEST_CASE("tail experiment: huge u yields zero violations, tiny u passes vacuously") {
    auto exp = thresholds_experiment(60, 400, 3, Normalizer::sqrt_mean());
    exp.u_grid = {0.01, 40.0};
    const double L = solve_l(1.0);
    const auto median_est = estimate_median(thresholds_experiment(60, 401, 3, Normalizer::sqrt_mean()));
    const auto report = tail_experiment(exp, median_est.median, L, 4);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].budget == Catch::Approx(1.0)); // min(1, 2 e^{-0.01})
    CHECK(report.rows[0].pass);
    CHECK(report.rows[1].violations == 0);
    CHECK(report.rows[1].pass);
    CHECK(report.pass);
}

TEST_CASE("deviation tail at moderate scale") {
    const double L = solve_l(1.0);
    auto median_exp = thresholds_experiment(100, 501, 1001, Normalizer::sqrt_mean());
    const double M = estimate_median(median_exp, 2).median;
    auto tail = thresholds_experiment(100, 2000, 1001, Normalizer::sqrt_mean());
    tail.u_grid = {0.5, 1.0, 2.0};
    const auto report = tail_experiment(tail, M, L, 2002, 2);
    CHECK(report.pass);
    for (const auto& row : report.rows) CHECK(row.freq <= row.budget + 3.0 * row.stderr_freq);
}

TEST_CASE("integrated tail statistics power calibration") {
    auto exp = thresholds_experiment(80, 500, 70, Normalizer::entropy(haussler_envelope(1)));
    exp.u_grid = {1.0, 2.0};
    const auto stats = integrated_tail_statistics(exp, 71, 2);
    REQUIRE(stats.size() == 2);
    REQUIRE(stats[0].size() == 500);
    const double K = calibrate_k({stats}, {exp.u_grid});
    CHECK(K >= 1.0);
    CHECK(K <= 64.0);
    // the tail report at the calibrated K passes by construction
    const auto report = integrated_tail_experiment(exp, K, 71, 2);
    CHECK(report.pass);
}

TEST_CASE("symmetrization inequality holds empirically") {
    auto exp = thresholds_experiment(50, 1500, 31, Normalizer::entropy(haussler_envelope(1)));
    exp.u_grid = {2.0, 2.5, 3.0};
    const auto report = symmetrization_experiment(exp, 2);
    CHECK(report.shift == Catch::Approx(std::sqrt(2.0 / std::log(2.0))).epsilon(1e-15));
    CHECK(report.shift == Catch::Approx(1.6986).margin(1e-3));
    CHECK(report.pass);
    for (const auto& row : report.rows)
        CHECK(row.lhs_freq <=
              2.0 * row.rhs_freq +
                  3.0 * std::sqrt(row.lhs_stderr * row.lhs_stderr +
                                  4.0 * row.rhs_stderr * row.rhs_stderr) +
                  1e-12);
    // below the shift the two-sample threshold is negative: RHS is near-certain
    auto vac = thresholds_experiment(50, 400, 32, Normalizer::entropy(haussler_envelope(1)));
    vac.u_grid = {1.0};
    const auto vr = symmetrization_experiment(vac, 2);
    CHECK(vr.rows[0].rhs_freq >= 0.99);
}

TEST_CASE("chebyshev step: two-sided deviation of a single member") {
    // P(|sum(Pf - f(y_i))| >= sqrt(2 n Pf)) <= 1/2 for indicators
    const auto dist = Distribution::uniform();
    Thresholds thr(dist);
    const auto ids = thr.members(1.0 / 16.0);
    const std::int64_t n = 100;
    const int reps = 2000;
    for (const MemberId f : ids) {
        const double pf = thr.true_mean(f);
        int count = 0;
        for (int r = 0; r < reps; ++r) {
            Sample y = draw_sample(dist, static_cast<std::size_t>(n), 606060,
                                   static_cast<std::uint64_t>(r));
            double s = 0.0;
            for (double p : y.points) s += thr.eval(f, p);
            if (std::fabs(static_cast<double>(n) * pf - s) >=
                std::sqrt(2.0 * static_cast<double>(n) * pf))
                ++count;
        }
        const double freq = static_cast<double>(count) / reps;
        const double se = std::sqrt(std::max(freq * (1.0 - freq), 1e-12) / reps);
        REQUIRE(freq <= 0.5 + 3.0 * se);
    }
}

TEST_CASE("rademacher conditional sup") {
    const auto dist = Distribution::uniform();
    auto cls = std::make_shared<Thresholds>(dist);
    const Sample x = draw_sample(dist, 64, 515, 0);
    const Sample y = draw_sample(dist, 64, 516, 0);

    // identical samples make every difference row zero
    const auto same = rademacher_sup(*cls, x, x, Normalizer::entropy(haussler_envelope(1)),
                                     1.0 / 64.0, 200, 99);
    CHECK(same.max == 0.0);

    const auto summary = rademacher_sup(*cls, x, y, Normalizer::entropy(haussler_envelope(1)),
                                        1.0 / 64.0, 2000, 99, 2);
    CHECK(summary.draws == 2000);
    CHECK(summary.frac_at_least(36.0) < 0.5);
    CHECK(summary.max < 36.0);
    CHECK(summary.q50 <= summary.q90);

    // random 16-member classes: the chaining constant keeps the tail below 1/2
    Rng rng(727);
    for (int trial = 0; trial < 3; ++trial) {
        FiniteSpace space({0.1, 0.3, 0.5, 0.7, 0.9}, {0.2, 0.2, 0.2, 0.2, 0.2});
        std::vector<std::vector<double>> rows(16, std::vector<double>(5));
        for (auto& row : rows)
            for (auto& v : row) v = rng.next_unit();
        auto mat = std::make_shared<ExplicitMatrix>(space, rows);
        Distribution fdist(space);
        const Sample fx = draw_sample(fdist, 64, 616, static_cast<std::uint64_t>(trial));
        const Sample fy = draw_sample(fdist, 64, 617, static_cast<std::uint64_t>(trial));
        const auto s = rademacher_sup(*mat, fx, fy, Normalizer::entropy(haussler_envelope(1)),
                                      1.0, 3000, 404, 2);
        REQUIRE(s.frac_at_least(36.0) < 0.5);
    }
}

TEST_CASE("rademacher sup is sign-symmetric for swap-closed classes") {
    // members come in pairs (a, b) / (b, a) on a two-atom space, with x on one
    // atom and y on the other: negating the signs permutes the class
    FiniteSpace space({0.0, 1.0}, {0.5, 0.5});
    Rng rng(9001);
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < 6; ++k) {
        const double a = rng.next_unit(), b = rng.next_unit();
        rows.push_back({a, b});
        rows.push_back({b, a});
    }
    auto cls = std::make_shared<ExplicitMatrix>(space, rows);
    Sample x, y;
    x.points.assign(16, 0.0);
    y.points.assign(16, 1.0);
    const auto norm = Normalizer::constant_phi(1.0);
    const auto fwd = rademacher_sup(*cls, x, y, norm, 1.0, 500, 77);
    // flipped signs: replicate k of seed s yields eps; feeding swapped samples
    // realizes -eps up to the class permutation, so the sup is unchanged
    const auto swapped = rademacher_sup(*cls, y, x, norm, 1.0, 500, 77);
    REQUIRE(fwd.sups.size() == swapped.sups.size());
    for (std::size_t i = 0; i < fwd.sups.size(); ++i)
        REQUIRE(fwd.sups[i] == Catch::Approx(swapped.sups[i]).margin(1e-12));
}

TEST_CASE("h function facts") {
    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k) grid.push_back(k / 20.0);

    // Bernoulli(0.3): h(c) = 0.3 (1-c)^2
    const std::vector<std::pair<double, double>> bern = {{0.0, 0.7}, {1.0, 0.3}};
    const auto rb = h_check(bern, grid, 50, 25, 1234);
    CHECK(rb.pass);
    CHECK(rb.h0 == Catch::Approx(0.3).margin(1e-15));
    CHECK(rb.rows[10].h == Catch::Approx(0.075).margin(1e-15)); // c = 0.5
    CHECK(rb.h1 == 0.0);

    // degenerate law at zero
    const std::vector<std::pair<double, double>> zero = {{0.0, 1.0}};
    const auto rz = h_check(zero, grid, 10, 10, 1);
    CHECK(rz.pass);
    for (const auto& row : rz.rows) CHECK(row.h == 0.0);

    // random 10-atom laws: endpoints, monotonicity, convexity, averaged bound
    Rng rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<double, double>> law(10);
        double total = 0.0;
        for (auto& [t, q] : law) {
            t = rng.next_unit();
            q = 0.01 + rng.next_unit();
            total += q;
        }
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < law.size(); ++i) {
            law[i].second /= total;
            acc += law[i].second;
        }
        law.back().second = 1.0 - acc;
        const auto report = h_check(law, grid, 20, 30, 4321 + static_cast<std::uint64_t>(trial));
        REQUIRE(report.pass);
    }

    CHECK_THROWS_AS(h_check({{1.5, 1.0}}, grid, 1, 1, 1), DomainError);
    CHECK_THROWS_AS(h_check({{0.5, 0.7}}, grid, 1, 1, 1), DomainError);
}

TEST_CASE("median stability scan bands") {
    auto base = thresholds_experiment(0, 301, 42, Normalizer::entropy(haussler_envelope(1)));
    const auto scan = median_stability_scan(base, {50, 100, 200}, 2);
    REQUIRE(scan.rows.size() == 3);
    CHECK(scan.band_factor() < 1.5);
    for (const auto& row : scan.rows) CHECK(row.estimate.median > 0.0);

    // constant class: medians identically zero
    Experiment zc;
    zc.fclass = zero_class();
    zc.dist = Distribution(FiniteSpace({0.0, 1.0}, {0.5, 0.5}));
    zc.replicates = 51;
    zc.seed = 7;
    zc.normalizer = Normalizer::constant_phi(1.0);
    zc.resolution = 1.0;
    const auto zscan = median_stability_scan(zc, {10, 20}, 1);
    for (const auto& row : zscan.rows) CHECK(row.estimate.median == 0.0);
}

TEST_CASE("replicate streams are independent of evaluation order") {
    // drawing replicate 5 directly equals drawing it after replicate 4
    const auto dist = Distribution::uniform();
    const Sample direct = draw_sample(dist, 8, 99, 5);
    (void)draw_sample(dist, 8, 99, 4);
    const Sample again = draw_sample(dist, 8, 99, 5);
    CHECK(direct.points == again.points);
}
