#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "epb/kernel.hpp"
#include "epb/rng.hpp"

using namespace epb;

namespace {
FiniteSpace two_atoms_uniform() { return FiniteSpace({0.0, 1.0}, {0.5, 0.5}); }
FiniteSpace two_atoms_skewed() { return FiniteSpace({0.0, 1.0}, {0.25, 0.75}); }
FiniteSpace three_atoms() { return FiniteSpace({0.0, 0.5, 1.0}, {0.25, 0.25, 0.5}); }

KernelMeasure random_measure(std::size_t size, Rng& rng) {
    KernelMeasure nu;
    nu.weights.resize(size);
    double total = 0.0;
    for (auto& w : nu.weights) {
        w = -std::log(1.0 - rng.next_unit());
        total += w;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < size; ++i) {
        nu.weights[i] /= total;
        acc += nu.weights[i];
    }
    nu.weights.back() = 1.0 - acc;
    return nu;
}
} // namespace

TEST_CASE("psi values and shape") {
    const PsiParams one{1.0};
    CHECK(psi(one, 0.0) == 0.0);
    CHECK(psi(one, 2.0) == 1.0); // both branches meet at the knee
    CHECK(psi(one, 1.0) == Catch::Approx(0.25));
    CHECK(psi(one, 3.0) == Catch::Approx(2.0));
    CHECK_THROWS_AS(psi(one, -0.1), DomainError);
    CHECK_THROWS_AS(psi(PsiParams{0.0}, 1.0), DomainError);

    for (double alpha : {0.5, 1.0, 2.0}) {
        const PsiParams params{alpha};
        // continuity at the knee
        CHECK(psi(params, 2.0 * alpha) == Catch::Approx(alpha).epsilon(1e-12));
        double prev = -1.0, prev_slope = -1.0;
        for (int k = 0; k <= 400; ++k) {
            const double v = k * 0.02;
            const double val = psi(params, v);
            CHECK(val <= std::max(v * v / (4.0 * alpha), v) + 1e-12);
            if (k > 0) {
                const double slope = (val - prev) / 0.02;
                REQUIRE(val >= prev - 1e-12);          // nondecreasing
                REQUIRE(slope >= prev_slope - 1e-12);  // convex
                prev_slope = slope;
            }
            prev = val;
        }
    }
}

TEST_CASE("kernel constant root") {
    const double l1 = solve_l(1.0);
    CHECK(l1 >= 1.1170);
    CHECK(l1 <= 1.1180);
    CHECK(std::fabs(l_constraint_lhs(l1) - 1.0) <= 1e-9);
    // bracketing evaluations around the root
    CHECK(l_constraint_lhs(1.10) == Catch::Approx(1.019).margin(5e-4));
    CHECK(l_constraint_lhs(1.12) == Catch::Approx(0.997).margin(5e-4));
    for (double alpha : {0.5, 2.0}) {
        const double l = solve_l(alpha);
        CHECK(std::fabs(l_constraint_lhs(l) - alpha) <= 1e-9);
    }
    CHECK_THROWS_AS(solve_l(0.0), DomainError);
}

TEST_CASE("inequality uv <= u^2 1(u>0) + psi_1(v)") {
    const PsiParams one{1.0};
    auto holds = [&](double u, double v) {
        return u * v <= (u > 0.0 ? u * u : 0.0) + psi(one, v) + 1e-12;
    };
    Rng rng(606);
    for (int i = 0; i < 100000; ++i) {
        const double u = 2.0 * rng.next_unit() - 1.0;
        const double v = 8.0 * rng.next_unit();
        REQUIRE(holds(u, v));
    }
    // boundary grid including the equality manifolds u = v/2 and u = 1
    for (int iu = -10; iu <= 10; ++iu)
        for (int iv = 0; iv <= 40; ++iv) {
            const double u = iu / 10.0;
            const double v = iv / 10.0;
            REQUIRE(holds(u, v));
            REQUIRE(holds(v / 2.0 <= 1.0 ? v / 2.0 : 1.0, v));
        }
}

TEST_CASE("radon-nikodym densities") {
    // point mass at x has zero density at every coordinate
    FiniteSpace sp = three_atoms();
    const int n = 2;
    std::vector<PointCode> all;
    for (PointCode p = 0; p < 9; ++p) all.push_back(p);
    KernelProblem prob(sp, n, 1.0, all, encode_point({1, 2}, 3));
    const std::size_t x_pos = 1 + 2 * 3; // weights aligned with sorted event codes
    const auto nu_x = KernelMeasure::point_mass(all.size(), x_pos);
    for (int i = 0; i < n; ++i)
        for (double d : radon_nikodym(prob, nu_x, i)) CHECK(d == 0.0);

    // two-atom example: nu = delta_a, x = b gives d_1(a) = 2
    FiniteSpace two = two_atoms_uniform();
    KernelProblem prob2(two, 1, 1.0, {0}, 1);
    const auto d = radon_nikodym(prob2, KernelMeasure::point_mass(1, 0), 0);
    CHECK(d[0] == Catch::Approx(2.0));
    CHECK(d[1] == 0.0);

    // defining identity: int over {y_i != x_i} of g(y_i) dnu = int g d_i dP
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        auto nu = random_measure(all.size(), rng);
        for (int i = 0; i < n; ++i) {
            const auto dens = radon_nikodym(prob, nu, i);
            for (std::size_t om = 0; om < sp.size(); ++om) {
                // g = indicator of atom om
                double lhs = 0.0;
                for (std::size_t k = 0; k < all.size(); ++k) {
                    const auto coords = decode_point(all[k], n, 3);
                    const auto xc = decode_point(prob.x, n, 3);
                    if (coords[static_cast<std::size_t>(i)] == static_cast<int>(om) &&
                        coords[static_cast<std::size_t>(i)] != xc[static_cast<std::size_t>(i)])
                        lhs += nu.weights[k];
                }
                const double rhs = dens[om] * sp.prob(om);
                REQUIRE(std::fabs(lhs - rhs) <= 1e-12);
            }
        }
    }
}

TEST_CASE("cost of a measure") {
    FiniteSpace two = two_atoms_uniform();
    // nu = delta_x costs nothing
    KernelProblem self(two, 1, 1.0, {1}, 1);
    CHECK(cost_measure(self, KernelMeasure::point_mass(1, 0)) == 0.0);

    // forced transport: m_1 = psi_1(2)/2 = 0.5
    KernelProblem forced(two, 1, 1.0, {0}, 1);
    CHECK(cost_measure(forced, KernelMeasure::point_mass(1, 0)) == Catch::Approx(0.5));

    // relabeling atoms with equal probabilities leaves the cost unchanged
    std::vector<PointCode> a_pts = {encode_point({0, 0}, 2), encode_point({1, 0}, 2)};
    KernelProblem p1(two, 2, 1.0, a_pts, encode_point({1, 1}, 2));
    std::vector<PointCode> a_swapped = {encode_point({1, 1}, 2), encode_point({0, 1}, 2)};
    KernelProblem p2(two, 2, 1.0, a_swapped, encode_point({0, 0}, 2));
    KernelMeasure nu;
    nu.weights = {0.3, 0.7}; // events are stored sorted by code: (0,0), (1,0)
    KernelMeasure nu_swapped;
    nu_swapped.weights = {0.7, 0.3}; // sorted codes (0,1), (1,1) reverse the images
    CHECK(cost_measure(p1, nu) == Catch::Approx(cost_measure(p2, nu_swapped)).epsilon(1e-12));
    // direct value: masses 0.3 and 1.0 on the low atom across the two coordinates
    CHECK(cost_measure(p1, nu) ==
          Catch::Approx(0.5 * psi(PsiParams{1.0}, 0.6) + 0.5 * psi(PsiParams{1.0}, 2.0))
              .epsilon(1e-12));

    KernelMeasure bad;
    bad.weights = {0.5, 0.6};
    CHECK_THROWS_AS(cost_measure(p1, bad), DomainError);
}

TEST_CASE("cost_set basics") {
    FiniteSpace two = two_atoms_uniform();
    // x in A: zero cost certified by the point mass at x
    std::vector<PointCode> a = {0, 1};
    KernelProblem inprob(two, 1, 1.0, a, 1);
    const auto rin = cost_set(inprob);
    CHECK(rin.value == 0.0);
    CHECK(rin.nu.weights[1] == 1.0);

    // single feasible measure
    KernelProblem forced(two, 1, 1.0, {0}, 1);
    const auto rf = cost_set(forced);
    CHECK(rf.value == Catch::Approx(0.5).margin(1e-9));

    // optimum never exceeds the uniform-measure cost; zero cost iff x in A
    Rng rng(272);
    FiniteSpace sp = three_atoms();
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_below(2));
        const int total = n == 1 ? 3 : 9;
        std::vector<PointCode> ev;
        for (PointCode p = 0; p < static_cast<PointCode>(total); ++p)
            if (rng.next_sign()) ev.push_back(p);
        if (ev.empty()) ev.push_back(static_cast<PointCode>(rng.next_below(total)));
        const PointCode x = static_cast<PointCode>(rng.next_below(total));
        KernelProblem prob(sp, n, 0.5 + rng.next_unit(), ev, x);
        const auto best = cost_set(prob);
        const double uniform_cost = cost_measure(prob, KernelMeasure::uniform(ev.size()));
        REQUIRE(best.value <= uniform_cost + 1e-9);
        REQUIRE(best.gap <= 1e-6);
        if (prob.x_in_event())
            REQUIRE(best.value == 0.0);
        else
            REQUIRE(best.value > 0.0);
    }
}

TEST_CASE("cost_set is monotone under event enlargement") {
    FiniteSpace sp = two_atoms_skewed();
    Rng rng(37);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2;
        std::vector<PointCode> small, big;
        for (PointCode p = 0; p < 4; ++p) {
            const bool in_small = rng.next_sign();
            if (in_small) small.push_back(p);
            if (in_small || rng.next_sign()) big.push_back(p);
        }
        if (small.empty()) small.push_back(0);
        if (big.empty()) big = small;
        const PointCode x = static_cast<PointCode>(rng.next_below(4));
        KernelProblem ps(sp, n, 1.0, small, x);
        KernelProblem pb(sp, n, 1.0, big, x);
        CHECK(cost_set(pb).value <= cost_set(ps).value + 1e-8);
    }
}

TEST_CASE("conditional gradient matches the grid oracle") {
    Rng rng(888);
    int cases = 0;
    for (int m = 2; m <= 3; ++m) {
        std::vector<double> probs = m == 2 ? std::vector<double>{0.25, 0.75}
                                           : std::vector<double>{0.2, 0.3, 0.5};
        std::vector<double> atoms;
        for (int i = 0; i < m; ++i) atoms.push_back(static_cast<double>(i));
        FiniteSpace sp(atoms, probs);
        for (int n = 1; n <= 2; ++n) {
            const int total = static_cast<int>(std::pow(m, n));
            for (int trial = 0; trial < 8; ++trial) {
                std::vector<PointCode> ev;
                for (PointCode p = 0; p < static_cast<PointCode>(total); ++p)
                    if (rng.next_sign()) ev.push_back(p);
                if (ev.empty() || ev.size() > 4) continue;
                PointCode x = static_cast<PointCode>(rng.next_below(total));
                for (double alpha : {0.5, 1.0}) {
                    KernelProblem prob(sp, n, alpha, ev, x);
                    const double fw = cost_set(prob, 1e-8).value;
                    const double oracle = brute_cost_oracle(prob);
                    REQUIRE(std::fabs(fw - oracle) <= 1e-5);
                    ++cases;
                }
            }
        }
    }
    REQUIRE(cases >= 20);
}

TEST_CASE("kernel integrability verification on small product spaces") {
    // full event: zero cost everywhere, product exactly 1
    FiniteSpace two = two_atoms_uniform();
    const auto report = verify_kernel_integrability(two, 1, 1.0);
    REQUIRE(report.rows.size() == 3);
    for (const auto& row : report.rows) {
        if (row.event_id == 0b11ULL) {
            CHECK(row.integral == Catch::Approx(1.0).margin(1e-12));
            CHECK(row.product == Catch::Approx(1.0).margin(1e-12));
        }
        if (row.event_id == 0b01ULL) {
            // A = {first atom}: integral = 1/2 + e^{0.5/L}/2
            const double expect = 0.5 + 0.5 * std::exp(0.5 / report.L);
            CHECK(row.integral == Catch::Approx(expect).margin(1e-6));
            CHECK(row.integral == Catch::Approx(1.2822).margin(2e-4));
            CHECK(row.product == Catch::Approx(0.6411).margin(2e-4));
        }
        REQUIRE(row.pass);
    }
    CHECK(report.pass);
    CHECK(report.exhaustive);

    // exhaustive sweeps stay under 1 + 1e-6 (acceptance covers n = 3)
    for (const auto& sp : {two_atoms_uniform(), two_atoms_skewed()})
        for (int n : {1, 2})
            for (double alpha : {0.5, 1.0, 2.0}) {
                const auto rep = verify_kernel_integrability(sp, n, alpha);
                REQUIRE(rep.pass);
                REQUIRE(rep.max_product <= 1.0 + 1e-6);
            }
}

TEST_CASE("sampled events beyond the exhaustive cap") {
    // m = 2, n = 5: 32 points, too many for full event enumeration
    FiniteSpace two = two_atoms_uniform();
    KernelCheckOptions opt;
    opt.sampled_events = 16;
    opt.threads = 2;
    CHECK_THROWS_AS(verify_kernel_integrability(two, 5, 1.0, opt), ConfigError); // seed required
    opt.seed = 91;
    opt.has_seed = true;
    const auto report = verify_kernel_integrability(two, 5, 1.0, opt);
    CHECK_FALSE(report.exhaustive);
    // singletons (32) + coordinate cylinders (10) + full space (1) + samples (16)
    CHECK(report.rows.size() == 32 + 10 + 1 + 16);
    CHECK(report.pass);
    CHECK(report.max_product <= 1.0 + 1e-6);
}

TEST_CASE("kernel guards") {
    FiniteSpace two = two_atoms_uniform();
    CHECK_THROWS_AS(KernelProblem(two, 30, 1.0, {0}, 1), CapacityError);
    CHECK_THROWS_AS(KernelProblem(two, 1, 1.0, {}, 1), DomainError);
    CHECK_THROWS_AS(KernelProblem(two, 1, 1.0, {5}, 1), DomainError);
    CHECK_THROWS_AS(verify_kernel_integrability(two, 30, 1.0), CapacityError);
    KernelProblem big(FiniteSpace({0.0, 1.0, 2.0}, {0.25, 0.25, 0.5}), 2, 1.0,
                      {0, 1, 2, 3, 4, 5, 6}, 8);
    CHECK_THROWS_AS(brute_cost_oracle(big), CapacityError);
}
