#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "epb/errors.hpp"

namespace epb {

// Gauss 7 / Kronrod 15 pair on [a, b]; returns (K15 value, |K15-G7| estimate).
template <class F>
std::pair<double, double> gk15(F&& f, double a, double b) {
    // abscissa, Gauss weight, Kronrod weight
    static const double nw[8][3] = {
        {0.000000000000000, 0.417959183673469, 0.209482141084728},
        {0.405845151377397, 0.381830050505119, 0.190350578064785},
        {0.741531185599394, 0.279705391489277, 0.140653259715525},
        {0.949107912342759, 0.129484966168870, 0.063092092629979},
        {0.207784955007898, 0.0, 0.204432940075298},
        {0.586087235467691, 0.0, 0.169004726639267},
        {0.864864423359769, 0.0, 0.104790010322250},
        {0.991455371120813, 0.0, 0.022935322010529}};
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double y0 = f(mid);
    double g7 = nw[0][1] * y0;
    double k15 = nw[0][2] * y0;
    for (int i = 1; i < 8; ++i) {
        const double dx = half * nw[i][0];
        const double yi = f(mid + dx) + f(mid - dx);
        g7 += nw[i][1] * yi;
        k15 += nw[i][2] * yi;
    }
    g7 *= half;
    k15 *= half;
    return {k15, std::fabs(k15 - g7)};
}

// Adaptive bisection on a worklist; tolerances are split across subintervals.
template <class F>
double integrate_adaptive(F&& f, double a, double b, double rel_tol = 1e-10,
                          double abs_tol = 1e-300, int max_intervals = 20000) {
    if (!(b > a)) return 0.0;
    struct Seg {
        double a, b, value, err;
    };
    auto eval = [&](double lo, double hi) {
        auto [v, e] = gk15(f, lo, hi);
        if (!std::isfinite(v))
            throw IntegrationError("nonfinite integrand value in quadrature");
        return Seg{lo, hi, v, e};
    };
    std::vector<Seg> segs{eval(a, b)};
    int iterations = 0;
    while (true) {
        double total = 0.0, err = 0.0;
        for (const auto& s : segs) {
            total += s.value;
            err += s.err;
        }
        if (err <= rel_tol * std::fabs(total) + abs_tol) return total;
        if (++iterations > max_intervals || static_cast<int>(segs.size()) > max_intervals)
            throw IntegrationError("adaptive quadrature did not reach tolerance");
        // split the worst segment
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].err > segs[worst].err) worst = i;
        Seg s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        segs[worst] = eval(s.a, mid);
        segs.push_back(eval(mid, s.b));
    }
}

// Integral over (0, b] of an integrand with an integrable endpoint
// singularity at 0: dyadic bands [b 2^{-k-1}, b 2^{-k}] keep each piece mild.
template <class F>
double integrate_graded_to_zero(F&& f, double b, double rel_tol = 1e-10) {
    if (!(b > 0)) return 0.0;
    double total = 0.0;
    double hi = b;
    for (int k = 0; k < 72; ++k) { // 2^-72 b: below double noise for our integrands
        const double lo = 0.5 * hi;
        total += integrate_adaptive(f, lo, hi, rel_tol * 0.25, 1e-300);
        hi = lo;
        if (hi < 1e-18 * b) break;
    }
    return total;
}

} // namespace epb
