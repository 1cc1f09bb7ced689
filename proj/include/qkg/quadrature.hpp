#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "qkg/errors.hpp"

namespace qkg::num {

struct QuadratureOptions {
    double abs_tol = 1e-8;
    int max_depth = 48;
    // Intervals narrower than this fraction of the original span are accepted
    // once their residual fits the overall budget; keeps endpoint
    // discontinuities (measure zero) from exhausting the depth budget.
    double min_interval_fraction = 1e-12;
};

struct QuadratureOutcome {
    double value = 0.0;
    double error_estimate = 0.0;
    long evaluations = 0;
    int deepest_level = 0;
};

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
QuadratureOutcome adaptive(F& f, double a, double fa, double b, double fb, double m, double fm,
                           double whole, double tol, int depth, double min_width,
                           const QuadratureOptions& opt) {
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = f(lm);
    double frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    double delta = left + right - whole;
    bool sliver = (b - a) <= min_width && std::abs(delta) <= 15.0 * opt.abs_tol;
    if (std::abs(delta) <= 15.0 * tol || sliver) {
        QuadratureOutcome out;
        out.value = left + right + delta / 15.0;  // Richardson correction
        out.error_estimate = std::abs(delta) / 15.0;
        out.evaluations = 2;
        out.deepest_level = depth;
        return out;
    }
    if (depth >= opt.max_depth)
        throw NumericalError("adaptive quadrature failed to converge on [" + std::to_string(a) +
                             ", " + std::to_string(b) + "] at depth " + std::to_string(depth) +
                             " (residual " + std::to_string(std::abs(delta)) + ")");
    QuadratureOutcome l =
        adaptive(f, a, fa, m, fm, lm, flm, left, tol / 2, depth + 1, min_width, opt);
    QuadratureOutcome r =
        adaptive(f, m, fm, b, fb, rm, frm, right, tol / 2, depth + 1, min_width, opt);
    QuadratureOutcome out;
    out.value = l.value + r.value;
    out.error_estimate = l.error_estimate + r.error_estimate;
    out.evaluations = 2 + l.evaluations + r.evaluations;
    out.deepest_level = std::max(l.deepest_level, r.deepest_level);
    return out;
}

}  // namespace detail

// Adaptive Simpson integration of f over [a, b] to an absolute tolerance.
// Throws NumericalError when the depth budget runs out before the tolerance
// is met. Integrands with known interior discontinuities should be integrated
// piecewise between them.
template <class F>
QuadratureOutcome integrate_adaptive(F f, double a, double b, QuadratureOptions opt = {}) {
    if (!(a <= b)) throw DomainError("integration bounds out of order");
    if (a == b) return {};
    double m = 0.5 * (a + b);
    double fa = f(a);
    double fb = f(b);
    double fm = f(m);
    double whole = detail::simpson(a, fa, b, fb, fm);
    double min_width = (b - a) * opt.min_interval_fraction;
    QuadratureOutcome out =
        detail::adaptive(f, a, fa, b, fb, m, fm, whole, opt.abs_tol, 0, min_width, opt);
    out.evaluations += 3;
    return out;
}

}  // namespace qkg::num
