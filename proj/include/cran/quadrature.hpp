#pragma once

// Thin adaptive-quadrature wrapper (Gauss-Kronrod 15-point, depth-adaptive)
// used by the analytic layer and by the dual-route oracle tests.

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace cran::quadrature {

struct QuadResult {
    double value = 0.0;
    double est_abs_error = 0.0;
};

// Integrate f over [a, b] to the requested relative tolerance.
template <typename F>
QuadResult integrate(F&& f, double a, double b, double rel_tol = 1e-11,
                     int max_depth = 15) {
    double err = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, max_depth, rel_tol, &err);
    return {v, err};
}

}  // namespace cran::quadrature
