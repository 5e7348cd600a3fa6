#pragma once

#include <functional>

namespace hadlab {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0; ///< conservative bound on |value - exact|
    int evaluations = 0;
    bool converged = true;
};

/// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b].
/// Bisects until the summed error estimate meets
/// max(abs_tol, rel_tol * |integral|). Swapped limits negate the result.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-12,
                     int max_depth = 60);

} // namespace hadlab
