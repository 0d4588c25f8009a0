#pragma once

#include <functional>

namespace hyperscatter {

struct QuadratureResult {
    double value;
    double error_estimate;
    int intervals;  // subintervals in the final partition
};

// Adaptive Gauss-Kronrod (G7,K15) integration of f over [a, b]. The worst
// subinterval (largest local error estimate) is bisected until the summed
// error estimate drops below max(abs_tol, rel_tol * |integral|). Throws
// ConvergenceError when the subinterval budget is exhausted.
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol = 1e-12,
                           double rel_tol = 1e-10, int max_intervals = 4000);

}  // namespace hyperscatter
