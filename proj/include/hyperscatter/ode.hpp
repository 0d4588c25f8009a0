#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hyperscatter {

struct OdeOptions {
    double rel_tol = 1e-11;
    // Absolute floor added to the step-local solution scale; the error norm
    // already mixes u and h*du, so 0 is safe for non-trivial solutions.
    double abs_tol = 0.0;
    double initial_step = 0.0;  // magnitude; 0 selects one automatically
    double max_step = 0.0;      // magnitude; 0 means the full span
    std::size_t max_steps = 20000000;
    // Renormalization threshold: when max(|u|, |du|) grows past this (or
    // shrinks below its inverse) the state is rescaled and the factor is
    // accumulated in log_scale, so solutions spanning thousands of e-folds
    // never overflow.
    double rescale_threshold = 1e120;
};

struct OdeSample {
    double r;
    double u;   // stored value; the true solution is u * exp(log_scale)
    double du;
    double log_scale;
};

struct OdeSolution {
    std::vector<OdeSample> samples;  // one per report point, in sweep order
    double log_scale_final = 0.0;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
};

// Adaptive Dormand-Prince 5(4) integration of the linear second-order
// equation u''(r) = w(r) * u(r) from r0 to r1 (either direction). The state
// is sampled exactly at the requested report points, which must lie within
// the integration span; r1 is always sampled as the final entry. Throws
// ConvergenceError on step-size underflow or step-budget exhaustion.
OdeSolution integrate_linear_second_order(
    const std::function<double(double)>& w, double r0, double r1, double u0,
    double du0, const std::vector<double>& report_points,
    const OdeOptions& options = {});

}  // namespace hyperscatter
