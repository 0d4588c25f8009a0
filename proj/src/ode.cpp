#include "hyperscatter/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hyperscatter/errors.hpp"

namespace hyperscatter {

namespace {

struct State {
    double u, du;
};

struct Deriv {
    double du, ddu;
};

inline Deriv eval(const std::function<double(double)>& w, double r,
                  const State& y) {
    return {y.du, w(r) * y.u};
}

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0,
                 e4 = 71.0 / 1920.0, e5 = -17253.0 / 339200.0,
                 e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                 c5 = 8.0 / 9.0;

}  // namespace

OdeSolution integrate_linear_second_order(
    const std::function<double(double)>& w, double r0, double r1, double u0,
    double du0, const std::vector<double>& report_points,
    const OdeOptions& opt) {
    const double span = r1 - r0;
    if (span == 0.0) {
        throw ConvergenceError("ode: empty integration span");
    }
    const double dir = span > 0.0 ? 1.0 : -1.0;

    std::vector<double> stops(report_points);
    for (double rp : stops) {
        if ((rp - r0) * dir < 0.0 || (r1 - rp) * dir < 0.0) {
            throw ConvergenceError("ode: report point " + std::to_string(rp) +
                                   " outside integration span");
        }
    }
    stops.push_back(r1);
    std::sort(stops.begin(), stops.end());
    if (dir < 0.0) std::reverse(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

    OdeSolution out;
    out.samples.reserve(stops.size());

    double r = r0;
    State y{u0, du0};
    double log_scale = 0.0;
    std::size_t stop_idx = 0;

    // A report point at the start is sampled before stepping.
    if (stop_idx < stops.size() && stops[stop_idx] == r0) {
        out.samples.push_back({r0, y.u, y.du, log_scale});
        ++stop_idx;
    }

    const double span_mag = std::abs(span);
    const double max_step = opt.max_step > 0.0 ? opt.max_step : span_mag;
    double h = opt.initial_step > 0.0
                   ? opt.initial_step
                   : std::min(span_mag, 0.01 * std::abs(r0) + 1e-9 * span_mag);
    if (h <= 0.0) h = span_mag * 1e-9;
    h = std::min(h, max_step);

    Deriv k1 = eval(w, r, y);
    bool just_rejected = false;

    while (stop_idx < stops.size()) {
        if (out.steps_accepted + out.steps_rejected >= opt.max_steps) {
            throw ConvergenceError("ode: step budget exhausted at r = " +
                                   std::to_string(r));
        }
        const double target = stops[stop_idx];
        double h_try = std::min(h, max_step);
        bool hits_target = false;
        if (std::abs(target - r) <= h_try) {
            h_try = std::abs(target - r);
            hits_target = true;
        }
        const double hs = dir * h_try;  // signed step
        if (std::abs(hs) <= std::abs(r) * 1e-15) {
            throw ConvergenceError("ode: step size underflow at r = " +
                                   std::to_string(r));
        }

        const State y2{y.u + hs * a21 * k1.du, y.du + hs * a21 * k1.ddu};
        const Deriv k2 = eval(w, r + c2 * hs, y2);
        const State y3{y.u + hs * (a31 * k1.du + a32 * k2.du),
                       y.du + hs * (a31 * k1.ddu + a32 * k2.ddu)};
        const Deriv k3 = eval(w, r + c3 * hs, y3);
        const State y4{y.u + hs * (a41 * k1.du + a42 * k2.du + a43 * k3.du),
                       y.du + hs * (a41 * k1.ddu + a42 * k2.ddu + a43 * k3.ddu)};
        const Deriv k4 = eval(w, r + c4 * hs, y4);
        const State y5{
            y.u + hs * (a51 * k1.du + a52 * k2.du + a53 * k3.du + a54 * k4.du),
            y.du +
                hs * (a51 * k1.ddu + a52 * k2.ddu + a53 * k3.ddu + a54 * k4.ddu)};
        const Deriv k5 = eval(w, r + c5 * hs, y5);
        const State y6{y.u + hs * (a61 * k1.du + a62 * k2.du + a63 * k3.du +
                                   a64 * k4.du + a65 * k5.du),
                       y.du + hs * (a61 * k1.ddu + a62 * k2.ddu + a63 * k3.ddu +
                                    a64 * k4.ddu + a65 * k5.ddu)};
        const Deriv k6 = eval(w, r + hs, y6);
        const double r_new = hits_target ? target : r + hs;
        const State y_new{
            y.u + hs * (b1 * k1.du + b3 * k3.du + b4 * k4.du + b5 * k5.du +
                        b6 * k6.du),
            y.du + hs * (b1 * k1.ddu + b3 * k3.ddu + b4 * k4.ddu + b5 * k5.ddu +
                         b6 * k6.ddu)};
        const Deriv k7 = eval(w, r_new, y_new);

        const double err_u = hs * (e1 * k1.du + e3 * k3.du + e4 * k4.du +
                                   e5 * k5.du + e6 * k6.du + e7 * k7.du);
        const double err_du = hs * (e1 * k1.ddu + e3 * k3.ddu + e4 * k4.ddu +
                                    e5 * k5.ddu + e6 * k6.ddu + e7 * k7.ddu);

        // Step-local solution scale: |u| together with h*|du|, which stays
        // meaningful at zero crossings of oscillatory solutions and is
        // invariant under rescaling of r.
        const double scale =
            opt.abs_tol +
            opt.rel_tol * std::max({std::abs(y.u), std::abs(y_new.u),
                                    h_try * std::abs(y.du),
                                    h_try * std::abs(y_new.du)});
        double err;
        if (scale > 0.0) {
            err = std::max(std::abs(err_u), h_try * std::abs(err_du)) / scale *
                  opt.rel_tol;
        } else {
            err = 0.0;  // identically zero solution
        }
        // err is now measured against rel_tol: accept when err <= rel_tol.

        if (err <= opt.rel_tol || !std::isfinite(err)) {
            if (!std::isfinite(err) || !std::isfinite(y_new.u) ||
                !std::isfinite(y_new.du)) {
                throw ConvergenceError("ode: non-finite state at r = " +
                                       std::to_string(r_new));
            }
            ++out.steps_accepted;
            r = r_new;
            y = y_new;
            k1 = k7;

            const double mag = std::max(std::abs(y.u), std::abs(y.du));
            if (mag > opt.rescale_threshold ||
                (mag > 0.0 && mag < 1.0 / opt.rescale_threshold)) {
                y.u /= mag;
                y.du /= mag;
                log_scale += std::log(mag);
                // Linear equation: the cached derivative rescales with y.
                k1.du /= mag;
                k1.ddu /= mag;
            }

            if (hits_target) {
                out.samples.push_back({r, y.u, y.du, log_scale});
                ++stop_idx;
            }

            double fac = err > 0.0
                             ? 0.9 * std::pow(opt.rel_tol / err, 0.2)
                             : 5.0;
            fac = std::min(just_rejected ? 1.0 : 5.0, std::max(0.2, fac));
            h = std::min(max_step, h_try * fac);
            just_rejected = false;
        } else {
            ++out.steps_rejected;
            const double fac =
                std::max(0.1, 0.9 * std::pow(opt.rel_tol / err, 0.2));
            h = h_try * fac;
            just_rejected = true;
        }
    }

    out.log_scale_final = log_scale;
    return out;
}

}  // namespace hyperscatter
