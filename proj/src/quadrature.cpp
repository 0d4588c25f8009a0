#include "hyperscatter/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hyperscatter/errors.hpp"

namespace hyperscatter {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
// Gauss nodes are xgk[1], xgk[3], xgk[5] (plus the center).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277,
                           0.381830050505119, 0.417959183673469};

struct Panel {
    double a, b;
    double value;
    double error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a,
                     double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = f(center - dx) + f(center + dx);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * fsum;
    }
    Panel p;
    p.a = a;
    p.b = b;
    p.value = resk * half;
    p.error = std::abs((resk - resg) * half);
    return p;
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, double abs_tol, double rel_tol,
                           int max_intervals) {
    if (a == b) return {0.0, 0.0, 0};
    double sign = 1.0;
    if (a > b) {
        std::swap(a, b);
        sign = -1.0;
    }

    std::vector<Panel> panels;
    panels.reserve(64);
    panels.push_back(evaluate_panel(f, a, b));

    auto totals = [&panels]() {
        double v = 0.0, e = 0.0;
        for (const Panel& p : panels) {
            v += p.value;
            e += p.error;
        }
        return std::pair<double, double>(v, e);
    };

    for (;;) {
        auto [value, error] = totals();
        if (!std::isfinite(value)) {
            throw ConvergenceError("quadrature: non-finite integrand value");
        }
        const double tol = std::max(abs_tol, rel_tol * std::abs(value));
        if (error <= tol) {
            return {sign * value, error, static_cast<int>(panels.size())};
        }
        if (static_cast<int>(panels.size()) >= max_intervals) {
            throw ConvergenceError(
                "quadrature: error " + std::to_string(error) +
                " above tolerance " + std::to_string(tol) + " after " +
                std::to_string(panels.size()) + " subintervals");
        }
        auto worst = std::max_element(
            panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.error < y.error; });
        const double mid = 0.5 * (worst->a + worst->b);
        if (mid <= worst->a || mid >= worst->b) {
            throw ConvergenceError(
                "quadrature: interval underflow near x = " +
                std::to_string(mid));
        }
        const Panel right = evaluate_panel(f, mid, worst->b);
        *worst = evaluate_panel(f, worst->a, mid);
        panels.push_back(right);
    }
}

}  // namespace hyperscatter
