#pragma once

// Independent reference implementations used to validate the library.
// Everything here is deliberately built on different algorithms than the
// code under test: Simpson sums of integral representations for the
// cylinder functions, pure long-double bisection for the channel
// eigenvalue, Richardson-extrapolated central differences for derivatives.
// Accuracy targets are modest (1e-9 .. 1e-12) but fully decoupled from the
// production code paths.

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracles {

inline constexpr double kPi = 3.14159265358979323846;

// Composite Simpson rule, n panels (forced even).
template <typename F>
double simpson(F f, double a, double b, int n) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt
inline double bessel_j(int n, double x) {
    return simpson(
               [=](double t) { return std::cos(n * t - x * std::sin(t)); },
               0.0, kPi, 6000) /
           kPi;
}

// Y_n(x) = (1/pi) int_0^pi sin(x sin t - n t) dt
//          - (1/pi) int_0^inf [e^{nt} + (-1)^n e^{-nt}] e^{-x sinh t} dt
inline double bessel_y(int n, double x) {
    if (x <= 0.0) throw std::invalid_argument("oracle bessel_y: x <= 0");
    const double osc =
        simpson([=](double t) { return std::sin(x * std::sin(t) - n * t); },
                0.0, kPi, 6000) /
        kPi;
    const double t_max = std::asinh(760.0 / x);
    const double damp =
        simpson(
            [=](double t) {
                const double mix =
                    std::exp(n * t) + (n % 2 ? -1.0 : 1.0) * std::exp(-n * t);
                return mix * std::exp(-x * std::sinh(t));
            },
            0.0, t_max, 8000) /
        kPi;
    return osc - damp;
}

// I_0, I_1 via (1/pi) int_0^pi e^{x cos t} {1, cos t} dt
inline double bessel_i0(double x) {
    return simpson([=](double t) { return std::exp(x * std::cos(t)); }, 0.0,
                   kPi, 4000) /
           kPi;
}

inline double bessel_i1(double x) {
    return simpson(
               [=](double t) { return std::exp(x * std::cos(t)) * std::cos(t); },
               0.0, kPi, 4000) /
           kPi;
}

// K_0, K_1 via int_0^inf e^{-x cosh t} {1, cosh t} dt
inline double bessel_k0(double x) {
    if (x <= 0.0) throw std::invalid_argument("oracle bessel_k0: x <= 0");
    const double t_max = std::acosh(760.0 / x);
    return simpson(
        [=](double t) { return std::exp(-x * std::cosh(t)); }, 0.0, t_max,
        8000);
}

inline double bessel_k1(double x) {
    if (x <= 0.0) throw std::invalid_argument("oracle bessel_k1: x <= 0");
    const double t_max = std::acosh(760.0 / x);
    return simpson(
        [=](double t) { return std::exp(-x * std::cosh(t)) * std::cosh(t); },
        0.0, t_max, 8000);
}

// Root of lambda * tan(pi*lambda/6 - pi*n/2) = w on (3n, 3n+3), by pure
// bisection in long double on the transcendental form itself (the library
// uses a pole-free rearrangement plus Newton polish; this shares nothing
// with it beyond the equation).
inline double lambda_root(int n, double w) {
    if (w < 0.0) throw std::invalid_argument("oracle lambda_root: w < 0");
    if (w == 0.0) return 3.0 * n;
    long double lo = 3.0L * n, hi = 3.0L * n + 3.0L;
    auto h = [n, w](long double lam) -> long double {
        const long double theta = kPi * lam / 6.0L - kPi * n / 2.0L;
        return lam * std::tan(theta) - (long double)w;
    };
    // Nudge off the endpoints where tan is 0 / singular.
    lo += 1e-18L;
    hi -= 1e-18L;
    for (int it = 0; it < 300; ++it) {
        const long double mid = 0.5L * (lo + hi);
        if (h(mid) < 0.0L)
            lo = mid;
        else
            hi = mid;
    }
    return (double)(0.5L * (lo + hi));
}

// Richardson-extrapolated central first derivative.
inline double derivative(const std::function<double(double)>& f, double x,
                         double h) {
    auto d = [&](double step) { return (f(x + step) - f(x - step)) / (2.0 * step); };
    const double d1 = d(h), d2 = d(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

// Second derivative by the same scheme.
inline double second_derivative(const std::function<double(double)>& f,
                                double x, double h) {
    auto d = [&](double step) {
        return (f(x + step) - 2.0 * f(x) + f(x - step)) / (step * step);
    };
    const double d1 = d(h), d2 = d(h / 2.0);
    return (4.0 * d2 - d1) / 3.0;
}

// Trapezoid rule with n panels (for brute-force normalization checks).
template <typename F>
double trapezoid(F f, double a, double b, int n) {
    const double h = (b - a) / n;
    double s = 0.5 * (f(a) + f(b));
    for (int i = 1; i < n; ++i) s += f(a + i * h);
    return s * h;
}

}  // namespace oracles
