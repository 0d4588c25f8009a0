#include "hyperscatter/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hyperscatter/errors.hpp"

namespace hyperscatter {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Pole-free residual g(lambda) = lambda*sin(theta) - w*cos(theta) with
// theta = pi*lambda/6 - pi*n/2 and w = cR/sqrt(2). On the bracket
// (3n, 3n+3), theta runs over (0, pi/2] and g is strictly increasing from
// -w to 3n+3, so the root is unique and Newton is safe after bisection.
struct Residual {
    double g, dg;
};

Residual residual(int n, double w, double lambda) {
    const double theta = kPi * lambda / 6.0 - kPi * n / 2.0;
    const double s = std::sin(theta);
    const double co = std::cos(theta);
    Residual r;
    r.g = lambda * s - w * co;
    r.dg = s + (kPi / 6.0) * (lambda * co + w * s);
    return r;
}

}  // namespace

ChannelEigenvalue solve_lambda(int n, double cR) {
    if (n < 0) throw std::invalid_argument("solve_lambda: channel index < 0");
    if (cR < 0.0) throw std::invalid_argument("solve_lambda: cR < 0");
    if (cR == 0.0) return {n, cR, 3.0 * n};

    const double w = cR / std::sqrt(2.0);
    double lo = 3.0 * n;
    double hi = 3.0 * n + 3.0;
    if (residual(n, w, lo).g >= 0.0 || residual(n, w, hi).g <= 0.0) {
        throw ConvergenceError(
            "solve_lambda: residual does not change sign over bracket [" +
            std::to_string(lo) + ", " + std::to_string(hi) + "] at cR = " +
            std::to_string(cR));
    }

    // Bisection down to an interval of 1e-8.
    while (hi - lo > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        if (residual(n, w, mid).g < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Newton polish; g is smooth and monotone here.
    double lambda = 0.5 * (lo + hi);
    for (int it = 0; it < 60; ++it) {
        const Residual r = residual(n, w, lambda);
        const double step = r.g / r.dg;
        lambda -= step;
        if (lambda <= lo - 1e-8 || lambda >= hi + 1e-8) {
            lambda = 0.5 * (lo + hi);  // fell out of the bracket; re-center
            continue;
        }
        if (std::abs(step) <= 1e-14 * std::max(1.0, lambda)) break;
    }
    return {n, cR, lambda};
}

namespace {

double reduce_principal(double alpha) {
    // Map to (-pi, pi].
    double a = std::remainder(alpha, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    return a;
}

}  // namespace

double chi_tilde(int n, double lambda, double alpha) {
    const double a = reduce_principal(alpha);
    if (std::abs(a) > kPi / 3.0) return 0.0;
    return std::cos(lambda * (kPi / 6.0 - std::abs(a)) - kPi * n / 2.0);
}

double chi_full(int n, double lambda, double alpha) {
    return chi_tilde(n, lambda, alpha) +
           chi_tilde(n, lambda, alpha - 2.0 * kPi / 3.0) +
           chi_tilde(n, lambda, alpha + 2.0 * kPi / 3.0);
}

double normalization_b(int n, double lambda) {
    if (lambda < 0.0) {
        throw std::invalid_argument("normalization_b: lambda < 0");
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double x = kPi * lambda / 3.0;
    if (lambda < 1e-4) {
        // sin(x)/(2*lambda) = (pi/6) * (1 - x^2/6 + x^4/120 - ...)
        const double x2 = x * x;
        return kPi / 6.0 +
               sign * (kPi / 6.0) * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
    }
    return kPi / 6.0 + sign * std::sin(x) / (2.0 * lambda);
}

double normalization_b_dlambda(int n, double lambda) {
    if (lambda < 0.0) {
        throw std::invalid_argument("normalization_b_dlambda: lambda < 0");
    }
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double x = kPi * lambda / 3.0;
    if (lambda < 1e-4) {
        // d/dlambda of (pi/6)(1 - x^2/6 + x^4/120) with dx/dlambda = pi/3.
        const double x2 = x * x;
        return sign * (kPi / 6.0) * (kPi / 3.0) * x *
               (-1.0 / 3.0 + x2 / 30.0);
    }
    return sign * ((kPi / 6.0) * std::cos(x) / lambda -
                   std::sin(x) / (2.0 * lambda * lambda));
}

AdiabaticChannel build_adiabatic_channel(int n, double c,
                                         const std::vector<double>& grid) {
    if (c < 0.0) {
        throw std::invalid_argument("build_adiabatic_channel: c < 0");
    }
    AdiabaticChannel ch;
    ch.n = n;
    ch.c = c;
    ch.grid = grid;
    ch.lambdas.reserve(grid.size());
    double prev = -1.0;
    for (double R : grid) {
        if (R <= prev) {
            throw std::invalid_argument(
                "build_adiabatic_channel: grid not strictly increasing");
        }
        prev = R;
        ch.lambdas.push_back(solve_lambda(n, c * R).lambda);
    }
    return ch;
}

}  // namespace hyperscatter
