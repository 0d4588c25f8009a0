#include "hyperscatter/wkb.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include "hyperscatter/channels.hpp"
#include "hyperscatter/couplings.hpp"
#include "hyperscatter/errors.hpp"
#include "hyperscatter/ode.hpp"
#include "hyperscatter/quadrature.hpp"
#include "hyperscatter/specfun.hpp"

namespace hyperscatter {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kBeta1 = 3.0 * kSqrt2 / kPi;  // beta at c = 1

// I as a function of u = cR: substituting t = sqrt(R') turns the integrand
// lambda_0/R' into 2*lambda_0(t^2)/t, finite at t -> 0 where
// lambda_0 ~ sqrt(beta) t.
double exponent_of_u(double u) {
    if (u < 0.0) throw std::invalid_argument("wkb_exponent: cR < 0");
    if (u == 0.0) return 0.0;
    const double t_end = std::sqrt(u);
    auto f = [](double t) {
        if (t == 0.0) return 2.0 * std::sqrt(kBeta1);
        return 2.0 * solve_lambda(0, t * t).lambda / t;
    };
    return integrate(f, 0.0, t_end, 0.0, 1e-10, 20000).value;
}

}  // namespace

double wkb_exponent(double c, double R) {
    if (c < 0.0 || R < 0.0) {
        throw std::invalid_argument("wkb_exponent: negative argument");
    }
    return exponent_of_u(c * R);
}

XiResult xi_constant() {
    static std::once_flag flag;
    static XiResult cached;
    std::call_once(flag, []() {
        const double a1 = 18.0 * kSqrt2 / kPi;  // lambda_0 tail coefficient
        const double us[3] = {1e3, 1e4, 1e5};
        XiResult res;
        double corrected[3];
        for (int i = 0; i < 3; ++i) {
            const double raw = exponent_of_u(us[i]) - 3.0 * std::log(us[i]);
            corrected[i] = raw - a1 / us[i];
            res.table.push_back({us[i], raw, corrected[i]});
        }
        // After removing the 1/u tail the residual is O(1/u^2); one
        // Richardson step on the two largest radii eliminates it.
        const double x2 = 1.0 / (us[1] * us[1]);
        const double x3 = 1.0 / (us[2] * us[2]);
        const double limit =
            (corrected[2] * x2 - corrected[1] * x3) / (x2 - x3);
        res.extrapolation_residual = std::abs(limit - corrected[2]);
        if (res.extrapolation_residual > 1e-6 ||
            std::abs(corrected[2] - corrected[1]) > 1e-4) {
            throw ConvergenceError("xi_constant: extrapolation not settled");
        }
        res.xi = std::exp(limit);
        res.omega = 384.0 * (res.xi / kPi) * (res.xi / kPi);
        cached = res;
    });
    return cached;
}

double xi_connection_constant() {
    static std::once_flag flag;
    static double cached = 0.0;
    std::call_once(flag, []() {
        // Integrate u'' = ((lambda_0^2 - 1/4)/x^2) u (k = 0, units c = 1)
        // outward from the modified-Bessel seed, then split F = u/sqrt(x)
        // into growing and decaying parts via F and F'.
        auto w = [](double x) {
            const double l = solve_lambda(0, x).lambda;
            return (l * l - 0.25) / (x * x);
        };
        const double x0 = 1e-10;
        const double z0 = 2.0 * std::sqrt(kBeta1 * x0);
        const double u0 = std::sqrt(x0) * bessel_i0(z0);
        const double du0 = bessel_i0(z0) / (2.0 * std::sqrt(x0)) +
                           std::sqrt(kBeta1) * bessel_i1(z0);
        const double xs[2] = {1e3, 1e4};
        double xi_at[2];
        for (int i = 0; i < 2; ++i) {
            const double xe = xs[i];
            OdeOptions opt;
            opt.rel_tol = 1e-12;
            const OdeSolution sol =
                integrate_linear_second_order(w, x0, xe, u0, du0, {}, opt);
            const OdeSample& s = sol.samples.back();
            const double rescale = std::exp(s.log_scale);
            const double F = rescale * s.u / std::sqrt(xe);
            const double dF = rescale * (s.du / std::sqrt(xe) -
                                         s.u / (2.0 * std::pow(xe, 1.5)));
            // F = A x^3 + B x^{-3}: eliminating B gives
            // 3F/x + F' = 6 A x^2.
            const double A = (3.0 * F / xe + dF) / (6.0 * xe * xe);
            xi_at[i] = A * std::sqrt(12.0 * kPi);
        }
        // O(1/x) convergence: linear Richardson step.
        cached = (xs[1] * xi_at[1] - xs[0] * xi_at[0]) / (xs[1] - xs[0]);
    });
    return cached;
}

QcSolution qc_solution(int sign, double c, double R) {
    if (R <= 0.0 || c <= 0.0) {
        throw std::invalid_argument("qc_solution: requires c > 0, R > 0");
    }
    const double lambda = solve_lambda(0, c * R).lambda;
    const double d1 = dlambda_dr(0, c, R);
    const double expnt = exponent_of_u(c * R);
    const double C = sign > 0 ? 1.0 / (2.0 * std::sqrt(kPi))
                              : std::sqrt(kPi) / 2.0;
    QcSolution out;
    out.value = C / std::sqrt(lambda) *
                std::exp(sign > 0 ? expnt : -expnt);
    out.validity = std::abs((lambda - R * d1) / (lambda * lambda));
    out.valid = out.validity <= 1.0;
    return out;
}

WkbProfile wkb_profile(double c, const std::vector<double>& grid) {
    WkbProfile p;
    p.c = c;
    p.grid = grid;
    p.exponent.reserve(grid.size());
    for (double R : grid) p.exponent.push_back(wkb_exponent(c, R));
    p.C_plus = 1.0 / (2.0 * std::sqrt(kPi));
    p.C_minus = std::sqrt(kPi) / 2.0;
    return p;
}

}  // namespace hyperscatter
