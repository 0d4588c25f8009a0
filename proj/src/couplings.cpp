#include "hyperscatter/couplings.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "hyperscatter/channels.hpp"
#include "hyperscatter/errors.hpp"
#include "hyperscatter/quadrature.hpp"

namespace hyperscatter {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

struct LambdaDerivatives {
    double lambda, d1, d2;
};

// Implicit differentiation of F(lambda, R) = lambda*sin(theta) - w*cos(theta)
// with theta = pi*lambda/6 - pi*n/2 and w = cR/sqrt(2). On the root,
// lambda' = -F_R/F_lambda simplifies (using w*cos = lambda*sin) to the
// pole-free form below; lambda'' follows from the second-order expansion.
LambdaDerivatives lambda_derivatives(int n, double c, double R) {
    if (R <= 0.0) throw std::invalid_argument("lambda_derivatives: R <= 0");
    if (c < 0.0) throw std::invalid_argument("lambda_derivatives: c < 0");
    LambdaDerivatives out;
    if (c == 0.0) {
        out.lambda = 3.0 * n;
        out.d1 = 0.0;
        out.d2 = 0.0;
        return out;
    }
    const double lambda = solve_lambda(n, c * R).lambda;
    const double w = c * R / kSqrt2;
    const double wr = c / kSqrt2;  // dw/dR
    const double theta = kPi * lambda / 6.0 - kPi * n / 2.0;
    const double s = std::sin(theta);
    const double co = std::cos(theta);

    const double d1 = wr * co * co / (s * co + kPi * lambda / 6.0);

    const double f_l = s + (kPi / 6.0) * (lambda * co + w * s);
    const double f_ll =
        (kPi / 6.0) *
        (2.0 * co - (kPi / 6.0) * lambda * s + (kPi / 6.0) * w * co);
    const double f_lr = (kPi / 6.0) * wr * s;
    const double d2 = -(f_ll * d1 * d1 + 2.0 * f_lr * d1) / f_l;

    out.lambda = lambda;
    out.d1 = d1;
    out.d2 = d2;
    return out;
}

}  // namespace

double dlambda_dr(int n, double c, double R) {
    return lambda_derivatives(n, c, R).d1;
}

double d2lambda_dr2(int n, double c, double R) {
    return lambda_derivatives(n, c, R).d2;
}

CouplingMatrices coupling_matrices(double c, double R, int N,
                                   const std::optional<ModelPotential>& pot,
                                   double quad_tol) {
    if (R <= 0.0) throw std::invalid_argument("coupling_matrices: R <= 0");
    if (N < 1 || N > 8) {
        throw std::invalid_argument("coupling_matrices: N must be in [1, 8]");
    }

    CouplingMatrices m;
    m.c = c;
    m.R = R;
    m.N = N;
    m.W.assign(static_cast<std::size_t>(N) * N, 0.0);
    m.Y.assign(static_cast<std::size_t>(N) * N, 0.0);
    m.U.assign(static_cast<std::size_t>(N) * N, 0.0);

    std::vector<LambdaDerivatives> ld(N);
    std::vector<double> B(N);
    for (int n = 0; n < N; ++n) {
        ld[n] = lambda_derivatives(n, c, R);
        B[n] = normalization_b(n, ld[n].lambda);
    }

    const double u3b = pot ? potential_value(*pot, R) : 0.0;

    for (int n = 0; n < N; ++n) {
        for (int np = 0; np < N; ++np) {
            const double ln = ld[n].lambda;
            const double lp = ld[np].lambda;
            const double lp1 = ld[np].d1;
            const double lp2 = ld[np].d2;
            const double phn = kPi * n / 2.0;
            const double php = kPi * np / 2.0;

            auto chi_n = [&](double a) {
                return std::cos(ln * (kPi / 6.0 - a) - phn);
            };
            // dR chi = -lambda' g sin(lambda g - pi n'/2), g = pi/6 - alpha.
            auto dr_chi_np = [&](double a) {
                const double g = kPi / 6.0 - a;
                return -lp1 * g * std::sin(lp * g - php);
            };
            // (1/R) dR (R dR chi) = -(lambda'' + lambda'/R) g sin(...)
            //                       - lambda'^2 g^2 cos(...).
            auto lap_chi_np = [&](double a) {
                const double g = kPi / 6.0 - a;
                const double arg = lp * g - php;
                return -(lp2 + lp1 / R) * g * std::sin(arg) -
                       lp1 * lp1 * g * g * std::cos(arg);
            };

            if (c == 0.0) {
                // lambda_n is R-independent: the derivative couplings vanish
                // identically; only U survives.
                m.W[n * N + np] = 0.0;
                m.Y[n * N + np] = 0.0;
            } else {
                m.W[n * N + np] =
                    2.0 / B[n] *
                    integrate([&](double a) { return chi_n(a) * dr_chi_np(a); },
                              0.0, kPi / 3.0, quad_tol, 0.0)
                        .value;
                m.Y[n * N + np] =
                    1.0 / B[n] *
                    integrate(
                        [&](double a) { return chi_n(a) * lap_chi_np(a); },
                        0.0, kPi / 3.0, quad_tol, 0.0)
                        .value;
            }
            if (pot && u3b != 0.0) {
                auto chi_np = [&](double a) {
                    return std::cos(lp * (kPi / 6.0 - a) - php);
                };
                m.U[n * N + np] =
                    u3b / B[n] *
                    integrate(
                        [&](double a) { return chi_n(a) * chi_np(a); }, 0.0,
                        kPi / 3.0, quad_tol, 0.0)
                        .value;
            }
        }
    }
    return m;
}

AdiabaticityReport adiabaticity_report(double c,
                                       const std::vector<double>& R_grid) {
    if (R_grid.empty()) {
        throw std::invalid_argument("adiabaticity_report: empty grid");
    }
    double prev = 0.0;
    for (double R : R_grid) {
        if (R <= prev) {
            throw std::invalid_argument(
                "adiabaticity_report: grid must be positive and increasing");
        }
        prev = R;
    }

    AdiabaticityReport rep;
    rep.rows.reserve(R_grid.size());
    rep.max_ratio_y_below_cr1 = 0.0;

    std::vector<double> log_r, log_pot, log_y;
    for (double R : R_grid) {
        const CouplingMatrices m = coupling_matrices(c, R, 3);
        const double l0 = solve_lambda(0, c * R).lambda;
        AdiabaticityRow row;
        row.R = R;
        row.lambda0 = l0;
        row.lambda1 = solve_lambda(1, c * R).lambda;
        row.lambda2 = solve_lambda(2, c * R).lambda;
        if (c == 0.0) {
            row.ratio_y = 0.0;
            row.ratio_w = 0.0;
        } else {
            row.ratio_y = std::abs(m.y(0, 0)) * R * R / (l0 * l0);
            row.ratio_w = std::abs(m.w(0, 0)) * R / l0;
        }
        rep.rows.push_back(row);

        if (c * R <= 1.0) {
            rep.max_ratio_y_below_cr1 =
                std::max(rep.max_ratio_y_below_cr1, row.ratio_y);
        }
        if (c * R >= 100.0 && std::abs(m.y(0, 0)) > 0.0) {
            log_r.push_back(std::log(R));
            log_pot.push_back(std::log(l0 * l0 / (R * R)));
            log_y.push_back(std::log(std::abs(m.y(0, 0))));
        }
    }

    auto slope = [](const std::vector<double>& x, const std::vector<double>& y)
        -> double {
        const std::size_t n = x.size();
        if (n < 2) return 0.0;
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sx += x[i];
            sy += y[i];
            sxx += x[i] * x[i];
            sxy += x[i] * y[i];
        }
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    rep.exponent_adiabatic = slope(log_r, log_pot);
    rep.exponent_y00 = slope(log_r, log_y);
    return rep;
}

}  // namespace hyperscatter
