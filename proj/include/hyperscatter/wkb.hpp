#pragma once

#include <vector>

namespace hyperscatter {

// Quasiclassical exponent and prefactor data for the lowest channel in the
// classically forbidden region:
//   phi_{+-}(R) = C_{+-} / sqrt(lambda_0(R)) * exp(+-I(R)),
//   I(R) = integral over (0, R] of lambda_0(R')/R' dR'.
struct WkbProfile {
    double c;
    std::vector<double> grid;      // R samples
    std::vector<double> exponent;  // I(R) at each sample
    double C_plus, C_minus;        // matched prefactors (product 1/4)
};

// I(R) by adaptive quadrature; the sqrt(1/R') endpoint behavior of the
// integrand is removed by the substitution t = sqrt(R'). Relative accuracy
// 1e-10. Depends on (c, R) only through cR.
double wkb_exponent(double c, double R);

// Convergence data for the growth constant Xi.
struct XiResult {
    double xi;     // exp(lim_{R->inf} [I(R) - 3 ln(cR)])
    double omega;  // 384 (xi/pi)^2
    struct Row {
        double cR;
        double raw;        // I - 3 ln(cR)
        double corrected;  // raw minus the analytic 1/(cR) tail
    };
    std::vector<Row> table;
    double extrapolation_residual;  // change in the last extrapolation step
};

// Xi from the exponent limit, evaluated at cR in {1e3, 1e4, 1e5}. The known
// first-order tail 18*sqrt(2)/(pi*cR) of the eigenvalue is subtracted
// analytically before Richardson extrapolation in 1/(cR)^2. Throws
// ConvergenceError if the extrapolation has not settled.
XiResult xi_constant();

// Independent cross-check: the same constant extracted by integrating the
// lowest-channel radial equation at k = 0 outward from the modified-Bessel
// seed and reading off the coefficient of the R^3 growth, extrapolated in
// 1/(cR). Converges to a slightly smaller value than the exponent-limit
// definition because the prefactor 1/sqrt(lambda_0) is only quasiclassical;
// both are reported by the CLI.
double xi_connection_constant();

struct QcSolution {
    double value;
    double validity;  // |d(R/lambda_0)/dR|; the quasiclassical form is
                      // trusted only where this is below 1
    bool valid;
};

// Evaluates phi_+ (sign > 0) or phi_- (sign < 0) at R with the matched
// prefactors C_+ = 1/(2 sqrt(pi)), C_- = sqrt(pi)/2.
QcSolution qc_solution(int sign, double c, double R);

// Profile sampling over a grid (for reporting).
WkbProfile wkb_profile(double c, const std::vector<double>& grid);

}  // namespace hyperscatter
