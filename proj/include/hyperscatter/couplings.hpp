#pragma once

#include <optional>
#include <vector>

#include "hyperscatter/radial_types.hpp"

namespace hyperscatter {

// Channel-coupling matrix elements at one hyperradius. W couples to dF/dR
// (units 1/length), Y and U enter the potential (units 1/length^2). All are
// stored row-major, dimension N x N.
struct CouplingMatrices {
    double c;
    double R;
    int N;
    std::vector<double> W, Y, U;

    double w(int n, int m) const { return W[n * N + m]; }
    double y(int n, int m) const { return Y[n * N + m]; }
    double u(int n, int m) const { return U[n * N + m]; }
};

// d(lambda_n)/dR by implicit differentiation of the eigenvalue equation
// (analytic, no finite differences). R > 0, c > 0; the c -> 0 analog is 0.
double dlambda_dr(int n, double c, double R);

// Second derivative d^2(lambda_n)/dR^2, also in closed form.
double d2lambda_dr2(int n, double c, double R);

// Builds the W/Y/U matrices for channels 0..N-1 by adaptive quadrature of
// the hyperangular integrals (absolute tolerance quad_tol). The optional
// potential feeds U; without it U is identically zero.
CouplingMatrices coupling_matrices(double c, double R, int N,
                                   const std::optional<ModelPotential>&
                                       potential = std::nullopt,
                                   double quad_tol = 1e-9);

// Diagnostics of the adiabatic (single-channel) approximation along a grid.
struct AdiabaticityRow {
    double R;
    double ratio_y;   // |Y_00| R^2 / lambda_0^2
    double ratio_w;   // |W_00| R / lambda_0
    double lambda0, lambda1, lambda2;
};

struct AdiabaticityReport {
    std::vector<AdiabaticityRow> rows;
    // Log-log decay exponents fitted over the large-R portion of the grid
    // (cR >= 100): the diagonal potential lambda_0^2/R^2 approaches
    // R^{-2}, while Y_00 falls faster by about one extra power of R.
    double exponent_adiabatic;  // d ln(lambda_0^2/R^2) / d ln R
    double exponent_y00;        // d ln|Y_00| / d ln R
    double max_ratio_y_below_cr1;  // max of ratio_y over grid points cR <= 1
};

// Grid must be positive and strictly increasing.
AdiabaticityReport adiabaticity_report(double c,
                                       const std::vector<double>& R_grid);

}  // namespace hyperscatter
