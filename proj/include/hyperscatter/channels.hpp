#pragma once

#include <vector>

namespace hyperscatter {

// One root of the channel eigenvalue equation
//   lambda * tan(pi*lambda/6 - pi*n/2) = cR / sqrt(2),
// which fixes the adiabatic potential lambda_n^2(R)/R^2 of channel n.
struct ChannelEigenvalue {
    int n;          // channel index, >= 0
    double cR;      // dimensionless coupling * hyperradius
    double lambda;  // root in [3n, 3n+3)
};

// Channel eigenvalue sampled along a hyperradial grid at fixed coupling.
struct AdiabaticChannel {
    int n;
    std::vector<double> grid;     // strictly increasing R samples
    std::vector<double> lambdas;  // lambda_n at each sample
    double c;                     // coupling constant (inverse length)
};

// Solves the eigenvalue equation for channel n at the given cR >= 0.
// The residual is driven below 1e-12 (bisection bracket [3n, 3n+3]
// followed by a Newton polish on the pole-free form
// lambda*sin(theta) - (cR/sqrt(2))*cos(theta)). Throws ConvergenceError if
// the bracket fails, which cannot happen for cR <= 1e8.
ChannelEigenvalue solve_lambda(int n, double cR);

// Sector eigenfunction: cos(lambda*(pi/6 - |alpha|) - pi*n/2) for
// |alpha| <= pi/3 and 0 otherwise. alpha is reduced to (-pi, pi].
double chi_tilde(int n, double lambda, double alpha);

// Bosonic eigenfunction: sum of the three sector copies shifted by
// 0, +-2*pi/3; 2*pi-periodic in alpha.
double chi_full(int n, double lambda, double alpha);

// Normalization B_n = integral over [0, pi/3] of chi_tilde^2, in closed
// form: pi/6 + (-1)^n * sin(pi*lambda/3) / (2*lambda), with the lambda -> 0
// limit pi/3 for n = 0.
double normalization_b(int n, double lambda);

// d(B_n)/d(lambda), closed form (used to cross-check the diagonal coupling
// matrix element against the identity W_00 = B0'/B0).
double normalization_b_dlambda(int n, double lambda);

// Samples lambda_n over the given strictly increasing radial grid.
AdiabaticChannel build_adiabatic_channel(int n, double c,
                                         const std::vector<double>& grid);

}  // namespace hyperscatter
