#pragma once

namespace hyperscatter {

// Cylinder Bessel functions for integer orders 0..3, double precision.
// Target accuracy: relative error <= 1e-12 for x in (0, 50] (absolute error
// <= 1e-12 near zeros of J/Y). Implementation: ascending series with long
// double accumulation for x < 16, Hankel amplitude-phase asymptotics beyond.
double bessel_j(int n, double x);
double bessel_y(int n, double x);

// Modified Bessel functions of orders 0 and 1. I: series / uniform
// asymptotic. K: series for x <= 2, cosh-integral quadrature for mid range,
// asymptotic for large x.
double bessel_i0(double x);
double bessel_i1(double x);
double bessel_k0(double x);
double bessel_k1(double x);

}  // namespace hyperscatter
