#pragma once

#include <array>

namespace hyperscatter {

// Polar coordinates on the two-dimensional relative-motion plane of three
// particles on a line, after separating the center of mass:
//   R sin(alpha) = (x1 - x2) / sqrt(2)
//   R cos(alpha) = sqrt(2/3) * (x3 - (x1 + x2) / 2)
//   X = (x1 + x2 + x3) / 3
struct HyperCoords {
    double X;      // center-of-mass position
    double R;      // hyperradius, >= 0
    double alpha;  // hyperangle, principal value in (-pi, pi]
};

// Total function; coincident particles (R = 0) return alpha = 0 by
// convention.
HyperCoords to_hyperspherical(double x1, double x2, double x3);

// Inverse map, {x1, x2, x3}.
std::array<double, 3> from_hyperspherical(const HyperCoords& h);

// Relative wavenumber of a three-particle collision:
//   k^2 = (1/3) [(k1-k2)^2 + (k2-k3)^2 + (k3-k1)^2].
// Invariant under permutations and global shifts k_j -> k_j + K.
double relative_momentum(double k1, double k2, double k3);

}  // namespace hyperscatter
