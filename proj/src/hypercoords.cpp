#include "hyperscatter/hypercoords.hpp"

#include <cmath>

namespace hyperscatter {

HyperCoords to_hyperspherical(double x1, double x2, double x3) {
    const double s = (x1 - x2) / std::sqrt(2.0);
    const double t = std::sqrt(2.0 / 3.0) * (x3 - 0.5 * (x1 + x2));
    HyperCoords h;
    h.X = (x1 + x2 + x3) / 3.0;
    h.R = std::hypot(s, t);
    h.alpha = (h.R == 0.0) ? 0.0 : std::atan2(s, t);
    return h;
}

std::array<double, 3> from_hyperspherical(const HyperCoords& h) {
    const double s = h.R * std::sin(h.alpha);
    const double t = h.R * std::cos(h.alpha);
    // x1 + x2 follows from X and the t-component, then the s-component
    // splits the pair.
    const double pair_sum = 2.0 * h.X - std::sqrt(2.0 / 3.0) * t;
    const double diff = std::sqrt(2.0) * s;
    return {0.5 * (pair_sum + diff), 0.5 * (pair_sum - diff),
            3.0 * h.X - pair_sum};
}

double relative_momentum(double k1, double k2, double k3) {
    const double d12 = k1 - k2;
    const double d23 = k2 - k3;
    const double d31 = k3 - k1;
    return std::sqrt((d12 * d12 + d23 * d23 + d31 * d31) / 3.0);
}

}  // namespace hyperscatter
