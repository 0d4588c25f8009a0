#pragma once

namespace hyperscatter {

// Short-range three-body model potential acting in the lowest channel:
//   U_00(R) = -q^2 - beta/R   for R < r0,   0 for R >= r0,
// with beta = 3*sqrt(2)*c/pi. Requires r0 > 0, q > 0 and r0*c <= 0.05
// (the well must sit far inside the coupling length 1/c).
struct ModelPotential {
    double q;   // well depth parameter (inverse length; depth q^2)
    double r0;  // range (length)
    double c;   // pairwise coupling (inverse length)

    double beta() const;
};

// Validates the invariants above; throws ConfigError on violation.
void validate(const ModelPotential& p);

// The potential profile; R > 0.
double potential_value(const ModelPotential& p, double R);

}  // namespace hyperscatter
