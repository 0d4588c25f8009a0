#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hyperscatter/radial_types.hpp"

namespace hyperscatter {

// Lowest-channel radial solution F_0(R) of
//   -(1/R) d/dR (R d/dR F_0) + [lambda_0^2(R)/R^2 + U_00(R)] F_0 = k^2 F_0.
// Integration is performed on u = sqrt(R) F_0, which obeys
// u'' = [(lambda_0^2 - 1/4)/R^2 + U_00 - k^2] u, and internally in units
// where all lengths are scaled by the dominant inverse length (c, else q,
// else k), so results depend only on the dimensionless combinations
// k/c, q*r0, c*r0.
struct RadialSolution {
    std::vector<double> grid;  // increasing R
    std::vector<double> F;     // F_0; true value is F * exp(log_scale)
    std::vector<double> dF;    // dF_0/dR, same scaling
    std::vector<double> log_scale;
    double k = 0.0;
    double c = 0.0;
    std::optional<ModelPotential> potential;
    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;
};

struct MatchResult {
    double c1_over_c2;      // coefficient ratio of the growing/decaying basis
    double inner_logderiv;  // d ln F_0 / dR of the inner solution at r0
};

// Coefficient ratio from the analytic small-argument matching:
//   C1/C2 = ln(2 sqrt(beta r0)) + J0(q r0) / (2 q r0 J1(q r0)).
// Preconditions: k <= q/100 and c*r0 <= 0.05. A zero of J1(q r0) is a
// resonance of the formula and raises ResonanceError.
MatchResult match_ratio(const ModelPotential& p, double k);

// The same ratio from a full numerical match: the regular inner solution is
// integrated through the well and its logarithmic derivative at r0 is
// decomposed against numerically constructed basis solutions (growing one
// seeded from the modified-Bessel form at R -> 0, decaying one normalized
// against the growing one through their conserved Wronskian). Reported for
// comparison with the closed form, which additionally assumes the
// small-argument forms of I0 and K0 at r0.
MatchResult match_ratio_numeric(const ModelPotential& p, double k);

// Outward integration of the regular solution over [R_min, R_max], sampled
// on a log grid (plus a linear tail across the oscillatory fit region when
// k*R_max >= 25). Seeds: J0(qR) inside the well when the potential is
// present, the modified-Bessel small-R form when c > 0, J0(kR) when c = 0.
RadialSolution integrate_radial(double c, double k,
                                const std::optional<ModelPotential>& p,
                                double R_min, double R_max,
                                int report_nodes = 600,
                                double rel_tol = 1e-11);

// Local defect of the stored solution: each grid interval is re-integrated
// from its left node at tightened tolerance and compared with the stored
// right node, normalized by the local solution scale. Entry i is the defect
// of the interval ending at node i (entry 0 is 0).
std::vector<double> interval_residuals(const RadialSolution& sol);

// Largest entry of interval_residuals.
double max_interval_residual(const RadialSolution& sol);

// Basis pair for amplitude extraction.
struct FBasis {
    RadialSolution f_plus;   // outward; modified-Bessel normalization at 0
    RadialSolution f_minus;  // inward; Y3(kR) normalization at R_max
    double a_plus;           // J3 coefficient of f_plus at large R
    double a_plus_w1;        // same, fitted over the first window alone
    double a_plus_w2;        // same, fitted over the second window alone
    double a_plus_y;         // Y3 coefficient of the same fit (noise floor;
                             // the true admixture is ~(k/c)^6 relative and
                             // numerically unresolvable by design)
    double j3_admixture;     // J3 coefficient observed in f_minus (diagnostic)
    bool admixture_resolvable;  // false when below the fit noise floor
    double wronskian;        // conserved 2R(F+' F- - F-' F+) at cR = 1
    double wronskian_drift;  // max relative drift over sampled radii
};

// Requires k <= c/50 (deep sub-coupling regime). Throws ExtractionError on
// Wronskian collapse (loss of linear independence).
FBasis construct_f_basis(double c, double k, const std::vector<double>& R_grid);

// Logarithmic derivative d ln F_0 / dR at r0 of the regular solution
// integrated through the potential well.
double inner_logderiv_numeric(const ModelPotential& p, double k);

// Variant of match_ratio_numeric reusing an already-constructed basis whose
// grid contains r0 (avoids re-integrating the basis pair).
MatchResult match_ratio_numeric(const ModelPotential& p, double k,
                                const FBasis& basis);

}  // namespace hyperscatter
