#pragma once

#include <complex>
#include <vector>

#include "hyperscatter/radial.hpp"

namespace hyperscatter {

// Partial amplitude extracted from the large-R tail of a real radial
// solution F(R) = a J_nu(kR) + g Y_nu(kR):  f0 = 1/(a/g + i).
// Im(1/f0) = 1 and |f0| <= 1 hold by construction.
struct Amplitude {
    std::complex<double> f0{0.0, 0.0};
    double coeff_ratio = 0.0;   // a/g (J over Y coefficient)
    double fit_window_lo = 0.0; // R span used by the fits
    double fit_window_hi = 0.0;
    double stability = 0.0;     // max relative deviation of f0 across
                                // windows and extraction methods
    bool no_scattering = false; // Y admixture below resolution; f0 set to 0
};

// Fit of F against {J_nu, Y_nu} over >= 2 disjoint windows in the far zone
// (k R >= 25, each window >= 20 nodes), by global least squares and by
// pointwise two-node solves (median-aggregated). The methods must agree:
// spread above 5% raises ExtractionError. A vanishing Y coefficient
// (|g| < 1e-10 |a|) is reported as no_scattering with f0 = 0.
// nu = 3 for c > 0 (lowest open channel), nu = 0 for c = 0.
// Preconditions: k*R_max >= 25; any potential support below the windows.
Amplitude extract_amplitude(const RadialSolution& sol);

struct AnalyticAmplitudeParams {
    double c = 1.0;
    double k = 0.0;
    double q = 0.0;
    double r0 = 0.0;
    double b = 0.0;         // short-distance admixture constant, |b| <= 1
    double omega_pin = 0.0; // > 0: use this Omega instead of the computed one
};

struct AnalyticAmplitude {
    std::complex<double> f0{0.0, 0.0};
    double omega = 0.0;    // 384 (Xi/pi)^2 (or the pinned value)
    double beta = 0.0;     // 3 sqrt(2) c / pi
    double jfactor = 0.0;  // J0(q r0) / (q r0 J1(q r0))
    double bracket = 0.0;  // ln(4 beta r0) + jfactor
    bool near_resonant = false;  // |bracket| small: amplitude approaches the
                                 // unitarity circle
};

// Closed-form amplitude f0 = 1/(-Omega (c/k)^6 bracket + b + i).
// Preconditions: k < c/10, q r0 away from a J1 zero (ResonanceError),
// |b| <= 1.
AnalyticAmplitude analytic_amplitude(const AnalyticAmplitudeParams& p);

// How the inner boundary condition enters the end-to-end amplitude:
// closed_form uses the small-argument matching ratio, numeric matches the
// integrated inner solution against the basis pair at r0.
enum class MatchMode { closed_form, numeric };

// End-to-end amplitude from the ODE pipeline: basis pair from
// construct_f_basis, inner matching per MatchMode, then
// f0 = 1/(A + i) with A = (C1/C2) * wronskian * a_plus.
// The conserved-Wronskian identity wronskian = -4 a_plus / pi is verified
// to 1e-3 (ExtractionError otherwise). Requires k <= c/50.
Amplitude numeric_amplitude(const ModelPotential& p, double k,
                            MatchMode match = MatchMode::closed_form);

enum class SweepMode { numeric, analytic, both };

struct SweepRow {
    double k = 0.0;
    double c = 0.0;
    double k_over_c = 0.0;
    std::complex<double> f0{0.0, 0.0};          // per sweep mode
    std::complex<double> f0_analytic{0.0, 0.0}; // always evaluated
    double rate = 0.0;                          // |f0|^2 (relative units)
};

struct PowerLawFit {
    double exponent = 0.0;
    double std_error = 0.0;    // least-squares slope uncertainty
    double max_residual = 0.0; // in log space
    bool flagged = false;      // residual above threshold; value still valid
};

struct SweepResult {
    std::vector<SweepRow> rows;
    SweepMode mode = SweepMode::both;
    MatchMode match = MatchMode::closed_form;
    PowerLawFit amplitude_fit;          // on |f0| of the primary column
    PowerLawFit analytic_fit;           // on |f0_analytic|
    double rate_exponent = 0.0;         // = 2 * amplitude exponent, exactly
    double omega = 0.0;                 // Omega used by the analytic column
};

// Log-log least squares of y against x; throws ExtractionError unless all
// values are finite and positive and there are >= 3 points.
PowerLawFit fit_power_law(const std::vector<double>& x,
                          const std::vector<double>& y);

// n log-spaced values on [a, b] inclusive.
std::vector<double> log_spaced_grid(double a, double b, int n);

// Amplitude scaling study over k_values (log-spaced, >= 8 points, all within
// [1e-3 c, 1e-1 c]). Rows are computed independently (thread pool capped by
// the HYPERSCATTER_THREADS environment variable) and assembled in input
// order, so output is deterministic. In analytic mode the f0 column carries
// the analytic value; numeric evaluation additionally requires
// max(k) <= c/50.
SweepResult scaling_sweep(double c, const std::vector<double>& k_values,
                          const ModelPotential& p, SweepMode mode,
                          MatchMode match = MatchMode::closed_form,
                          double omega_pin = 0.0);

struct GammaRow {
    double c = 0.0;
    double gamma = 0.0;            // c / n1d
    double suppression = 0.0;      // (k/c)^12 with k pinned to n1d
    double g3sq_reference = 0.0;   // gamma^(-12) reference curve
    double ratio = 0.0;            // suppression / g3sq_reference
};

struct GammaReport {
    double n1d = 0.0;
    std::vector<GammaRow> rows;
};

// Rate-suppression table with the collision momentum pinned to k = n1d.
// Requires gamma = c/n1d >= 10 for every row.
GammaReport gamma_report(double n1d, const std::vector<double>& c_values);

struct Coupling3d {
    double c = 0.0;
    bool validity_warning = false; // l_perp < 10 a_s
};

// Effective 1D coupling from 3D parameters: c = 2 a_s / l_perp^2.
// a_s >= 0 and l_perp > 0 required.
Coupling3d coupling_from_3d(double a_s, double l_perp);

}  // namespace hyperscatter
