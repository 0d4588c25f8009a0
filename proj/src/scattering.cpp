#include "hyperscatter/scattering.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include "hyperscatter/errors.hpp"
#include "hyperscatter/specfun.hpp"
#include "hyperscatter/wkb.hpp"

namespace hyperscatter {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Coeffs {
    double a = 0.0, g = 0.0;
};

double median(std::vector<double> v) {
    if (v.empty()) throw ExtractionError("median of empty sample");
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + m, v.end());
    double hi = v[m];
    if (v.size() % 2 == 0) {
        std::nth_element(v.begin(), v.begin() + m - 1, v.begin() + m);
        return 0.5 * (v[m - 1] + hi);
    }
    return hi;
}

Coeffs fit_window_lsq(int nu, double k, const std::vector<double>& R,
                      const std::vector<double>& F) {
    double jj = 0.0, jy = 0.0, yy = 0.0, jf = 0.0, yf = 0.0;
    for (std::size_t i = 0; i < R.size(); ++i) {
        const double J = bessel_j(nu, k * R[i]);
        const double Y = bessel_y(nu, k * R[i]);
        jj += J * J;
        jy += J * Y;
        yy += Y * Y;
        jf += J * F[i];
        yf += Y * F[i];
    }
    const double det = jj * yy - jy * jy;
    if (det == 0.0 || !std::isfinite(det)) {
        throw ExtractionError("amplitude fit: singular normal equations");
    }
    return {(yy * jf - jy * yf) / det, (jj * yf - jy * jf) / det};
}

Coeffs fit_window_pointwise(int nu, double k, const std::vector<double>& R,
                            const std::vector<double>& F) {
    std::vector<double> as, gs;
    for (std::size_t i = 0; i + 1 < R.size(); i += 2) {
        const double J0 = bessel_j(nu, k * R[i]);
        const double Y0 = bessel_y(nu, k * R[i]);
        const double J1 = bessel_j(nu, k * R[i + 1]);
        const double Y1 = bessel_y(nu, k * R[i + 1]);
        const double det = J0 * Y1 - J1 * Y0;
        if (std::abs(det) <
            1e-6 * (std::abs(J0 * Y1) + std::abs(J1 * Y0))) {
            continue;  // nodes nearly in phase; skip ill-conditioned pair
        }
        as.push_back((F[i] * Y1 - F[i + 1] * Y0) / det);
        gs.push_back((J0 * F[i + 1] - J1 * F[i]) / det);
    }
    if (as.size() < 5) {
        throw ExtractionError(
            "amplitude fit: too few well-conditioned node pairs");
    }
    return {median(as), median(gs)};
}

std::complex<double> f0_from_ratio(double a_over_g) {
    return 1.0 / std::complex<double>(a_over_g, 1.0);
}

unsigned thread_budget(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("HYPERSCATTER_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v <= 0) {
            throw ConfigError(
                "HYPERSCATTER_THREADS must be a positive integer");
        }
        n = static_cast<unsigned>(v);
    }
    return std::min<std::size_t>(n, jobs) > 0
               ? static_cast<unsigned>(std::min<std::size_t>(n, jobs))
               : 1u;
}

}  // namespace

Amplitude extract_amplitude(const RadialSolution& sol) {
    if (!(sol.k > 0.0)) {
        throw ConfigError("extract_amplitude: k > 0 violated");
    }
    if (sol.grid.size() < 40) {
        throw ConfigError("extract_amplitude: solution too coarse");
    }
    const double k = sol.k;
    if (!(k * sol.grid.back() >= 25.0)) {
        throw ConfigError("extract_amplitude: k*R_max >= 25 violated");
    }
    const int nu = sol.c > 0.0 ? 3 : 0;

    // Far-zone nodes, with any potential support strictly below them.
    std::vector<double> R, F;
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        if (k * sol.grid[i] < 25.0) continue;
        if (sol.log_scale[i] != 0.0) {
            throw ExtractionError(
                "extract_amplitude: rescaled samples in the fit region");
        }
        R.push_back(sol.grid[i]);
        F.push_back(sol.F[i]);
    }
    if (sol.potential && sol.potential->r0 >= R.front()) {
        throw ConfigError(
            "extract_amplitude: potential support reaches the fit window");
    }
    if (R.size() < 40) {
        throw ExtractionError(
            "extract_amplitude: fewer than 20 nodes per fit window");
    }

    const std::size_t half = R.size() / 2;
    const std::vector<double> R1(R.begin(), R.begin() + half);
    const std::vector<double> F1(F.begin(), F.begin() + half);
    const std::vector<double> R2(R.begin() + half, R.end());
    const std::vector<double> F2(F.begin() + half, F.end());

    const Coeffs global = fit_window_lsq(nu, k, R, F);
    const Coeffs est[4] = {
        fit_window_lsq(nu, k, R1, F1),
        fit_window_lsq(nu, k, R2, F2),
        fit_window_pointwise(nu, k, R1, F1),
        fit_window_pointwise(nu, k, R2, F2),
    };

    Amplitude amp;
    amp.fit_window_lo = R.front();
    amp.fit_window_hi = R.back();

    const double a_scale = std::abs(global.a);
    if (std::abs(global.g) < 1e-10 * a_scale) {
        amp.no_scattering = true;
        amp.f0 = {0.0, 0.0};
        amp.coeff_ratio =
            global.g == 0.0 ? std::numeric_limits<double>::infinity()
                            : global.a / global.g;
        amp.stability = 0.0;
        return amp;
    }

    amp.coeff_ratio = global.a / global.g;
    amp.f0 = f0_from_ratio(amp.coeff_ratio);
    double spread = 0.0;
    for (const Coeffs& e : est) {
        if (e.g == 0.0) {
            throw ExtractionError(
                "extract_amplitude: inconsistent Y coefficient across "
                "methods");
        }
        const std::complex<double> f = f0_from_ratio(e.a / e.g);
        spread = std::max(spread, std::abs(f - amp.f0) / std::abs(amp.f0));
    }
    amp.stability = spread;
    if (spread > 0.05) {
        throw ExtractionError(
            "extract_amplitude: window/method spread " +
            std::to_string(spread) +
            " exceeds 5% (extraction unreliable)");
    }
    return amp;
}

AnalyticAmplitude analytic_amplitude(const AnalyticAmplitudeParams& p) {
    if (!(p.c > 0.0)) {
        throw ConfigError("analytic_amplitude: c > 0 violated");
    }
    // The boundary k = c/10 is admitted: it is the top of the documented
    // sweep range.
    if (!(p.k > 0.0) || !(p.k <= p.c / 10.0 * (1.0 + 1e-12))) {
        throw ConfigError("analytic_amplitude: 0 < k <= c/10 violated");
    }
    if (!(p.q > 0.0) || !(p.r0 > 0.0)) {
        throw ConfigError("analytic_amplitude: q > 0, r0 > 0 violated");
    }
    if (!(std::abs(p.b) <= 1.0)) {
        throw ConfigError("analytic_amplitude: |b| <= 1 violated");
    }

    AnalyticAmplitude out;
    out.beta = 3.0 * std::sqrt(2.0) / kPi * p.c;
    const double z = p.q * p.r0;
    const double j1 = bessel_j(1, z);
    if (std::abs(j1) < 1e-10) {
        throw ResonanceError(
            "analytic_amplitude: q*r0 at a J1 zero (matching pole)");
    }
    out.jfactor = bessel_j(0, z) / (z * j1);
    out.bracket = std::log(4.0 * out.beta * p.r0) + out.jfactor;
    out.near_resonant = std::abs(out.bracket) < 0.05;
    out.omega = p.omega_pin > 0.0 ? p.omega_pin : xi_constant().omega;

    const double ck = p.c / p.k;
    const double A = -out.omega * std::pow(ck, 6) * out.bracket + p.b;
    out.f0 = 1.0 / std::complex<double>(A, 1.0);
    return out;
}

Amplitude numeric_amplitude(const ModelPotential& p, double k,
                            MatchMode match) {
    validate(p);
    const FBasis basis = construct_f_basis(p.c, k, {p.r0, 1.0 / p.c});

    // The regular basis solution and the conserved Wronskian are linked by
    // s = -4 a_plus / pi; a violation means the asymptotic fit or the
    // basis integration went wrong.
    const double identity_dev =
        std::abs(basis.wronskian + 4.0 * basis.a_plus / kPi) /
        std::abs(basis.wronskian);
    if (identity_dev > 1e-3) {
        throw ExtractionError(
            "numeric_amplitude: Wronskian / J3-coefficient identity "
            "violated at " +
            std::to_string(identity_dev));
    }

    const MatchResult mr = match == MatchMode::closed_form
                               ? match_ratio(p, k)
                               : match_ratio_numeric(p, k, basis);

    Amplitude amp;
    const double A = mr.c1_over_c2 * basis.wronskian * basis.a_plus;
    amp.coeff_ratio = A;
    amp.f0 = f0_from_ratio(A);
    amp.fit_window_lo = 27.0 / k;
    amp.fit_window_hi = 39.0 / k;
    amp.stability =
        std::abs(basis.a_plus_w1 - basis.a_plus_w2) / std::abs(basis.a_plus);
    amp.no_scattering = false;
    return amp;
}

PowerLawFit fit_power_law(const std::vector<double>& x,
                          const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3) {
        throw ExtractionError("fit_power_law: need >= 3 paired points");
    }
    const std::size_t n = x.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) ||
            !std::isfinite(y[i])) {
            throw ExtractionError(
                "fit_power_law: values must be finite and positive");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw ExtractionError("fit_power_law: degenerate x grid");

    PowerLawFit fit;
    fit.exponent = sxy / sxx;
    const double intercept = my - fit.exponent * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = ly[i] - (intercept + fit.exponent * lx[i]);
        ss += r * r;
        fit.max_residual = std::max(fit.max_residual, std::abs(r));
    }
    fit.std_error =
        std::sqrt(ss / (static_cast<double>(n) - 2.0) / sxx);
    fit.flagged = fit.max_residual > 0.05;
    return fit;
}

std::vector<double> log_spaced_grid(double a, double b, int n) {
    if (!(a > 0.0) || !(b > a) || n < 2) {
        throw ConfigError("log_spaced_grid: need 0 < a < b and n >= 2");
    }
    std::vector<double> v(n);
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) {
        v[i] = std::exp(la + (lb - la) * static_cast<double>(i) /
                                 static_cast<double>(n - 1));
    }
    v.front() = a;
    v.back() = b;
    return v;
}

SweepResult scaling_sweep(double c, const std::vector<double>& k_values,
                          const ModelPotential& p, SweepMode mode,
                          MatchMode match, double omega_pin) {
    validate(p);
    if (!(c > 0.0)) throw ConfigError("scaling_sweep: c > 0 violated");
    if (k_values.size() < 8) {
        throw ConfigError("scaling_sweep: >= 8 sweep points violated");
    }
    for (double k : k_values) {
        if (!(k >= 1e-3 * c * (1.0 - 1e-12)) ||
            !(k <= 1e-1 * c * (1.0 + 1e-12))) {
            throw ConfigError(
                "scaling_sweep: k within [1e-3*c, 1e-1*c] violated");
        }
    }
    if (!std::is_sorted(k_values.begin(), k_values.end())) {
        throw ConfigError("scaling_sweep: k_values must be increasing");
    }
    const bool want_numeric = mode != SweepMode::analytic;
    if (want_numeric && !(k_values.back() <= c / 50.0)) {
        throw ConfigError(
            "scaling_sweep: numeric mode requires max(k) <= c/50");
    }

    // Resolve the amplitude constant once, outside the worker threads.
    AnalyticAmplitudeParams ap;
    ap.c = c;
    ap.q = p.q;
    ap.r0 = p.r0;
    ap.omega_pin = omega_pin;
    ap.k = k_values.front();
    const double omega = analytic_amplitude(ap).omega;

    SweepResult result;
    result.mode = mode;
    result.match = match;
    result.omega = omega;
    result.rows.resize(k_values.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= k_values.size()) return;
            try {
                SweepRow row;
                row.k = k_values[i];
                row.c = c;
                row.k_over_c = k_values[i] / c;
                AnalyticAmplitudeParams pp = ap;
                pp.k = row.k;
                pp.omega_pin = omega;  // frozen above for determinism
                row.f0_analytic = analytic_amplitude(pp).f0;
                if (want_numeric) {
                    row.f0 = numeric_amplitude(p, row.k, match).f0;
                } else {
                    row.f0 = row.f0_analytic;
                }
                row.rate = std::norm(row.f0);
                result.rows[i] = row;
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const unsigned n_threads = thread_budget(k_values.size());
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    std::vector<double> ks, mags, mags_an;
    for (const SweepRow& row : result.rows) {
        ks.push_back(row.k);
        mags.push_back(std::abs(row.f0));
        mags_an.push_back(std::abs(row.f0_analytic));
    }
    result.amplitude_fit = fit_power_law(ks, mags);
    result.analytic_fit = fit_power_law(ks, mags_an);
    result.rate_exponent = 2.0 * result.amplitude_fit.exponent;
    return result;
}

GammaReport gamma_report(double n1d, const std::vector<double>& c_values) {
    if (!(n1d > 0.0)) throw ConfigError("gamma_report: n1d > 0 violated");
    if (c_values.empty()) {
        throw ConfigError("gamma_report: empty coupling grid");
    }
    GammaReport report;
    report.n1d = n1d;
    for (double c : c_values) {
        GammaRow row;
        row.c = c;
        row.gamma = c / n1d;
        if (!(row.gamma >= 10.0)) {
            throw ConfigError(
                "gamma_report: gamma = c/n1d >= 10 violated (gamma = " +
                std::to_string(row.gamma) + ")");
        }
        // Collision momentum pinned to the typical scale k = n1d.
        row.suppression = std::pow(n1d / c, 12);
        row.g3sq_reference = std::pow(row.gamma, -12);
        row.ratio = row.suppression / row.g3sq_reference;
        report.rows.push_back(row);
    }
    return report;
}

Coupling3d coupling_from_3d(double a_s, double l_perp) {
    if (a_s < 0.0) throw ConfigError("coupling_from_3d: a_s >= 0 violated");
    if (!(l_perp > 0.0)) {
        throw ConfigError("coupling_from_3d: l_perp > 0 violated");
    }
    Coupling3d out;
    out.c = 2.0 * a_s / (l_perp * l_perp);
    out.validity_warning = l_perp < 10.0 * a_s;
    return out;
}

}  // namespace hyperscatter
