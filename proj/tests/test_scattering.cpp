#include <cmath>
#include <complex>
#include <cstdlib>
#include <optional>
#include <vector>

#include "doctest.h"
#include "hyperscatter/errors.hpp"
#include "hyperscatter/scattering.hpp"
#include "hyperscatter/specfun.hpp"
#include "oracles.hpp"

using namespace hyperscatter;

namespace {
constexpr double kPi = oracles::kPi;

const ModelPotential kPot{100.0, 0.01, 1.0};

// Hand-built free solution F = a J0(kR) + g Y0(kR) on a far-zone grid
// (c = 0, so the open channel has order zero).
RadialSolution manufactured(double k, double a, double g) {
    RadialSolution sol;
    sol.k = k;
    sol.c = 0.0;
    const int n = 200;
    for (int i = 0; i < n; ++i) {
        const double R = 25.0 / k + (15.0 / k) * i / (n - 1);
        sol.grid.push_back(R);
        sol.F.push_back(a * bessel_j(0, k * R) + g * bessel_y(0, k * R));
        sol.dF.push_back(-k * (a * bessel_j(1, k * R) + g * bessel_y(1, k * R)));
        sol.log_scale.push_back(0.0);
    }
    return sol;
}
}  // namespace

TEST_CASE("amplitude extraction recovers manufactured coefficients") {
    for (double ratio : {10.0 / 3.0, -2.0, 0.2}) {
        const auto am = extract_amplitude(manufactured(1.0, ratio, 1.0));
        CHECK(am.coeff_ratio == doctest::Approx(ratio).epsilon(1e-10));
        const std::complex<double> want =
            1.0 / std::complex<double>(ratio, 1.0);
        CHECK(std::abs(am.f0 - want) <= 1e-12 * std::abs(want));
        CHECK_FALSE(am.no_scattering);
        CHECK(am.stability <= 1e-10);
        CHECK(am.fit_window_hi > am.fit_window_lo);
    }
}

TEST_CASE("pure regular solution reports no scattering") {
    const auto am = extract_amplitude(manufactured(1.0, 1.0, 0.0));
    CHECK(am.no_scattering);
    CHECK(am.f0 == std::complex<double>(0.0, 0.0));
}

TEST_CASE("unitarity constraint and modulus bound hold by construction") {
    for (double ratio : {1e6, 37.0, 1.0, 0.0, -4.2}) {
        const auto am = extract_amplitude(manufactured(0.7, ratio, 1.0));
        CHECK(std::fabs(std::imag(1.0 / am.f0) - 1.0) <= 1e-12);
        CHECK(std::abs(am.f0) <= 1.0 + 1e-15);
    }
}

TEST_CASE("inconsistent data across windows is rejected") {
    // A pure rescaling of one window would leave the J/Y ratio intact, so
    // corrupt the waveform with an off-frequency component instead.
    auto sol = manufactured(1.0, 2.0, 1.0);
    for (std::size_t i = sol.grid.size() / 2; i < sol.grid.size(); ++i) {
        sol.F[i] += 0.05 * std::cos(1.3 * sol.grid[i]);
    }
    CHECK_THROWS_AS(extract_amplitude(sol), ExtractionError);
}

TEST_CASE("extraction preconditions") {
    auto sol = manufactured(1.0, 2.0, 1.0);
    sol.grid.resize(30);
    sol.F.resize(30);
    sol.dF.resize(30);
    sol.log_scale.resize(30);
    CHECK_THROWS_AS(extract_amplitude(sol), ConfigError);  // too few nodes

    auto short_span = manufactured(1.0, 2.0, 1.0);
    for (auto& r : short_span.grid) r *= 0.5;  // kR_max < 25
    CHECK_THROWS_AS(extract_amplitude(short_span), ConfigError);
}

TEST_CASE("analytic amplitude: pinned bracket and resonance pole") {
    AnalyticAmplitudeParams p;
    p.c = 1.0;
    p.k = 0.02;
    p.q = 100.0;
    p.r0 = 0.01;
    const auto am = analytic_amplitude(p);
    CHECK(am.beta == doctest::Approx(3.0 * std::sqrt(2.0) / kPi).epsilon(1e-15));
    CHECK(am.bracket == doctest::Approx(-1.1795340960248144).epsilon(1e-12));
    CHECK(am.bracket ==
          doctest::Approx(std::log(4.0 * am.beta * 0.01) +
                          bessel_j(0, 1.0) / (1.0 * bessel_j(1, 1.0)))
              .epsilon(1e-14));
    CHECK_FALSE(am.near_resonant);
    CHECK(std::fabs(std::imag(1.0 / am.f0) - 1.0) <= 1e-12);

    p.q = 383.17059702075125;  // q r0 at the first zero of J1
    CHECK_THROWS_AS(analytic_amplitude(p), ResonanceError);
}

TEST_CASE("analytic amplitude scales as the sixth power of momentum") {
    AnalyticAmplitudeParams p;
    p.c = 1.0;
    p.q = 100.0;
    p.r0 = 0.01;
    p.k = 1e-3;
    const double f1 = std::abs(analytic_amplitude(p).f0);
    p.k = 2e-3;
    const double f2 = std::abs(analytic_amplitude(p).f0);
    CHECK(f2 / f1 == doctest::Approx(64.0).epsilon(1e-3));
}

TEST_CASE("analytic amplitude near-resonant flag trips at the bracket zero") {
    // Find the q r0 where ln(4 beta r0) + J0/(z J1) crosses zero, then probe
    // the flag on both sides.
    AnalyticAmplitudeParams p;
    p.c = 1.0;
    p.r0 = 0.01;
    // A moderate momentum keeps the (c/k)^6 amplifier small enough that the
    // residual bracket after bisection still pins f0 to the circle.
    p.k = 0.05;
    auto bracket_at = [&](double qr0) {
        p.q = qr0 / p.r0;
        return analytic_amplitude(p).bracket;
    };
    double lo = 0.5, hi = 1.0;  // bracket(0.5) > 0 > bracket(1.0)
    REQUIRE(bracket_at(lo) > 0.0);
    REQUIRE(bracket_at(hi) < 0.0);
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (bracket_at(mid) > 0.0 ? lo : hi) = mid;
    }
    p.q = 0.5 * (lo + hi) / p.r0;
    const auto near = analytic_amplitude(p);
    CHECK(near.near_resonant);
    CHECK(std::abs(near.f0) > 0.99);  // pinned to the unitarity circle
    p.q = 100.0;
    CHECK_FALSE(analytic_amplitude(p).near_resonant);
}

TEST_CASE("analytic amplitude honors the admixture constant and the pin") {
    AnalyticAmplitudeParams p;
    p.c = 1.0;
    p.k = 0.09;  // keeps the leading term ~1e6 so the shift is resolvable
    p.q = 100.0;
    p.r0 = 0.01;
    const auto base = analytic_amplitude(p);
    p.b = 0.5;
    const auto shifted = analytic_amplitude(p);
    // f0 = 1/(A + b + i): recover the same A from both evaluations.
    const double a0 = std::real(1.0 / base.f0);
    const double a1 = std::real(1.0 / shifted.f0);
    CHECK(a1 - a0 == doctest::Approx(0.5).epsilon(1e-6));

    p.b = 0.0;
    p.omega_pin = 1.26;
    const auto pinned = analytic_amplitude(p);
    CHECK(pinned.omega == 1.26);
    CHECK(std::real(1.0 / pinned.f0) ==
          doctest::Approx(std::real(1.0 / base.f0) * 1.26 / base.omega)
              .epsilon(1e-12));

    p.omega_pin = 0.0;
    p.b = 1.5;
    CHECK_THROWS_AS(analytic_amplitude(p), ConfigError);
    p.b = 0.0;
    p.k = 0.2;  // k < c/10 violated
    CHECK_THROWS_AS(analytic_amplitude(p), ConfigError);
}

TEST_CASE("pipeline amplitude at the reference point") {
    const auto am = numeric_amplitude(kPot, 0.02);
    CHECK(std::abs(am.f0) ==
          doctest::Approx(2.1859899442560526e-11).epsilon(1e-6));
    CHECK(std::fabs(std::imag(1.0 / am.f0) - 1.0) <= 1e-12);
    CHECK(am.stability <= 1e-3);

    AnalyticAmplitudeParams p;
    p.c = 1.0;
    p.k = 0.02;
    p.q = 100.0;
    p.r0 = 0.01;
    const auto an = analytic_amplitude(p);
    // Pipeline and closed form agree to ~8% at this point (the growth
    // constant enters squared; the quasiclassical and exact connection
    // values differ by ~4%).
    CHECK(std::abs(am.f0) / std::abs(an.f0) ==
          doctest::Approx(1.0827).epsilon(2e-2));
}

TEST_CASE("pipeline amplitude with the numerically matched inner ratio") {
    const auto am = numeric_amplitude(kPot, 0.02, MatchMode::numeric);
    CHECK(std::abs(am.f0) ==
          doctest::Approx(1.6762023792198589e-11).epsilon(1e-4));
    CHECK(std::fabs(std::imag(1.0 / am.f0) - 1.0) <= 1e-12);
}

TEST_CASE("pipeline amplitude is covariant under rescaling") {
    const auto a = numeric_amplitude(kPot, 0.02);
    const auto b = numeric_amplitude(ModelPotential{200.0, 0.005, 2.0}, 0.04);
    CHECK(std::abs(a.f0 - b.f0) <= 1e-10 * std::abs(a.f0));

    AnalyticAmplitudeParams p1, p2;
    p1.c = 1.0; p1.k = 0.02; p1.q = 100.0; p1.r0 = 0.01;
    p2.c = 2.0; p2.k = 0.04; p2.q = 200.0; p2.r0 = 0.005;
    CHECK(std::abs(analytic_amplitude(p1).f0 - analytic_amplitude(p2).f0) <=
          1e-12 * std::abs(analytic_amplitude(p1).f0));
}

TEST_CASE("power-law fit: exact data, noise flag, validation") {
    std::vector<double> x, y, yn;
    for (int i = 0; i < 12; ++i) {
        x.push_back(std::pow(10.0, -3.0 + i * 0.1));
        y.push_back(3.0 * std::pow(x.back(), 2.0));
        yn.push_back(y.back() * (i % 2 ? 1.2 : 0.8));
    }
    const auto fit = fit_power_law(x, y);
    CHECK(fit.exponent == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.std_error <= 1e-12);
    CHECK_FALSE(fit.flagged);

    const auto noisy = fit_power_law(x, yn);
    CHECK(noisy.flagged);
    CHECK(noisy.max_residual > 0.05);

    CHECK_THROWS_AS(fit_power_law({1.0, 2.0}, {1.0, 2.0}), ExtractionError);
    CHECK_THROWS_AS(fit_power_law({1.0, 2.0, 3.0}, {1.0, -2.0, 3.0}),
                    ExtractionError);
}

TEST_CASE("log grid endpoints and spacing") {
    const auto g = log_spaced_grid(1e-3, 1e-1, 9);
    REQUIRE(g.size() == 9);
    CHECK(g.front() == doctest::Approx(1e-3).epsilon(1e-15));
    CHECK(g.back() == doctest::Approx(1e-1).epsilon(1e-15));
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
        CHECK(g[i + 1] / g[i] == doctest::Approx(g[1] / g[0]).epsilon(1e-12));
    }
}

TEST_CASE("analytic sweep reproduces the sixth-power law exactly") {
    const auto ks = log_spaced_grid(1e-3, 1e-1, 16);
    const auto sweep = scaling_sweep(1.0, ks, kPot, SweepMode::analytic);
    REQUIRE(sweep.rows.size() == 16);
    CHECK(sweep.amplitude_fit.exponent == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(sweep.rate_exponent == 2.0 * sweep.amplitude_fit.exponent);
    CHECK_FALSE(sweep.amplitude_fit.flagged);
    for (const auto& row : sweep.rows) {
        CHECK(row.f0 == row.f0_analytic);  // analytic mode copies the column
        CHECK(row.rate == doctest::Approx(std::norm(row.f0)).epsilon(1e-14));
        CHECK(row.k_over_c == doctest::Approx(row.k / row.c).epsilon(1e-15));
    }
    // Deterministic: a second run is bit-identical.
    const auto again = scaling_sweep(1.0, ks, kPot, SweepMode::analytic);
    for (std::size_t i = 0; i < sweep.rows.size(); ++i) {
        CHECK(sweep.rows[i].f0 == again.rows[i].f0);
        CHECK(sweep.rows[i].rate == again.rows[i].rate);
    }
}

TEST_CASE("numeric sweep agrees with the analytic exponent") {
    const auto ks = log_spaced_grid(5e-3, 1e-2, 8);
    const auto sweep =
        scaling_sweep(1.0, ks, kPot, SweepMode::numeric, MatchMode::closed_form);
    CHECK(sweep.amplitude_fit.exponent == doctest::Approx(6.0).epsilon(0.01));
    CHECK(sweep.analytic_fit.exponent == doctest::Approx(6.0).epsilon(0.001));
    for (const auto& row : sweep.rows) {
        CHECK(std::fabs(std::imag(1.0 / row.f0) - 1.0) <= 1e-12);
        // 30% envelope between pipeline and closed form in this regime.
        CHECK(std::abs(row.f0) / std::abs(row.f0_analytic) ==
              doctest::Approx(1.0).epsilon(0.3));
    }
}

TEST_CASE("sweep output is independent of the thread budget") {
    const auto ks = log_spaced_grid(5e-3, 1e-2, 8);
    const auto base = scaling_sweep(1.0, ks, kPot, SweepMode::numeric);
    ::setenv("HYPERSCATTER_THREADS", "3", 1);
    const auto capped = scaling_sweep(1.0, ks, kPot, SweepMode::numeric);
    ::unsetenv("HYPERSCATTER_THREADS");
    REQUIRE(base.rows.size() == capped.rows.size());
    for (std::size_t i = 0; i < base.rows.size(); ++i) {
        CHECK(base.rows[i].f0 == capped.rows[i].f0);
    }
}

TEST_CASE("invalid thread budget is a configuration error") {
    const auto ks = log_spaced_grid(1e-3, 1e-2, 8);
    ::setenv("HYPERSCATTER_THREADS", "zero", 1);
    CHECK_THROWS_AS(scaling_sweep(1.0, ks, kPot, SweepMode::analytic),
                    ConfigError);
    ::setenv("HYPERSCATTER_THREADS", "-2", 1);
    CHECK_THROWS_AS(scaling_sweep(1.0, ks, kPot, SweepMode::analytic),
                    ConfigError);
    ::unsetenv("HYPERSCATTER_THREADS");
}

TEST_CASE("sweep validation") {
    CHECK_THROWS_AS(
        scaling_sweep(1.0, log_spaced_grid(1e-3, 1e-2, 5), kPot,
                      SweepMode::analytic),
        ConfigError);  // too few points
    CHECK_THROWS_AS(
        scaling_sweep(1.0, log_spaced_grid(1e-3, 0.3, 8), kPot,
                      SweepMode::analytic),
        ConfigError);  // k above c/10
    CHECK_THROWS_AS(
        scaling_sweep(1.0, log_spaced_grid(1e-3, 0.05, 8), kPot,
                      SweepMode::numeric),
        ConfigError);  // numeric mode needs k <= c/50
}

TEST_CASE("rate suppression table follows the twelfth power") {
    const auto rep = gamma_report(0.02, {0.2, 0.4, 6.4, 102.4});
    REQUIRE(rep.rows.size() == 4);
    for (const auto& row : rep.rows) {
        CHECK(row.gamma == doctest::Approx(row.c / 0.02).epsilon(1e-15));
        CHECK(row.suppression ==
              doctest::Approx(std::pow(row.gamma, -12.0)).epsilon(1e-12));
        CHECK(row.ratio == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(rep.rows[1].suppression / rep.rows[0].suppression ==
          doctest::Approx(std::pow(2.0, -12.0)).epsilon(1e-12));
    CHECK_THROWS_AS(gamma_report(0.02, {0.1}), ConfigError);  // gamma < 10
    CHECK_THROWS_AS(gamma_report(0.0, {1.0}), ConfigError);
}

TEST_CASE("dimensional reduction of the pair coupling") {
    const auto c = coupling_from_3d(0.005, 1.0);
    CHECK(c.c == doctest::Approx(0.01).epsilon(1e-15));
    CHECK_FALSE(c.validity_warning);
    const auto tight = coupling_from_3d(0.5, 2.0);
    CHECK(tight.c == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(tight.validity_warning);  // l_perp < 10 a_s
    CHECK(coupling_from_3d(0.0, 1.0).c == 0.0);
    // Doubling the transverse length quarters the coupling.
    CHECK(coupling_from_3d(0.005, 2.0).c ==
          doctest::Approx(0.0025).epsilon(1e-15));
    CHECK_THROWS_AS(coupling_from_3d(-1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(coupling_from_3d(0.005, 0.0), ConfigError);
}
