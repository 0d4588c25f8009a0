#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hyperscatter/channels.hpp"
#include "hyperscatter/config.hpp"
#include "hyperscatter/couplings.hpp"
#include "hyperscatter/emit.hpp"
#include "hyperscatter/errors.hpp"
#include "hyperscatter/radial.hpp"
#include "hyperscatter/scattering.hpp"
#include "hyperscatter/version.hpp"
#include "hyperscatter/wkb.hpp"

#include <json.hpp>

namespace hs = hyperscatter;
using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<double> log_grid_or_point(double a, double b, int n) {
    if (n == 1 || a == b) return std::vector<double>(std::max(n, 1), a);
    return hs::log_spaced_grid(a, b, n);
}

hs::ModelPotential potential_of(const hs::RunConfig& cfg) {
    hs::ModelPotential p;
    p.q = cfg.q;
    p.r0 = cfg.r0;
    p.c = cfg.c;
    return p;
}

double default_r_min(const hs::RunConfig& cfg) {
    const double scale = cfg.c > 0.0 ? std::min(cfg.r0, 1.0 / cfg.c) : cfg.r0;
    return 1e-6 * scale;
}

ordered_json config_json(const hs::RunConfig& cfg) {
    ordered_json obj = ordered_json::object();
    std::istringstream in(hs::config_echo(cfg));
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t eq = line.find('=');
        if (eq != std::string::npos) {
            obj[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    return obj;
}

ordered_json summary_skeleton(const hs::RunConfig& cfg) {
    ordered_json doc;
    doc["tool"] = hs::kToolName;
    doc["version"] = hs::kToolVersion;
    doc["config_hash"] = hs::config_hash(cfg);
    doc["config"] = config_json(cfg);
    return doc;
}

int run_channels(const hs::RunConfig& cfg) {
    double u_lo = 1e-4, u_hi = 1e4;
    if (cfg.r_min > 0.0 && cfg.r_max > 0.0 && cfg.c > 0.0) {
        u_lo = cfg.c * cfg.r_min;
        u_hi = cfg.c * cfg.r_max;
    }
    const std::vector<double> us = hs::log_spaced_grid(u_lo, u_hi, 81);

    hs::Table t;
    t.columns = {"cR"};
    for (int n = 0; n < cfg.channels; ++n) {
        t.columns.push_back("lambda" + std::to_string(n));
    }
    t.columns.push_back("adiabatic_potential_0");
    for (double u : us) {
        std::vector<double> row{u};
        double lam0 = 0.0;
        for (int n = 0; n < cfg.channels; ++n) {
            const double lam = hs::solve_lambda(n, u).lambda;
            if (n == 0) lam0 = lam;
            row.push_back(lam);
        }
        const double R = cfg.c > 0.0 ? u / cfg.c : u;
        row.push_back(lam0 * lam0 / (R * R));
        t.rows.push_back(std::move(row));
    }

    const std::string hash = hs::config_hash(cfg);
    const std::string table_path =
        hs::write_table(cfg.output + "_channels", cfg.format, t, hash);
    hs::write_manifest(cfg.output + "_channels_manifest.json", cfg,
                       {table_path});
    std::cout << "config_hash = " << hash << "\n"
              << "wrote " << table_path << "\n";
    return 0;
}

int run_couplings(const hs::RunConfig& cfg) {
    if (!(cfg.c > 0.0)) {
        throw hs::ConfigError("couplings: c > 0 violated");
    }
    double R_lo = 1e-3 / cfg.c, R_hi = 1e3 / cfg.c;
    if (cfg.r_min > 0.0 && cfg.r_max > 0.0) {
        R_lo = cfg.r_min;
        R_hi = cfg.r_max;
    }
    const std::vector<double> grid = hs::log_spaced_grid(R_lo, R_hi, 61);
    const hs::AdiabaticityReport report =
        hs::adiabaticity_report(cfg.c, grid);

    hs::Table t;
    t.columns = {"R",       "Y00_ratio", "W00_ratio",
                 "lambda0", "lambda1",   "lambda2"};
    for (const hs::AdiabaticityRow& row : report.rows) {
        t.rows.push_back({row.R, row.ratio_y, row.ratio_w, row.lambda0,
                          row.lambda1, row.lambda2});
    }

    const std::string hash = hs::config_hash(cfg);
    const std::string table_path =
        hs::write_table(cfg.output + "_couplings", cfg.format, t, hash);
    ordered_json doc = summary_skeleton(cfg);
    doc["max_ratio_y_below_cr1"] =
        hs::format_double(report.max_ratio_y_below_cr1);
    doc["exponent_y00"] = hs::format_double(report.exponent_y00);
    doc["exponent_adiabatic"] = hs::format_double(report.exponent_adiabatic);
    const std::string summary_path = cfg.output + "_couplings_summary.json";
    hs::write_text_file(summary_path, doc.dump(2) + "\n");
    hs::write_manifest(cfg.output + "_couplings_manifest.json", cfg,
                       {table_path, summary_path});
    std::cout << "config_hash = " << hash << "\n"
              << "wrote " << table_path << "\n"
              << "wrote " << summary_path << "\n";
    return 0;
}

int run_solve(const hs::RunConfig& cfg) {
    const double R_min = cfg.r_min > 0.0 ? cfg.r_min : default_r_min(cfg);
    const double R_max = cfg.r_max > 0.0 ? cfg.r_max : 40.0 / cfg.k;
    const hs::RadialSolution sol =
        hs::integrate_radial(cfg.c, cfg.k, potential_of(cfg), R_min, R_max,
                             cfg.report_nodes, cfg.tolerance);
    const std::vector<double> residuals = hs::interval_residuals(sol);

    hs::Table t;
    t.columns = {"R", "F", "dF", "local_residual"};
    for (std::size_t i = 0; i < sol.grid.size(); ++i) {
        t.rows.push_back({sol.grid[i], sol.F[i], sol.dF[i], residuals[i]});
    }

    double max_residual = 0.0;
    for (double r : residuals) max_residual = std::max(max_residual, r);

    const std::string hash = hs::config_hash(cfg);
    const std::string table_path =
        hs::write_table(cfg.output + "_solve", cfg.format, t, hash);
    ordered_json doc = summary_skeleton(cfg);
    doc["R_min"] = hs::format_double(R_min);
    doc["R_max"] = hs::format_double(R_max);
    doc["nodes"] = sol.grid.size();
    doc["steps_accepted"] = sol.steps_accepted;
    doc["steps_rejected"] = sol.steps_rejected;
    doc["max_local_residual"] = hs::format_double(max_residual);
    const std::string summary_path = cfg.output + "_solve_summary.json";
    hs::write_text_file(summary_path, doc.dump(2) + "\n");
    hs::write_manifest(cfg.output + "_solve_manifest.json", cfg,
                       {table_path, summary_path});
    std::cout << "config_hash = " << hash << "\n"
              << "max_local_residual = " << hs::format_double(max_residual)
              << "\nwrote " << table_path << "\n"
              << "wrote " << summary_path << "\n";
    return 0;
}

int run_amplitude(const hs::RunConfig& cfg) {
    hs::AnalyticAmplitudeParams ap;
    ap.c = cfg.c;
    ap.k = cfg.k;
    ap.q = cfg.q;
    ap.r0 = cfg.r0;
    ap.b = cfg.b;
    ap.omega_pin = cfg.pin_omega;
    const hs::AnalyticAmplitude an = hs::analytic_amplitude(ap);

    const hs::MatchMode match = cfg.match == "numeric"
                                    ? hs::MatchMode::numeric
                                    : hs::MatchMode::closed_form;
    const hs::Amplitude num =
        hs::numeric_amplitude(potential_of(cfg), cfg.k, match);

    std::cout << "config_hash = " << hs::config_hash(cfg) << "\n"
              << "f0_re = " << hs::format_double(num.f0.real()) << "\n"
              << "f0_im = " << hs::format_double(num.f0.imag()) << "\n"
              << "abs_f0 = " << hs::format_double(std::abs(num.f0)) << "\n"
              << "coeff_ratio = " << hs::format_double(num.coeff_ratio)
              << "\n"
              << "stability = " << hs::format_double(num.stability) << "\n"
              << "f0_analytic_re = " << hs::format_double(an.f0.real())
              << "\n"
              << "f0_analytic_im = " << hs::format_double(an.f0.imag())
              << "\n"
              << "abs_f0_analytic = " << hs::format_double(std::abs(an.f0))
              << "\n"
              << "omega = " << hs::format_double(an.omega) << "\n"
              << "bracket = " << hs::format_double(an.bracket) << "\n"
              << "near_resonant = " << (an.near_resonant ? 1 : 0) << "\n";
    if (an.near_resonant) {
        std::cerr << "warning: ln(4 beta r0) + J is close to zero; the "
                     "amplitude approaches the unitarity circle\n";
    }
    return 0;
}

int run_xi(const hs::RunConfig& cfg) {
    const hs::XiResult xi = hs::xi_constant();
    std::cout << "config_hash = " << hs::config_hash(cfg) << "\n"
              << "Xi = " << hs::format_double(xi.xi) << "\n"
              << "Omega = " << hs::format_double(xi.omega) << "\n"
              << "extrapolation_residual = "
              << hs::format_double(xi.extrapolation_residual) << "\n"
              << "cR,exponent_minus_3lncR,tail_corrected\n";
    for (const auto& row : xi.table) {
        std::cout << hs::format_double(row.cR) << ','
                  << hs::format_double(row.raw) << ','
                  << hs::format_double(row.corrected) << "\n";
    }
    std::cout << "Xi_connection = "
              << hs::format_double(hs::xi_connection_constant()) << "\n";
    return 0;
}

int run_sweep(const hs::RunConfig& cfg) {
    const std::vector<double> ks =
        hs::log_spaced_grid(cfg.k_min, cfg.k_max, cfg.k_count);
    const hs::SweepMode mode = cfg.mode == "numeric" ? hs::SweepMode::numeric
                               : cfg.mode == "both"  ? hs::SweepMode::both
                                                     : hs::SweepMode::analytic;
    const hs::MatchMode match = cfg.match == "numeric"
                                    ? hs::MatchMode::numeric
                                    : hs::MatchMode::closed_form;
    const hs::SweepResult result = hs::scaling_sweep(
        cfg.c, ks, potential_of(cfg), mode, match, cfg.pin_omega);

    hs::Table t;
    t.columns = {"k",      "c",    "k_over_c",       "re_f0",
                 "im_f0",  "abs_f0", "rate",         "f0_analytic_re",
                 "f0_analytic_im"};
    for (const hs::SweepRow& row : result.rows) {
        t.rows.push_back({row.k, row.c, row.k_over_c, row.f0.real(),
                          row.f0.imag(), std::abs(row.f0), row.rate,
                          row.f0_analytic.real(), row.f0_analytic.imag()});
    }

    const std::string hash = hs::config_hash(cfg);
    const std::string table_path =
        hs::write_table(cfg.output + "_sweep", cfg.format, t, hash);
    ordered_json doc = summary_skeleton(cfg);
    doc["mode"] = cfg.mode;
    doc["match"] = cfg.match;
    doc["omega"] = hs::format_double(result.omega);
    doc["rows"] = result.rows.size();
    doc["amplitude_exponent"] =
        hs::format_double(result.amplitude_fit.exponent);
    doc["amplitude_exponent_std_error"] =
        hs::format_double(result.amplitude_fit.std_error);
    doc["amplitude_fit_max_residual"] =
        hs::format_double(result.amplitude_fit.max_residual);
    doc["amplitude_fit_flagged"] = result.amplitude_fit.flagged;
    doc["analytic_exponent"] =
        hs::format_double(result.analytic_fit.exponent);
    doc["analytic_exponent_std_error"] =
        hs::format_double(result.analytic_fit.std_error);
    doc["rate_exponent"] = hs::format_double(result.rate_exponent);
    const std::string summary_path = cfg.output + "_sweep_summary.json";
    hs::write_text_file(summary_path, doc.dump(2) + "\n");
    hs::write_manifest(cfg.output + "_sweep_manifest.json", cfg,
                       {table_path, summary_path});
    std::cout << "config_hash = " << hash << "\n"
              << "amplitude_exponent = "
              << hs::format_double(result.amplitude_fit.exponent) << "\n"
              << "rate_exponent = "
              << hs::format_double(result.rate_exponent) << "\n"
              << "wrote " << table_path << "\n"
              << "wrote " << summary_path << "\n";
    return 0;
}

int run_gamma(const hs::RunConfig& cfg) {
    const std::vector<double> cs =
        log_grid_or_point(cfg.c_min, cfg.c_max, cfg.c_count);
    const hs::GammaReport report = hs::gamma_report(cfg.n1d, cs);

    hs::Table t;
    t.columns = {"c", "gamma", "suppression", "g3sq_reference", "ratio"};
    for (const hs::GammaRow& row : report.rows) {
        t.rows.push_back({row.c, row.gamma, row.suppression,
                          row.g3sq_reference, row.ratio});
    }
    const std::string hash = hs::config_hash(cfg);
    const std::string table_path =
        hs::write_table(cfg.output + "_gamma", cfg.format, t, hash);
    hs::write_manifest(cfg.output + "_gamma_manifest.json", cfg,
                       {table_path});
    std::cout << "config_hash = " << hash << "\n"
              << "wrote " << table_path << "\n";
    return 0;
}

int run_verify_manifest(const std::string& path) {
    const std::vector<std::string> problems = hs::verify_manifest(path);
    if (problems.empty()) {
        std::cout << "manifest OK: " << path << "\n";
        return 0;
    }
    for (const std::string& p : problems) {
        std::cerr << "manifest mismatch: " << p << "\n";
    }
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperspherical three-body scattering toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "line-oriented key = value configuration file");

    std::optional<double> f_c, f_q, f_r0, f_k, f_k_min, f_k_max, f_r_min,
        f_r_max, f_tolerance, f_b, f_pin_omega, f_n1d, f_c_min, f_c_max;
    std::optional<int> f_k_count, f_channels, f_c_count, f_report_nodes;
    std::optional<std::string> f_mode, f_match, f_format, f_output;

    app.add_option("--c", f_c, "pair coupling");
    app.add_option("--q", f_q, "model potential depth parameter");
    app.add_option("--r0", f_r0, "model potential range");
    app.add_option("--k", f_k, "momentum for solve/amplitude");
    app.add_option("--k-min", f_k_min, "sweep momentum lower bound");
    app.add_option("--k-max", f_k_max, "sweep momentum upper bound");
    app.add_option("--k-count", f_k_count, "sweep point count");
    app.add_option("--channels", f_channels, "adiabatic channel count");
    app.add_option("--r-min", f_r_min, "radial span lower bound");
    app.add_option("--r-max", f_r_max, "radial span upper bound");
    app.add_option("--tolerance", f_tolerance,
                   "radial integrator relative tolerance");
    app.add_option("--report-nodes", f_report_nodes,
                   "radial output grid size");
    app.add_option("--b", f_b, "short-distance admixture constant");
    app.add_option("--pin-omega", f_pin_omega,
                   "pin the amplitude constant Omega");
    app.add_option("--n1d", f_n1d, "line density for the gamma report");
    app.add_option("--c-min", f_c_min, "gamma report coupling lower bound");
    app.add_option("--c-max", f_c_max, "gamma report coupling upper bound");
    app.add_option("--c-count", f_c_count, "gamma report point count");
    app.add_option("--mode", f_mode, "sweep mode: numeric|analytic|both");
    app.add_option("--match", f_match, "inner matching: closed|numeric");
    app.add_option("--format", f_format, "table format: csv|json");
    app.add_option("--output,-o", f_output, "output file prefix");

    CLI::App* sc_channels = app.add_subcommand(
        "channels", "tabulate channel eigenvalues against cR");
    CLI::App* sc_couplings = app.add_subcommand(
        "couplings", "tabulate nonadiabatic coupling ratios");
    CLI::App* sc_solve =
        app.add_subcommand("solve", "integrate the lowest radial channel");
    CLI::App* sc_amplitude = app.add_subcommand(
        "amplitude", "partial amplitude at one momentum");
    CLI::App* sc_xi = app.add_subcommand(
        "xi", "quasiclassical connection constant and convergence table");
    CLI::App* sc_sweep = app.add_subcommand(
        "sweep", "amplitude scaling study over a momentum grid");
    CLI::App* sc_gamma = app.add_subcommand(
        "gamma", "rate suppression table against the interaction parameter");
    CLI::App* sc_verify = app.add_subcommand(
        "verify-manifest", "re-hash files recorded in a run manifest");
    std::string manifest_path;
    sc_verify->add_option("manifest", manifest_path, "manifest JSON path")
        ->required();
    for (CLI::App* sc :
         {sc_channels, sc_couplings, sc_solve, sc_amplitude, sc_xi, sc_sweep,
          sc_gamma, sc_verify}) {
        sc->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        hs::RunConfig cfg;
        if (!config_path.empty()) cfg = hs::parse_config_file(config_path);
        if (f_c) cfg.c = *f_c;
        if (f_q) cfg.q = *f_q;
        if (f_r0) cfg.r0 = *f_r0;
        if (f_k) cfg.k = *f_k;
        if (f_k_min) cfg.k_min = *f_k_min;
        if (f_k_max) cfg.k_max = *f_k_max;
        if (f_k_count) cfg.k_count = *f_k_count;
        if (f_channels) cfg.channels = *f_channels;
        if (f_r_min) cfg.r_min = *f_r_min;
        if (f_r_max) cfg.r_max = *f_r_max;
        if (f_tolerance) cfg.tolerance = *f_tolerance;
        if (f_report_nodes) cfg.report_nodes = *f_report_nodes;
        if (f_b) cfg.b = *f_b;
        if (f_pin_omega) cfg.pin_omega = *f_pin_omega;
        if (f_n1d) cfg.n1d = *f_n1d;
        if (f_c_min) cfg.c_min = *f_c_min;
        if (f_c_max) cfg.c_max = *f_c_max;
        if (f_c_count) cfg.c_count = *f_c_count;
        if (f_mode) cfg.mode = *f_mode;
        if (f_match) cfg.match = *f_match;
        if (f_format) cfg.format = *f_format;
        if (f_output) cfg.output = *f_output;
        hs::validate_config(cfg);

        if (sc_channels->parsed()) return run_channels(cfg);
        if (sc_couplings->parsed()) return run_couplings(cfg);
        if (sc_solve->parsed()) return run_solve(cfg);
        if (sc_amplitude->parsed()) return run_amplitude(cfg);
        if (sc_xi->parsed()) return run_xi(cfg);
        if (sc_sweep->parsed()) return run_sweep(cfg);
        if (sc_gamma->parsed()) return run_gamma(cfg);
        if (sc_verify->parsed()) return run_verify_manifest(manifest_path);
        std::cerr << "error: no subcommand\n";
        return 2;
    } catch (const hs::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const hs::ConvergenceError& e) {
        std::cerr << "convergence error: " << e.what() << "\n";
        return 3;
    } catch (const hs::ResonanceError& e) {
        std::cerr << "resonance error: " << e.what() << "\n";
        return 4;
    } catch (const hs::ExtractionError& e) {
        std::cerr << "extraction error: " << e.what() << "\n";
        return 5;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
