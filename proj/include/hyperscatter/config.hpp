#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hyperscatter {

// Flat run configuration shared by all subcommands. Sources are merged in
// the order: built-in defaults, then a key=value config file, then command
// line flags (later sources win).
struct RunConfig {
    double c = 1.0;          // pair coupling (inverse length)
    double q = 100.0;        // well depth parameter of the model potential
    double r0 = 0.01;        // well range
    double k = 0.02;         // single-solve momentum
    double k_min = 1e-3;     // sweep momentum grid (log-spaced, inclusive)
    double k_max = 1e-1;
    int k_count = 16;
    int channels = 3;        // number of adiabatic channels in reports
    double r_min = 0.0;      // radial span; 0 selects the documented default
    double r_max = 0.0;
    double tolerance = 1e-11;  // radial integrator relative tolerance
    int report_nodes = 600;    // radial output grid size
    double b = 0.0;            // short-distance admixture constant
    double pin_omega = 0.0;    // > 0: pin the amplitude constant Omega
    double n1d = 0.02;         // line density for the gamma report
    double c_min = 0.2;        // coupling grid for the gamma report
    double c_max = 102.4;
    int c_count = 10;
    std::string mode = "analytic";  // sweep: numeric | analytic | both
    std::string match = "closed";   // inner matching: closed | numeric
    std::string format = "csv";     // table output: csv | json
    std::string output = "hyperscatter";  // output file prefix
};

// Parses a line-oriented "key = value" file ('#' starts a comment, blank
// lines ignored). Unknown keys and malformed values raise ConfigError.
RunConfig parse_config_file(const std::string& path);

// Applies one key=value pair; shared by the file parser and flag handling.
void apply_key_value(RunConfig& cfg, const std::string& key,
                     const std::string& value);

// Checks every invariant, naming the violated inequality in the message.
void validate_config(const RunConfig& cfg);

// Canonical echo: one "key=value" line per key in fixed order, 17
// significant digits. The output prefix is deliberately excluded - the
// echo (and thus the hash) identifies the computation, not where its
// files land.
std::string config_echo(const RunConfig& cfg);

// FNV-1a 64-bit hash.
std::uint64_t fnv1a64(std::string_view bytes);

// Hash of the canonical echo as 16 lowercase hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace hyperscatter
