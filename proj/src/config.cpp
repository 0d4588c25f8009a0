#include "hyperscatter/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hyperscatter/errors.hpp"

namespace hyperscatter {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has non-numeric value '" +
                          value + "'");
    }
    if (used != value.size()) {
        throw ConfigError("config: key '" + key + "' has trailing junk in '" +
                          value + "'");
    }
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(value, &used);
    } catch (const std::exception&) {
        throw ConfigError("config: key '" + key + "' has non-integer value '" +
                          value + "'");
    }
    if (used != value.size()) {
        throw ConfigError("config: key '" + key + "' has trailing junk in '" +
                          value + "'");
    }
    return static_cast<int>(v);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt(int v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%d", v);
    return buf;
}

}  // namespace

void apply_key_value(RunConfig& cfg, const std::string& key,
                     const std::string& value) {
    if (key == "c") cfg.c = parse_double(key, value);
    else if (key == "q") cfg.q = parse_double(key, value);
    else if (key == "r0") cfg.r0 = parse_double(key, value);
    else if (key == "k") cfg.k = parse_double(key, value);
    else if (key == "k_min") cfg.k_min = parse_double(key, value);
    else if (key == "k_max") cfg.k_max = parse_double(key, value);
    else if (key == "k_count") cfg.k_count = parse_int(key, value);
    else if (key == "channels") cfg.channels = parse_int(key, value);
    else if (key == "r_min") cfg.r_min = parse_double(key, value);
    else if (key == "r_max") cfg.r_max = parse_double(key, value);
    else if (key == "tolerance") cfg.tolerance = parse_double(key, value);
    else if (key == "report_nodes") cfg.report_nodes = parse_int(key, value);
    else if (key == "b") cfg.b = parse_double(key, value);
    else if (key == "pin_omega") cfg.pin_omega = parse_double(key, value);
    else if (key == "n1d") cfg.n1d = parse_double(key, value);
    else if (key == "c_min") cfg.c_min = parse_double(key, value);
    else if (key == "c_max") cfg.c_max = parse_double(key, value);
    else if (key == "c_count") cfg.c_count = parse_int(key, value);
    else if (key == "mode") cfg.mode = value;
    else if (key == "match") cfg.match = value;
    else if (key == "format") cfg.format = value;
    else if (key == "output") cfg.output = value;
    else throw ConfigError("config: unknown key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open file '" + path + "'");
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const std::size_t eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not of the form key = value");
        }
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " has an empty key or value");
        }
        apply_key_value(cfg, key, value);
    }
    return cfg;
}

void validate_config(const RunConfig& cfg) {
    if (!(cfg.c >= 0.0)) throw ConfigError("config: c >= 0 violated");
    if (!(cfg.q > 0.0)) throw ConfigError("config: q > 0 violated");
    if (!(cfg.r0 > 0.0)) throw ConfigError("config: r0 > 0 violated");
    if (!(cfg.r0 * cfg.c <= 0.05)) {
        throw ConfigError("config: r0*c <= 0.05 violated (r0*c = " +
                          fmt(cfg.r0 * cfg.c) + ")");
    }
    if (!(cfg.k > 0.0)) throw ConfigError("config: k > 0 violated");
    if (!(cfg.k_min > 0.0 && cfg.k_min < cfg.k_max)) {
        throw ConfigError("config: 0 < k_min < k_max violated");
    }
    if (cfg.k_count < 8) throw ConfigError("config: k_count >= 8 violated");
    if (cfg.channels < 1 || cfg.channels > 8) {
        throw ConfigError("config: 1 <= channels <= 8 violated");
    }
    if (cfg.r_min < 0.0 || cfg.r_max < 0.0) {
        throw ConfigError("config: r_min >= 0 and r_max >= 0 violated");
    }
    if (cfg.r_min > 0.0 && cfg.r_max > 0.0 && !(cfg.r_min < cfg.r_max)) {
        throw ConfigError("config: r_min < r_max violated");
    }
    if (!(cfg.tolerance >= 1e-14 && cfg.tolerance <= 1e-6)) {
        throw ConfigError("config: 1e-14 <= tolerance <= 1e-6 violated");
    }
    if (cfg.report_nodes < 64) {
        throw ConfigError("config: report_nodes >= 64 violated");
    }
    if (!(std::abs(cfg.b) <= 1.0)) {
        throw ConfigError("config: |b| <= 1 violated");
    }
    if (cfg.pin_omega < 0.0) {
        throw ConfigError("config: pin_omega >= 0 violated");
    }
    if (!(cfg.n1d > 0.0)) throw ConfigError("config: n1d > 0 violated");
    if (!(cfg.c_min > 0.0 && cfg.c_min <= cfg.c_max)) {
        throw ConfigError("config: 0 < c_min <= c_max violated");
    }
    if (cfg.c_count < 1) throw ConfigError("config: c_count >= 1 violated");
    if (cfg.mode != "numeric" && cfg.mode != "analytic" &&
        cfg.mode != "both") {
        throw ConfigError(
            "config: mode must be one of numeric|analytic|both");
    }
    if (cfg.match != "closed" && cfg.match != "numeric") {
        throw ConfigError("config: match must be one of closed|numeric");
    }
    if (cfg.format != "csv" && cfg.format != "json") {
        throw ConfigError("config: format must be one of csv|json");
    }
    if (cfg.output.empty()) {
        throw ConfigError("config: output prefix must be non-empty");
    }
}

std::string config_echo(const RunConfig& cfg) {
    std::ostringstream out;
    out << "b=" << fmt(cfg.b) << '\n';
    out << "c=" << fmt(cfg.c) << '\n';
    out << "c_count=" << fmt(cfg.c_count) << '\n';
    out << "c_max=" << fmt(cfg.c_max) << '\n';
    out << "c_min=" << fmt(cfg.c_min) << '\n';
    out << "channels=" << fmt(cfg.channels) << '\n';
    out << "format=" << cfg.format << '\n';
    out << "k=" << fmt(cfg.k) << '\n';
    out << "k_count=" << fmt(cfg.k_count) << '\n';
    out << "k_max=" << fmt(cfg.k_max) << '\n';
    out << "k_min=" << fmt(cfg.k_min) << '\n';
    out << "match=" << cfg.match << '\n';
    out << "mode=" << cfg.mode << '\n';
    out << "n1d=" << fmt(cfg.n1d) << '\n';
    out << "pin_omega=" << fmt(cfg.pin_omega) << '\n';
    out << "q=" << fmt(cfg.q) << '\n';
    out << "r0=" << fmt(cfg.r0) << '\n';
    out << "r_max=" << fmt(cfg.r_max) << '\n';
    out << "r_min=" << fmt(cfg.r_min) << '\n';
    out << "report_nodes=" << fmt(cfg.report_nodes) << '\n';
    out << "tolerance=" << fmt(cfg.tolerance) << '\n';
    return out.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash(const RunConfig& cfg) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_echo(cfg))));
    return buf;
}

}  // namespace hyperscatter
