#include "hyperscatter/emit.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hyperscatter/errors.hpp"
#include "hyperscatter/version.hpp"

namespace hyperscatter {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

std::string dirname_of(const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    if (slash == std::string::npos) return "";
    return path.substr(0, slash + 1);
}

std::string basename_of(const std::string& path) {
    const std::size_t slash = path.find_last_of('/');
    if (slash == std::string::npos) return path;
    return path.substr(slash + 1);
}

ordered_json echo_to_json(const std::string& echo) {
    ordered_json obj = ordered_json::object();
    std::istringstream in(echo);
    std::string line;
    while (std::getline(in, line)) {
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        obj[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return obj;
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string table_to_csv(const Table& t, const std::string& hash) {
    std::ostringstream out;
    out << "# config_hash=" << hash << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out << ',';
        out << t.columns[i];
    }
    out << '\n';
    for (const std::vector<double>& row : t.rows) {
        if (row.size() != t.columns.size()) {
            throw ConfigError("table_to_csv: ragged row");
        }
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    return out.str();
}

std::string table_to_json(const Table& t, const std::string& hash) {
    ordered_json doc;
    doc["config_hash"] = hash;
    doc["columns"] = t.columns;
    ordered_json rows = ordered_json::array();
    for (const std::vector<double>& row : t.rows) {
        if (row.size() != t.columns.size()) {
            throw ConfigError("table_to_json: ragged row");
        }
        ordered_json r = ordered_json::array();
        for (double v : row) r.push_back(format_double(v));
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw ConfigError("short write to '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string write_table(const std::string& stem, const std::string& fmt,
                        const Table& t, const std::string& hash) {
    const std::string path = stem + (fmt == "json" ? ".json" : ".csv");
    write_text_file(path, fmt == "json" ? table_to_json(t, hash)
                                        : table_to_csv(t, hash));
    return path;
}

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::vector<std::string>& files) {
    ordered_json doc;
    doc["tool"] = kToolName;
    doc["version"] = kToolVersion;
    doc["config_hash"] = config_hash(cfg);
    doc["config"] = echo_to_json(config_echo(cfg));
    ordered_json entries = ordered_json::object();
    for (const std::string& f : files) {
        entries[basename_of(f)] = hash_hex(fnv1a64(read_text_file(f)));
    }
    doc["files"] = std::move(entries);
    write_text_file(path, doc.dump(2) + "\n");
}

std::vector<std::string> verify_manifest(const std::string& path) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("manifest '" + path + "': " + e.what());
    }
    std::vector<std::string> problems;

    if (!doc.contains("config") || !doc.contains("config_hash") ||
        !doc.contains("files")) {
        throw ConfigError("manifest '" + path +
                          "': missing config/config_hash/files fields");
    }
    std::string echo;
    for (const auto& [key, value] : doc["config"].items()) {
        echo += key + "=" + value.get<std::string>() + "\n";
    }
    const std::string derived = hash_hex(fnv1a64(echo));
    if (derived != doc["config_hash"].get<std::string>()) {
        problems.push_back("config_hash does not match the embedded echo");
    }

    const std::string dir = dirname_of(path);
    for (const auto& [name, expected] : doc["files"].items()) {
        std::string actual;
        try {
            actual = hash_hex(fnv1a64(read_text_file(dir + name)));
        } catch (const ConfigError&) {
            problems.push_back(name + ": missing");
            continue;
        }
        if (actual != expected.get<std::string>()) {
            problems.push_back(name + ": content hash " + actual +
                               " != recorded " + expected.get<std::string>());
        }
    }
    return problems;
}

}  // namespace hyperscatter
