#pragma once

#include <string>
#include <vector>

#include "hyperscatter/config.hpp"

namespace hyperscatter {

// Fixed float rendering used by every emitted artifact: 17 significant
// digits, '.' decimal separator, no locale dependence.
std::string format_double(double v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// CSV with a '# config_hash=<hash>' first line, a header row, and '\n'
// line endings throughout.
std::string table_to_csv(const Table& t, const std::string& hash);

// The same table as a JSON document {config_hash, columns, rows}.
std::string table_to_json(const Table& t, const std::string& hash);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Writes the table as <stem>.csv or <stem>.json per fmt; returns the path.
std::string write_table(const std::string& stem, const std::string& fmt,
                        const Table& t, const std::string& hash);

// JSON manifest with the canonical config echo, tool version, and FNV-1a
// content hashes of the listed files (paths are recorded relative to the
// manifest's directory).
void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::vector<std::string>& files);

// Re-hashes every file listed in a manifest and re-derives the config hash
// from the embedded echo; returns human-readable mismatch descriptions
// (empty means the manifest verifies).
std::vector<std::string> verify_manifest(const std::string& path);

}  // namespace hyperscatter
