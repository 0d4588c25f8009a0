#pragma once

#include <stdexcept>
#include <string>

namespace hyperscatter {

// Error taxonomy mirrors the CLI exit codes: config errors exit 2, solver
// non-convergence 3, resonance poles 4, extraction instability 5.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ResonanceError : std::runtime_error {
    explicit ResonanceError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ExtractionError : std::runtime_error {
    explicit ExtractionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace hyperscatter
