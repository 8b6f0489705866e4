#pragma once

#include "cfheat/ode_reduction.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfheat::cli {

/// Unreadable, malformed or schema-violating configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SolverChoice { automatic, closed_form, companion };

/// Flat JSON object; every key except alpha, k, lambdas and forcing is optional.
struct RunConfig {
    double alpha = 0.5;
    int k = 2;
    std::vector<double> lambdas;
    double q = 1.0;
    std::string forcing;
    std::vector<std::vector<double>> initial;  // empty: zero data
    int modes = 8;
    std::size_t nt = 64;
    std::size_t nx = 64;
    SolverChoice solver = SolverChoice::automatic;
    std::optional<std::string> output_dir;

    double mode_residual_tol = 1e-4;
    double grid_residual_tol = 1e-3;
    double compat_tol = 1e-8;
    double cross_check_tol = 1e-6;
    std::size_t quadrature_nodes = 4097;
    bool richardson = true;
    std::size_t time_steps = 4096;
    std::size_t companion_steps = 16384;
    std::size_t forcing_samples = 512;
    std::size_t x_nodes = 1025;
};

RunConfig parse_config(const std::string& text);

/// Reads the file verbatim; throws ConfigError when it cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Lower-case hex SHA-256 of the raw bytes.
std::string sha256_hex(const std::string& bytes);

/// Throws ProblemError or ParseError for invalid problems.
ProblemSpec to_problem(const RunConfig& config);

std::string_view to_string(SolverChoice s);

}  // namespace cfheat::cli
