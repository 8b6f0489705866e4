#pragma once

#include "cfheat_cli/config.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace cfheat::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;     // I/O, config or problem error
inline constexpr int kExitValidation = 2;  // validation or residual failure

inline constexpr const char* kOutputDirEnv = "CFHEAT_OUTPUT_DIR";
inline constexpr const char* kDefaultOutputDir = "cfheat-out";

struct RunOptions {
    bool strict = false;
    unsigned jobs = 0;  // 0: hardware concurrency
    bool cross_check = false;
    std::optional<std::filesystem::path> out;
};

/// --out, then the config's output_dir, then $CFHEAT_OUTPUT_DIR, then the default.
std::filesystem::path resolve_output_dir(const std::optional<std::filesystem::path>& flag,
                                         const std::optional<std::string>& config,
                                         const char* env);

/// Shortest decimal string that reads back to the same double.
std::string format_number(double v);

/// Solves, verifies and writes solution.csv, diagnostics.json and
/// verification.json. Returns the exit status.
int run_solve(const std::filesystem::path& config, const RunOptions& opts, std::ostream& out,
              std::ostream& err);

/// Structural and compatibility checks without solving. Returns the exit status.
int run_validate(const std::filesystem::path& config, const RunOptions& opts, std::ostream& out,
                 std::ostream& err);

}  // namespace cfheat::cli
