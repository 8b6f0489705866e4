#include "cfheat_cli/config.hpp"
#include "cfheat_cli/pipeline.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cfheat;
using namespace cfheat::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("cfheat_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
    const fs::path p = dir / "config.json";
    std::ofstream(p) << body;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

const char* kBase = R"j({"alpha": 0.5, "k": 2, "lambdas": [0, 0, 1], "q": 1, "modes": 4, "nt": 8, "nx": 16)j";

}  // namespace

TEST(Config, ParsesAllKeys) {
    const auto c = parse_config(R"j({"alpha": 0.3, "k": 1, "lambdas": [1, 2], "q": 2, "forcing": "t^4*sin(pi*x)",
        "initial": [[0, 0], []], "modes": 3, "nt": 10, "nx": 20, "solver": "companion", "output_dir": "o",
        "mode_residual_tol": 1e-5, "grid_residual_tol": 1e-2, "compat_tol": 1e-7, "cross_check_tol": 1e-5,
        "quadrature_nodes": 1025, "richardson": false, "time_steps": 512, "companion_steps": 1024,
        "forcing_samples": 64, "x_nodes": 513})j");
    EXPECT_EQ(c.k, 1);
    EXPECT_EQ(c.solver, SolverChoice::companion);
    EXPECT_EQ(c.initial.size(), 2u);
    EXPECT_EQ(*c.output_dir, "o");
    EXPECT_EQ(c.x_nodes, 513u);
    EXPECT_FALSE(c.richardson);
}

TEST(Config, StrictRejection) {
    EXPECT_THROW(parse_config(R"j({"alpha": 0.5, "k": 2, "lambdas": [0,0,1], "forcing": "0", "extra": 1})j"), ConfigError);
    EXPECT_THROW(parse_config(R"j({"alpha": 0.5, "k": 2, "lambdas": [0,0,1]})j"), ConfigError);
    EXPECT_THROW(parse_config(R"j({"alpha": "half", "k": 2, "lambdas": [0,0,1], "forcing": "0"})j"), ConfigError);
    EXPECT_THROW(parse_config(R"j({"alpha": 0.5, "k": 2.5, "lambdas": [0,0,1], "forcing": "0"})j"), ConfigError);
    EXPECT_THROW(parse_config(R"j({"alpha": 0.5, "k": 2, "lambdas": [0,0,1], "forcing": "0", "solver": "rk"})j"), ConfigError);
    EXPECT_THROW(parse_config("not json"), ConfigError);
}

TEST(Config, ProblemErrors) {
    auto c = parse_config(R"j({"alpha": 0.5, "k": 2, "lambdas": [1, 1, 0], "forcing": "0"})j");
    EXPECT_THROW(to_problem(c), ProblemError);
    c = parse_config(R"j({"alpha": 0.5, "k": 2, "lambdas": [0, 0, 1], "forcing": "sin("})j");
    EXPECT_THROW(to_problem(c), ParseError);
    c = parse_config(R"j({"alpha": 1.5, "k": 2, "lambdas": [0, 0, 1], "forcing": "0"})j");
    EXPECT_THROW(to_problem(c), DomainError);
}

TEST(Config, Sha256) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(OutputDir, Precedence) {
    EXPECT_EQ(resolve_output_dir(fs::path("flag"), std::string("cfg"), "env"), fs::path("flag"));
    EXPECT_EQ(resolve_output_dir(std::nullopt, std::string("cfg"), "env"), fs::path("cfg"));
    EXPECT_EQ(resolve_output_dir(std::nullopt, std::nullopt, "env"), fs::path("env"));
    EXPECT_EQ(resolve_output_dir(std::nullopt, std::nullopt, nullptr), fs::path(kDefaultOutputDir));
    EXPECT_EQ(resolve_output_dir(std::nullopt, std::nullopt, ""), fs::path(kDefaultOutputDir));
}

TEST(FormatNumber, ShortestRoundTrip) {
    EXPECT_EQ(format_number(0.1), "0.1");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1e-20), "1e-20");
    const double v = 0.1 + 0.2;
    EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(RunSolve, ZeroForcing) {
    const auto dir = scratch("zero");
    const auto cfg = write_config(dir, std::string(kBase) + R"j(, "forcing": "0", "modes": 8})j");
    std::ostringstream out, err;
    RunOptions o;
    o.out = dir / "out";
    o.jobs = 2;
    EXPECT_EQ(run_solve(cfg, o, out, err), kExitOk) << err.str();
    const auto csv = slurp(dir / "out" / "solution.csv");
    EXPECT_EQ(csv.rfind("# config_sha256=", 0), 0u);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    std::getline(lines, line);
    EXPECT_EQ(line.rfind("t,0,0.0625,", 0), 0u);
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        EXPECT_EQ(line.find_first_not_of("0,.", line.find(',')), std::string::npos) << line;
    }
    EXPECT_EQ(rows, 9);
    EXPECT_TRUE(fs::exists(dir / "out" / "diagnostics.json"));
    EXPECT_TRUE(fs::exists(dir / "out" / "verification.json"));
}

TEST(RunSolve, SingleModeDiagnostics) {
    const auto dir = scratch("single");
    const auto cfg = write_config(dir, std::string(kBase) + R"j(, "forcing": "t^4*sin(pi*x)"})j");
    std::ostringstream out, err;
    RunOptions o;
    o.out = dir / "out";
    o.cross_check = true;
    ASSERT_EQ(run_solve(cfg, o, out, err), kExitOk) << err.str();
    const auto diag = slurp(dir / "out" / "diagnostics.json");
    EXPECT_NE(diag.find("7.934802200544679"), std::string::npos);
    EXPECT_NE(diag.find("one_real_conjugate_pair"), std::string::npos);
    EXPECT_NE(slurp(dir / "out" / "verification.json").find("\"cross_check\""), std::string::npos);
}

TEST(RunSolve, LeadingCoefficientError) {
    const auto dir = scratch("lead");
    const auto cfg = write_config(dir, R"j({"alpha": 0.5, "k": 2, "lambdas": [1, 1, 0], "forcing": "0"})j");
    std::ostringstream out, err;
    RunOptions o;
    o.out = dir / "out";
    EXPECT_EQ(run_solve(cfg, o, out, err), kExitFailure);
    EXPECT_NE(err.str().find("leading coefficient lambda_k must be nonzero"), std::string::npos);
    EXPECT_FALSE(fs::exists(dir / "out"));
}

TEST(RunSolve, MissingFile) {
    std::ostringstream out, err;
    EXPECT_EQ(run_solve("/nonexistent/cfheat.json", {}, out, err), kExitFailure);
}

TEST(RunSolve, StrictCompatibilityFailure) {
    const auto dir = scratch("strict");
    const auto cfg = write_config(dir, std::string(kBase) + R"j(, "forcing": "t*sin(pi*x)"})j");
    RunOptions o;
    o.out = dir / "lenient";
    std::ostringstream out, err;
    EXPECT_EQ(run_solve(cfg, o, out, err), kExitOk) << err.str();
    EXPECT_NE(err.str().find("warning"), std::string::npos);
    o.out = dir / "strict";
    o.strict = true;
    EXPECT_EQ(run_solve(cfg, o, out, err), kExitValidation);
    EXPECT_TRUE(fs::exists(dir / "strict" / "verification.json"));
}

TEST(RunSolve, ModeCapIsAnError) {
    const auto dir = scratch("cap");
    const auto cfg = write_config(dir, R"j({"alpha": 0.5, "k": 2, "lambdas": [0, 0, 1], "forcing": "0", "modes": 40, "x_nodes": 257})j");
    std::ostringstream out, err;
    RunOptions o;
    o.out = dir / "out";
    EXPECT_EQ(run_solve(cfg, o, out, err), kExitFailure);
}

TEST(RunSolve, CompanionForGeneralOrder) {
    const auto dir = scratch("k1");
    const auto cfg = write_config(dir, R"j({"alpha": 0.4, "k": 1, "lambdas": [1, 1], "forcing": "t^4*sin(pi*x)", "modes": 2, "nt": 8, "nx": 16})j");
    std::ostringstream out, err;
    RunOptions o;
    o.out = dir / "out";
    EXPECT_EQ(run_solve(cfg, o, out, err), kExitOk) << err.str();
    EXPECT_NE(slurp(dir / "out" / "diagnostics.json").find("\"companion\""), std::string::npos);
}

TEST(RunValidate, Examples) {
    const auto dir = scratch("validate");
    std::ostringstream out, err;
    auto cfg = write_config(dir, std::string(kBase) + R"j(, "forcing": "t^4*sin(pi*x)"})j");
    EXPECT_EQ(run_validate(cfg, {}, out, err), kExitOk);
    EXPECT_EQ(out.str().find("FAIL"), std::string::npos);

    out.str("");
    cfg = write_config(dir, std::string(kBase) + R"j(, "forcing": "t*sin(pi*x)"})j");
    EXPECT_EQ(run_validate(cfg, {}, out, err), kExitValidation);
    EXPECT_NE(out.str().find("FAIL df/dt(0,x) = 0"), std::string::npos);

    out.str("");
    cfg = write_config(dir, std::string(kBase) + R"j(, "forcing": "x*(1-x)"})j");
    EXPECT_EQ(run_validate(cfg, {}, out, err), kExitValidation);
    EXPECT_NE(out.str().find("FAIL d2f/dx2(t,0) = 0"), std::string::npos);
}

TEST(Executable, ExitCodesAndEnvironment) {
    const auto dir = scratch("exe");
    const auto cfg = write_config(dir, std::string(kBase) + R"j(, "forcing": "0"})j");
    const std::string exe = CFHEAT_CLI_PATH;
    const std::string env_dir = (dir / "from_env").string();
    const std::string cmd = "CFHEAT_OUTPUT_DIR='" + env_dir + "' '" + exe + "' solve '" + cfg.string() + "' > /dev/null 2>&1";
    EXPECT_EQ(WEXITSTATUS(std::system(cmd.c_str())), 0);
    EXPECT_TRUE(fs::exists(dir / "from_env" / "solution.csv"));
    const std::string bad = "'" + exe + "' solve > /dev/null 2>&1";
    EXPECT_EQ(WEXITSTATUS(std::system(bad.c_str())), 1);
}
