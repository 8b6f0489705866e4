#include "cfheat_cli/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Multi-term Caputo-Fabrizio heat equation solver"};
    app.require_subcommand(1);

    cfheat::cli::RunOptions opts;
    std::string config;
    std::string out_dir;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config, "configuration file (JSON)")->required();
        sub->add_flag("--strict", opts.strict, "treat failed compatibility conditions as errors");
        sub->add_option("--jobs", opts.jobs, "worker threads for the per-mode solves")
            ->check(CLI::NonNegativeNumber);
        sub->add_flag("--cross-check", opts.cross_check,
                      "for k = 2 run both solvers and report their difference");
        sub->add_option("--out", out_dir, "output directory");
    };
    auto* solve = app.add_subcommand("solve", "solve, verify and write results");
    auto* validate = app.add_subcommand("validate", "check the problem without solving");
    add_common(solve);
    add_common(validate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cfheat::cli::kExitFailure;
    }
    if (!out_dir.empty()) {
        opts.out = out_dir;
    }
    if (solve->parsed()) {
        return cfheat::cli::run_solve(config, opts, std::cout, std::cerr);
    }
    return cfheat::cli::run_validate(config, opts, std::cout, std::cerr);
}
