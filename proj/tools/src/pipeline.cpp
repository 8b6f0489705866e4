#include "cfheat_cli/pipeline.hpp"

#include "cfheat/cubic.hpp"
#include "cfheat/solution_grid.hpp"
#include "cfheat/spectral.hpp"
#include "cfheat/temporal_solver.hpp"
#include "cfheat/verifier.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <thread>

namespace cfheat::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Prepared {
    RunConfig config;
    std::string hash;
    ProblemSpec spec;
    SolverKind solver = SolverKind::closed_form;
};

Prepared prepare(const fs::path& path) {
    Prepared p;
    const std::string text = read_file(path);
    p.hash = sha256_hex(text);
    p.config = parse_config(text);
    p.spec = to_problem(p.config);
    const int cap = max_resolved_mode(p.config.x_nodes);
    if (p.spec.modes > cap) {
        throw ProblemError("M = " + std::to_string(p.spec.modes) + " exceeds the resolved mode cap " +
                           std::to_string(cap) + " for x_nodes = " + std::to_string(p.config.x_nodes));
    }
    switch (p.config.solver) {
    case SolverChoice::automatic:
        p.solver = p.spec.k == 2 ? SolverKind::closed_form : SolverKind::companion;
        break;
    case SolverChoice::closed_form:
        if (p.spec.k != 2) {
            throw ProblemError("closed-form solver requires k = 2");
        }
        p.solver = SolverKind::closed_form;
        break;
    case SolverChoice::companion:
        p.solver = SolverKind::companion;
        break;
    }
    return p;
}

struct Checks {
    CompatibilityReport compatibility;
    ConditionCheck consistency;

    bool passed() const { return compatibility.passed() && consistency.passed; }
};

// At t = 0 every CF derivative vanishes, so the modal equation forces
// (m pi)^2 T_m(0) = f_m(0).
Checks run_checks(const Prepared& p) {
    Checks c;
    c.compatibility = validate_compatibility(p.spec.forcing, p.config.compat_tol);
    const auto f0 = sine_coefficients(p.spec.forcing, p.spec.modes, 0.0, {p.config.x_nodes});
    c.consistency.name = "(m pi)^2 T_m(0) = f_m(0)";
    for (int m = 1; m <= p.spec.modes; ++m) {
        const double w = std::pow(static_cast<double>(m) * std::numbers::pi, 2);
        const double fm = f0[static_cast<std::size_t>(m - 1)];
        const double v = std::abs(w * p.spec.initial_data(m)[0] - fm) / std::max(1.0, std::abs(fm));
        c.consistency.max_violation = std::max(c.consistency.max_violation, v);
    }
    c.consistency.passed = c.consistency.max_violation <= p.config.compat_tol;
    return c;
}

json condition_json(const ConditionCheck& c) {
    return {{"name", c.name}, {"max_violation", c.max_violation}, {"passed", c.passed}};
}

json checks_json(const Checks& c) {
    json conds = json::array();
    for (const auto& cc : c.compatibility.conditions) {
        conds.push_back(condition_json(cc));
    }
    return {{"compatibility",
             {{"passed", c.compatibility.passed()},
              {"tolerance", c.compatibility.tolerance},
              {"conditions", conds}}},
            {"initial_consistency", condition_json(c.consistency)}};
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    f << text;
    if (!f) {
        throw IoError("failed writing '" + path.string() + "'");
    }
}

template <class F>
int guarded(F&& body, std::ostream& err) {
    try {
        return body();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
    } catch (const ParseError& e) {
        err << "forcing parse error at offset " << e.offset() << ": " << e.detail() << "\n";
    } catch (const ProblemError& e) {
        err << "problem error: " << e.what() << "\n";
    } catch (const DomainError& e) {
        err << "problem error: " << e.what() << "\n";
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << "\n";
    } catch (const fs::filesystem_error& e) {
        err << "I/O error: " << e.what() << "\n";
    } catch (const Error& e) {
        err << "solve failed: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
    }
    return kExitFailure;
}

struct ModeResult {
    std::optional<TemporalSolution> primary;
    std::optional<TemporalSolution> secondary;
    bool approximated = false;
    std::vector<double> coefficients;
};

std::vector<ModeResult> solve_modes(const Prepared& p, const std::vector<ModalCoefficients>& modal,
                                    const RunOptions& opts) {
    const auto M = static_cast<std::size_t>(p.spec.modes);
    std::vector<ModeResult> results(M);
    std::vector<std::exception_ptr> errors(M);
    const bool cross = opts.cross_check && p.spec.k == 2;
    ClosedFormOptions cf;
    cf.steps = p.config.time_steps;
    CompanionOptions co;
    co.steps = p.config.companion_steps;

    auto work = [&](std::size_t i) {
        try {
            const ModeODE ode = reduce_mode(p.spec, modal[i]);
            auto& r = results[i];
            r.approximated = ode.rhs_derivative_approximated;
            r.coefficients = ode.coefficients;
            if (p.solver == SolverKind::closed_form) {
                r.primary = solve_mode_closed_form(ode, cf);
                if (cross) {
                    r.secondary = solve_mode_companion(ode, co);
                }
            } else {
                r.primary = solve_mode_companion(ode, co);
                if (cross) {
                    r.secondary = solve_mode_closed_form(ode, cf);
                }
            }
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    unsigned jobs = opts.jobs ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
    jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, M));
    if (jobs <= 1) {
        for (std::size_t i = 0; i < M; ++i) {
            work(i);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < jobs; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < M; i = next++) {
                    work(i);
                }
            });
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return results;
}

std::string solution_csv(const SolutionGrid& grid, const std::string& hash, SolverKind solver) {
    std::string s = "# config_sha256=" + hash + " solver=" + std::string(to_string(solver)) + "\n";
    s += "t";
    for (double x : grid.x) {
        s += "," + format_number(x);
    }
    s += "\n";
    for (std::size_t i = 0; i < grid.t.size(); ++i) {
        s += format_number(grid.t[i]);
        for (Eigen::Index j = 0; j < grid.u.cols(); ++j) {
            s += "," + format_number(grid.u(static_cast<Eigen::Index>(i), j));
        }
        s += "\n";
    }
    return s;
}

}  // namespace

fs::path resolve_output_dir(const std::optional<fs::path>& flag,
                            const std::optional<std::string>& config, const char* env) {
    if (flag) {
        return *flag;
    }
    if (config) {
        return *config;
    }
    if (env && *env) {
        return env;
    }
    return kDefaultOutputDir;
}

std::string format_number(double v) {
    if (v == 0.0) {
        return "0";  // folds -0
    }
    std::array<char, 64> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), r.ptr);
}

int run_validate(const fs::path& config, const RunOptions& opts, std::ostream& out,
                 std::ostream& err) {
    (void)opts;
    return guarded(
        [&] {
            const Prepared p = prepare(config);
            const Checks c = run_checks(p);
            auto line = [&](const ConditionCheck& cc) {
                out << (cc.passed ? "PASS " : "FAIL ") << cc.name
                    << " (max violation " << format_number(cc.max_violation) << ")\n";
            };
            for (const auto& cc : c.compatibility.conditions) {
                line(cc);
            }
            line(c.consistency);
            out << (c.passed() ? "valid" : "invalid") << "\n";
            return c.passed() ? kExitOk : kExitValidation;
        },
        err);
}

int run_solve(const fs::path& config, const RunOptions& opts, std::ostream& out,
              std::ostream& err) {
    return guarded(
        [&] {
            const Prepared p = prepare(config);
            const fs::path dir = resolve_output_dir(opts.out, p.config.output_dir,
                                                    std::getenv(kOutputDirEnv));
            const Checks checks = run_checks(p);
            std::vector<std::string> warnings;
            if (!checks.passed()) {
                for (const auto& cc : checks.compatibility.conditions) {
                    if (!cc.passed) {
                        warnings.push_back("condition failed: " + cc.name);
                    }
                }
                if (!checks.consistency.passed) {
                    warnings.push_back("condition failed: " + checks.consistency.name);
                }
                for (const auto& w : warnings) {
                    err << (opts.strict ? "error: " : "warning: ") << w << "\n";
                }
            }

            const SpectralOptions sopts{p.config.x_nodes};
            const auto modal = modal_traces(p.spec.forcing, p.spec.modes, p.config.forcing_samples, sopts);
            const auto results = solve_modes(p, modal, opts);

            std::vector<TemporalSolution> sols;
            for (const auto& r : results) {
                sols.push_back(*r.primary);
            }
            const SolutionGrid grid = synthesize_grid(sols, p.spec.horizon, p.spec.nt, p.spec.nx);

            VerifierOptions vopts;
            vopts.quadrature = {p.config.quadrature_nodes, p.config.richardson};
            vopts.mode_tolerance = p.config.mode_residual_tol;
            vopts.grid_tolerance = p.config.grid_residual_tol;
            vopts.compat_tolerance = p.config.compat_tol;
            const ResidualReport residual = pde_residual(grid, p.spec, sols, modal, vopts);

            // Cross-check.
            double cross_max = 0.0;
            std::vector<double> cross_diff;
            const bool crossed = results.front().secondary.has_value();
            if (crossed) {
                for (const auto& r : results) {
                    cross_diff.push_back(sup_difference(*r.primary, *r.secondary));
                    cross_max = std::max(cross_max, cross_diff.back());
                }
            }
            const bool cross_ok = !crossed || cross_max <= p.config.cross_check_tol;

            // Diagnostics.
            json modes = json::array();
            for (std::size_t i = 0; i < results.size(); ++i) {
                const auto& r = results[i];
                const auto& sol = *r.primary;
                json d;
                d["m"] = sol.mode();
                d["solver"] = std::string(to_string(sol.provenance()));
                d["coefficients"] = r.coefficients;
                if (r.coefficients.size() == 4) {
                    const double a1 = r.coefficients[2], a2 = r.coefficients[1], a3 = r.coefficients[0];
                    d["A"] = json::array({a1, a2, a3});
                    d["discriminant"] = cubic_discriminant(a1, a2, a3);
                }
                json roots = json::array();
                if (sol.classification()) {
                    d["case"] = std::string(to_string(sol.classification()->kind));
                    for (const auto& z : sol.classification()->roots) {
                        roots.push_back(complex_json(z));
                    }
                } else {
                    for (const auto& z : companion_eigenvalues(r.coefficients)) {
                        roots.push_back(complex_json(z));
                    }
                }
                d["roots"] = roots;
                d["constants"] = sol.constants();
                d["sup_abs"] = sol.sup_norm();
                d["residual"] = residual.mode_residuals[i];
                d["rhs_derivative_approximated"] = r.approximated;
                if (crossed) {
                    d["cross_check_difference"] = cross_diff[i];
                }
                modes.push_back(d);
            }
            json diagnostics = {{"config_sha256", p.hash},
                                {"solver", std::string(to_string(p.solver))},
                                {"alpha", p.spec.order.alpha()},
                                {"beta", p.spec.order.beta()},
                                {"k", p.spec.k},
                                {"modes", modes}};

            // Decay.
            json decay;
            if (p.spec.modes >= 8) {
                try {
                    const DecayReport dr = decay_check(sols, p.spec, vopts);
                    decay = {{"fit_range", json::array({dr.fit_lo, dr.fit_hi})},
                             {"fitted_modes", dr.fitted_modes},
                             {"slope", dr.slope},
                             {"intercept", dr.intercept},
                             {"forcing_slope", dr.forcing_slope},
                             {"bound_T", dr.bound_t},
                             {"bound_uxx", dr.bound_uxx},
                             {"bound_cf", dr.bound_cf},
                             {"trivial", dr.trivial},
                             {"compatible", dr.compatible},
                             {"bounded", dr.bounded},
                             {"certified", dr.certified},
                             {"slope_threshold", kDecaySlopeThreshold}};
                } catch (const ProblemError& e) {
                    decay = {{"skipped", e.what()}};
                }
            } else {
                decay = {{"skipped", "decay fit needs at least 8 modes"}};
            }

            const bool validation_ok = checks.passed() || !opts.strict;
            const bool passed = validation_ok && residual.passed() && cross_ok;
            json verification = {
                {"config_sha256", p.hash},
                {"solver", std::string(to_string(p.solver))},
                {"strict", opts.strict},
                {"passed", passed},
                {"validation", checks_json(checks)},
                {"warnings", warnings},
                {"residual",
                 {{"mode_residuals", residual.mode_residuals},
                  {"max_mode_residual", residual.max_mode_residual()},
                  {"grid_sup", residual.grid_sup},
                  {"grid_rms", residual.grid_rms},
                  {"grid_relative", residual.grid_relative},
                  {"forcing_sup", residual.forcing_sup},
                  {"boundary_violation", residual.boundary_violation},
                  {"initial_violation", residual.initial_violation},
                  {"truncation", residual.truncation},
                  {"quadrature_nodes", residual.quadrature_nodes},
                  {"richardson", residual.richardson},
                  {"mode_tolerance", residual.mode_tolerance},
                  {"grid_tolerance", residual.grid_tolerance},
                  {"passed", residual.passed()}}},
                {"decay", decay},
                {"resolution",
                 {{"time_steps", p.config.time_steps},
                  {"companion_steps", p.config.companion_steps},
                  {"forcing_samples", p.config.forcing_samples},
                  {"x_nodes", p.config.x_nodes},
                  {"nt", p.spec.nt},
                  {"nx", p.spec.nx}}}};
            if (crossed) {
                verification["cross_check"] = {{"max_difference", cross_max},
                                               {"tolerance", p.config.cross_check_tol},
                                               {"passed", cross_ok}};
            }

            std::error_code ec;
            fs::create_directories(dir, ec);
            if (ec) {
                throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
            }
            write_text(dir / "solution.csv", solution_csv(grid, p.hash, p.solver));
            write_text(dir / "diagnostics.json", diagnostics.dump(2) + "\n");
            write_text(dir / "verification.json", verification.dump(2) + "\n");

            out << "solver=" << to_string(p.solver) << " modes=" << p.spec.modes
                << " max_mode_residual=" << format_number(residual.max_mode_residual())
                << " grid_relative=" << format_number(residual.grid_relative) << "\n";
            if (crossed) {
                out << "cross_check_max_difference=" << format_number(cross_max) << "\n";
            }
            out << "wrote " << dir.string() << " (" << (passed ? "passed" : "FAILED") << ")\n";
            if (!residual.passed()) {
                err << "error: residual tolerances not met\n";
            }
            if (!cross_ok) {
                err << "error: closed-form and companion solutions disagree\n";
            }
            return passed ? kExitOk : kExitValidation;
        },
        err);
}

}  // namespace cfheat::cli
