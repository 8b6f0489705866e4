#pragma once

#include "cfheat/cf_operator.hpp"
#include "cfheat/ode_reduction.hpp"
#include "cfheat/solution_grid.hpp"
#include "cfheat/temporal_solver.hpp"

#include <span>
#include <vector>

namespace cfheat {

struct VerifierOptions {
    QuadratureOptions quadrature{4097, true};
    double mode_tolerance = 1e-4;
    double grid_tolerance = 1e-3;
    /// Tolerance handed to validate_compatibility by decay_check.
    double compat_tolerance = 1e-8;
};

/// sup over t_nodes of
///   | sum_n lambda_n CF D^{alpha+n} T(t) + (m pi)^2 T(t) - f_m(t) |
/// with every CF derivative taken by direct quadrature of the defining
/// integral (never the integration-by-parts expansion).
double mode_residual(const SampledFunction& trajectory, const ProblemSpec& spec,
                     const ModalCoefficients& fm, std::span<const double> t_nodes);

double mode_residual(const TemporalSolution& sol, const ProblemSpec& spec,
                     const ModalCoefficients& fm, std::span<const double> t_nodes,
                     const QuadratureOptions& quadrature = VerifierOptions{}.quadrature);

struct ResidualReport {
    std::vector<double> mode_residuals;   // index m - 1
    double grid_sup = 0.0;
    double grid_rms = 0.0;
    double grid_relative = 0.0;           // grid_sup / sup|f| (absolute when f == 0)
    double forcing_sup = 0.0;
    double boundary_violation = 0.0;      // max |u| on x = 0 and x = 1
    double initial_violation = 0.0;       // max |T_m^(i)(0) - prescribed|
    int truncation = 0;
    std::size_t quadrature_nodes = 0;
    bool richardson = false;
    double mode_tolerance = 0.0;
    double grid_tolerance = 0.0;

    double max_mode_residual() const;
    bool passed() const;
};

/// Residual of the full equation on the interior of the grid. CF derivatives
/// of u are computed mode by mode and re-synthesised; u_xx uses the sine
/// eigenvalues; f is evaluated from the forcing itself. Throws
/// ResolutionError for fewer than 5 interior x nodes.
ResidualReport pde_residual(const SolutionGrid& grid, const ProblemSpec& spec,
                            std::span<const TemporalSolution> solutions,
                            std::span<const ModalCoefficients> modal,
                            const VerifierOptions& opts = {});

struct DecayReport {
    std::vector<double> mode_sup;          // sup_t |T_m|, index m - 1
    std::vector<double> forcing_sup;       // sup_t |f_m|
    std::vector<double> cf_sup;            // sup_t |CF D^alpha T_m|
    int fit_lo = 4;
    int fit_hi = 0;
    int fitted_modes = 0;
    double slope = 0.0;                    // log sup|T_m| vs log m
    double intercept = 0.0;
    double forcing_slope = 0.0;            // log sup|f_m| vs log m
    double bound_t = 0.0;                  // max_m (m pi)^4 sup|T_m|
    double bound_uxx = 0.0;                // max_m (m pi)^2 * (m pi)^2 sup|T_m|
    double bound_cf = 0.0;                 // max_m (m pi)^4 sup|CF D^alpha T_m|
    bool trivial = false;                  // every mode in the fit range is exactly zero
    bool compatible = false;
    bool bounded = false;                  // (m pi)^4 sup|T_m| not increasing over the fit range
    bool certified = false;
};

inline constexpr double kDecaySlopeThreshold = -3.7;

/// Empirical check of the (m pi)^-4 decay of the modal solutions. Needs at
/// least 8 modes; the fit needs 5 nonzero modes in [fit_lo, M] unless all of
/// them vanish (trivial report). Throws ProblemError otherwise.
///
/// certified = compatible && bounded && slope <= threshold && forcing_slope <= threshold.
DecayReport decay_check(std::span<const TemporalSolution> solutions, const ProblemSpec& spec,
                        const VerifierOptions& opts = {}, int fit_lo = 4);

}  // namespace cfheat
