#include "cfheat/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cfheat {

namespace {

double stiffness(int m) {
    const double w = static_cast<double>(m) * std::numbers::pi;
    return w * w;
}

// sum_n lambda_n CF D^{alpha+n} T(t), direct quadrature only.
double cf_operator_sum(const SampledFunction& trajectory, const ProblemSpec& spec, double t) {
    double s = 0.0;
    for (int n = 0; n <= spec.k; ++n) {
        const double lambda = spec.lambdas[static_cast<std::size_t>(n)];
        if (lambda != 0.0) {
            s += lambda * cf_derivative_higher(trajectory, spec.order, n, t).value;
        }
    }
    return s;
}

struct Fit {
    double slope = 0.0;
    double intercept = 0.0;
};

Fit loglog_fit(const std::vector<double>& m, const std::vector<double>& v) {
    const double n = static_cast<double>(m.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double x = std::log(m[i]);
        const double y = std::log(v[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    Fit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace

double mode_residual(const SampledFunction& trajectory, const ProblemSpec& spec,
                     const ModalCoefficients& fm, std::span<const double> t_nodes) {
    if (!fm.value) {
        throw DerivativeOrderError("mode residual needs f_m");
    }
    if (trajectory.quadrature().nodes < 3) {
        throw ResolutionError("mode residual quadrature needs at least 3 nodes");
    }
    const double w = stiffness(fm.m);
    double worst = 0.0;
    for (double t : t_nodes) {
        const double r = cf_operator_sum(trajectory, spec, t) + w * trajectory(t) - fm.value(t);
        worst = std::max(worst, std::abs(r));
    }
    return worst;
}

double mode_residual(const TemporalSolution& sol, const ProblemSpec& spec,
                     const ModalCoefficients& fm, std::span<const double> t_nodes,
                     const QuadratureOptions& quadrature) {
    return mode_residual(sol.as_function(quadrature), spec, fm, t_nodes);
}

double ResidualReport::max_mode_residual() const {
    double s = 0.0;
    for (double r : mode_residuals) {
        s = std::max(s, r);
    }
    return s;
}

bool ResidualReport::passed() const {
    return max_mode_residual() <= mode_tolerance && grid_relative <= grid_tolerance &&
           boundary_violation == 0.0 && initial_violation <= mode_tolerance;
}

ResidualReport pde_residual(const SolutionGrid& grid, const ProblemSpec& spec,
                            std::span<const TemporalSolution> solutions,
                            std::span<const ModalCoefficients> modal, const VerifierOptions& opts) {
    if (grid.x.size() < 7) {
        throw ResolutionError("grid has fewer than 5 interior x nodes");
    }
    if (modal.size() != solutions.size()) {
        throw MismatchError("modal forcing and modal solutions differ in count");
    }
    if (grid.u.rows() != static_cast<Eigen::Index>(grid.t.size()) ||
        grid.u.cols() != static_cast<Eigen::Index>(grid.x.size())) {
        throw MismatchError("grid values do not match the grid nodes");
    }

    ResidualReport report;
    report.truncation = static_cast<int>(solutions.size());
    report.quadrature_nodes = opts.quadrature.nodes;
    report.richardson = opts.quadrature.richardson;
    report.mode_tolerance = opts.mode_tolerance;
    report.grid_tolerance = opts.grid_tolerance;

    const auto nt = static_cast<Eigen::Index>(grid.t.size());
    const auto nx = static_cast<Eigen::Index>(grid.x.size());

    // operator[i, m] = sum_n lambda_n CF D^{alpha+n} T_m(t_i) + (m pi)^2 T_m(t_i)
    Eigen::MatrixXd op = Eigen::MatrixXd::Zero(nt, static_cast<Eigen::Index>(solutions.size()));
    for (std::size_t j = 0; j < solutions.size(); ++j) {
        const auto& sol = solutions[j];
        const auto& fm = modal[j];
        if (fm.m != sol.mode()) {
            throw MismatchError("modal forcing and modal solution disagree on the mode index");
        }
        const auto trajectory = sol.as_function(opts.quadrature);
        const double w = stiffness(sol.mode());
        double worst = 0.0;
        for (Eigen::Index i = 0; i < nt; ++i) {
            const double t = grid.t[static_cast<std::size_t>(i)];
            const double v = cf_operator_sum(trajectory, spec, t) + w * sol(t);
            op(i, static_cast<Eigen::Index>(j)) = v;
            worst = std::max(worst, std::abs(v - fm.value(t)));
        }
        const auto idx = static_cast<std::size_t>(sol.mode() - 1);
        if (report.mode_residuals.size() <= idx) {
            report.mode_residuals.resize(idx + 1, 0.0);
        }
        report.mode_residuals[idx] = worst;

        const auto prescribed = spec.initial_data(sol.mode());
        const int top = std::min(static_cast<int>(prescribed.size()) - 1, sol.max_derivative());
        for (int d = 0; d <= top; ++d) {
            report.initial_violation =
                std::max(report.initial_violation,
                         std::abs(sol.derivative(d, 0.0) - prescribed[static_cast<std::size_t>(d)]));
        }
    }

    const auto& fc = spec.forcing.compiled(0, 0);
    double sum_sq = 0.0;
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < nt; ++i) {
        const double t = grid.t[static_cast<std::size_t>(i)];
        for (Eigen::Index xj = 1; xj + 1 < nx; ++xj) {
            const double x = grid.x[static_cast<std::size_t>(xj)];
            double v = 0.0;
            for (std::size_t j = 0; j < solutions.size(); ++j) {
                v += op(i, static_cast<Eigen::Index>(j)) *
                     sin_pi(static_cast<double>(solutions[j].mode()) * x);
            }
            const double f = fc(t, x);
            const double r = v - f;
            report.forcing_sup = std::max(report.forcing_sup, std::abs(f));
            report.grid_sup = std::max(report.grid_sup, std::abs(r));
            sum_sq += r * r;
            ++count;
        }
        report.boundary_violation = std::max(
            {report.boundary_violation, std::abs(grid.u(i, 0)), std::abs(grid.u(i, nx - 1))});
    }
    report.grid_rms = std::sqrt(sum_sq / static_cast<double>(count));
    report.grid_relative =
        report.forcing_sup > 0.0 ? report.grid_sup / report.forcing_sup : report.grid_sup;
    return report;
}

DecayReport decay_check(std::span<const TemporalSolution> solutions, const ProblemSpec& spec,
                        const VerifierOptions& opts, int fit_lo) {
    const int M = static_cast<int>(solutions.size());
    if (M < 8) {
        throw ProblemError("decay check needs at least 8 modes, got " + std::to_string(M));
    }
    if (fit_lo < 1 || fit_lo > M) {
        throw ProblemError("decay fit range is empty");
    }
    for (int j = 0; j < M; ++j) {
        if (solutions[static_cast<std::size_t>(j)].mode() != j + 1) {
            throw MismatchError("decay check needs the modes 1..M in order");
        }
    }

    DecayReport r;
    r.fit_lo = fit_lo;
    r.fit_hi = M;
    r.mode_sup.resize(static_cast<std::size_t>(M));
    r.forcing_sup.assign(static_cast<std::size_t>(M), 0.0);
    r.cf_sup.assign(static_cast<std::size_t>(M), 0.0);

    const double q = spec.horizon;
    const std::size_t samples = 32;
    for (std::size_t i = 0; i <= samples; ++i) {
        const double t = q * static_cast<double>(i) / static_cast<double>(samples);
        const auto fm = sine_coefficients(spec.forcing, M, t);
        for (int j = 0; j < M; ++j) {
            auto& s = r.forcing_sup[static_cast<std::size_t>(j)];
            s = std::max(s, std::abs(fm[static_cast<std::size_t>(j)]));
        }
    }

    for (int j = 0; j < M; ++j) {
        const auto& sol = solutions[static_cast<std::size_t>(j)];
        const auto J = static_cast<std::size_t>(j);
        r.mode_sup[J] = sol.sup_norm();
        if (r.mode_sup[J] > 0.0) {
            const auto g = sol.as_function(opts.quadrature);
            for (std::size_t i = 1; i <= samples; ++i) {
                const double t = q * static_cast<double>(i) / static_cast<double>(samples);
                r.cf_sup[J] = std::max(r.cf_sup[J], std::abs(cf_derivative(g, spec.order, t).value));
            }
        }
        const double w4 = std::pow(static_cast<double>(j + 1) * std::numbers::pi, 4);
        r.bound_t = std::max(r.bound_t, w4 * r.mode_sup[J]);
        r.bound_cf = std::max(r.bound_cf, w4 * r.cf_sup[J]);
    }
    r.bound_uxx = r.bound_t;

    // Modes below a relative round-off floor are treated as exact zeros.
    const double peak = *std::max_element(r.mode_sup.begin(), r.mode_sup.end());
    const double floor = 1e-13 * peak;
    const double fpeak = *std::max_element(r.forcing_sup.begin(), r.forcing_sup.end());
    const double ffloor = 1e-13 * fpeak;
    std::vector<double> ms, vs, fms, fvs;
    for (int m = fit_lo; m <= M; ++m) {
        const auto J = static_cast<std::size_t>(m - 1);
        if (r.mode_sup[J] > floor) {
            ms.push_back(m);
            vs.push_back(r.mode_sup[J]);
        }
        if (r.forcing_sup[J] > ffloor) {
            fms.push_back(m);
            fvs.push_back(r.forcing_sup[J]);
        }
    }
    r.fitted_modes = static_cast<int>(ms.size());
    r.compatible = validate_compatibility(spec.forcing, opts.compat_tolerance).passed();

    // Bounded: the scaled magnitudes over the upper half of the modes never
    // exceed their maximum over the lower half.
    double lower = 0.0, upper = 0.0;
    for (int m = 1; m <= M; ++m) {
        const double scaled =
            std::pow(static_cast<double>(m) * std::numbers::pi, 4) * r.mode_sup[static_cast<std::size_t>(m - 1)];
        (2 * m <= M ? lower : upper) = std::max(2 * m <= M ? lower : upper, scaled);
    }
    r.bounded = std::isfinite(r.bound_t) && upper <= lower * (1.0 + 1e-9);

    if (ms.empty()) {
        r.trivial = true;
        r.certified = r.compatible && r.bounded;
        return r;
    }
    if (ms.size() < 5) {
        throw ProblemError("decay fit needs at least 5 nonzero modes in [" + std::to_string(fit_lo) +
                           ", " + std::to_string(M) + "], found " + std::to_string(ms.size()));
    }
    const Fit fit = loglog_fit(ms, vs);
    r.slope = fit.slope;
    r.intercept = fit.intercept;
    r.forcing_slope = fms.size() >= 2 ? loglog_fit(fms, fvs).slope : -std::numeric_limits<double>::infinity();
    r.certified = r.compatible && r.bounded && r.slope <= kDecaySlopeThreshold &&
                  r.forcing_slope <= kDecaySlopeThreshold;
    return r;
}

}  // namespace cfheat
