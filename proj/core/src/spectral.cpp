#include "cfheat/spectral.hpp"
#include "cfheat/quadrature.hpp"

#include "hermite.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace cfheat {

double sin_pi(double y) {
    const double r = std::remainder(y, 2.0);  // in [-1, 1]
    if (r == 0.0 || std::abs(r) == 1.0) {
        return 0.0;
    }
    return std::sin(std::numbers::pi * r);
}

// ---------------------------------------------------------------- ForcingField

ForcingField::ForcingField(expr::Expr f, double horizon) : f_(std::move(f)), horizon_(horizon) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ProblemError("forcing horizon q must be a positive finite number");
    }
    for (std::size_t j = 0; j < kXOrders.size(); ++j) {
        expr::Expr base = kXOrders[j] == 0
                              ? expr::fold(f_)
                              : expr::differentiate(f_, expr::Variable::x, kXOrders[j]);
        for (int i = 0; i <= kMaxT; ++i) {
            partials_[i][j] = expr::CompiledExpr(base);
            if (i < kMaxT) {
                base = expr::differentiate(base, expr::Variable::t, 1);
            }
        }
    }
}

ForcingField ForcingField::parse(std::string_view text, double horizon) {
    return ForcingField(expr::parse(text), horizon);
}

ForcingField ForcingField::zero(double horizon) {
    return ForcingField(expr::Expr::number(0.0), horizon);
}

const expr::CompiledExpr& ForcingField::compiled(int t_order, int x_order) const {
    for (std::size_t j = 0; j < kXOrders.size(); ++j) {
        if (kXOrders[j] == x_order && t_order >= 0 && t_order <= kMaxT) {
            return partials_[t_order][j];
        }
    }
    throw DerivativeOrderError("partial derivative d^" + std::to_string(t_order) + "/dt d^" +
                               std::to_string(x_order) + "/dx of the forcing is not available");
}

double ForcingField::partial(int t_order, int x_order, double t, double x) const {
    return compiled(t_order, x_order)(t, x);
}

bool ForcingField::is_zero() const { return partials_[0][0].is_zero(); }

// ---------------------------------------------------------------- analysis

namespace {

// sin(pi k / (n - 1)) for k in [0, 2(n - 1)), exact zeros at k = 0 and n - 1.
std::vector<double> sine_table(std::size_t n) {
    const std::size_t period = 2 * (n - 1);
    std::vector<double> s(period);
    for (std::size_t k = 0; k < period; ++k) {
        s[k] = sin_pi(static_cast<double>(k) / static_cast<double>(n - 1));
    }
    return s;
}

void check_x_nodes(std::size_t n) {
    if (n < 3 || n % 2 == 0) {
        throw ResolutionError("x quadrature needs an odd number of nodes >= 3");
    }
}

double project_one(std::span<const double> samples, std::span<const double> weights,
                   std::span<const double> table, int m) {
    const std::size_t n = samples.size();
    const std::size_t period = table.size();
    double sum = 0.0;
    double magnitude = 0.0;
    std::size_t k = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double term = weights[j] * samples[j];
        sum += term * table[k];
        magnitude += std::abs(term);
        k += static_cast<std::size_t>(m);
        k %= period;
    }
    // Below this bound the sum is indistinguishable from rounding noise.
    const double noise = 64.0 * std::numeric_limits<double>::epsilon() * magnitude;
    return std::abs(sum) <= noise ? 0.0 : 2.0 * sum;
}

}  // namespace

int max_resolved_mode(std::size_t x_nodes) { return static_cast<int>((x_nodes - 1) / 8); }

std::vector<double> project_sine(std::span<const double> samples, int m_max) {
    const std::size_t n = samples.size();
    check_x_nodes(n);
    if (m_max < 1) {
        throw DomainError("mode count must be >= 1");
    }
    if (m_max > max_resolved_mode(n)) {
        throw ResolutionError("mode " + std::to_string(m_max) + " exceeds the resolution cap " +
                              std::to_string(max_resolved_mode(n)) + " of " +
                              std::to_string(n) + " x nodes");
    }
    const auto weights = simpson_weights(n, 1.0);
    const auto table = sine_table(n);
    std::vector<double> c(static_cast<std::size_t>(m_max));
    for (int m = 1; m <= m_max; ++m) {
        c[m - 1] = project_one(samples, weights, table, m);
    }
    return c;
}

namespace {

void check_time(const ForcingField& f, double t) {
    if (!(t >= 0.0 && t <= f.horizon())) {
        throw DomainError("time " + std::to_string(t) + " outside [0, q]");
    }
}

std::vector<double> sample_row(const expr::CompiledExpr& g, double t, std::size_t n) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = j + 1 == n ? 1.0 : static_cast<double>(j) / static_cast<double>(n - 1);
        row[j] = g(t, x);
    }
    return row;
}

}  // namespace

std::vector<double> sine_coefficients(const ForcingField& f, int m_max, double t,
                                      const SpectralOptions& opts) {
    check_time(f, t);
    check_x_nodes(opts.x_nodes);
    return project_sine(sample_row(f.compiled(0, 0), t, opts.x_nodes), m_max);
}

Eigen::MatrixXd synthesize(std::span<const ModalSeries> modes, std::span<const double> x) {
    if (modes.empty()) {
        return Eigen::MatrixXd::Zero(0, static_cast<Eigen::Index>(x.size()));
    }
    const auto& times = modes.front().times;
    for (const auto& mode : modes) {
        if (mode.times != times || mode.values.size() != times.size()) {
            throw MismatchError("modal series do not share one time grid");
        }
    }
    const auto rows = static_cast<Eigen::Index>(times.size());
    const auto cols = static_cast<Eigen::Index>(x.size());
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(rows, cols);
    for (const auto& mode : modes) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            const double s = sin_pi(static_cast<double>(mode.m) * x[j]);
            if (s == 0.0) {
                continue;
            }
            for (Eigen::Index i = 0; i < rows; ++i) {
                u(i, j) += mode.values[i] * s;
            }
        }
    }
    return u;
}

DecayFactors decay_factors(const ForcingField& f, int m, double t, const SpectralOptions& opts) {
    check_time(f, t);
    check_x_nodes(opts.x_nodes);
    const std::size_t n = opts.x_nodes;
    auto one = [&](int t_order) {
        return project_sine(sample_row(f.compiled(t_order, 4), t, n), m)[m - 1];
    };
    return {one(0), one(1), one(2)};
}

bool CompatibilityReport::passed() const {
    for (const auto& c : conditions) {
        if (!c.passed) {
            return false;
        }
    }
    return true;
}

CompatibilityReport validate_compatibility(const ForcingField& f, double tol, std::size_t samples) {
    if (samples < 2) {
        throw ResolutionError("compatibility sampling needs at least 2 points");
    }
    const double q = f.horizon();
    auto edge_max = [&](int t_order, int x_order, bool along_x, double fixed) {
        const auto& g = f.compiled(t_order, x_order);
        double worst = 0.0;
        for (std::size_t i = 0; i < samples; ++i) {
            const double s = static_cast<double>(i) / static_cast<double>(samples - 1);
            const double v = along_x ? g(fixed, s) : g(s * q, fixed);
            worst = std::max(worst, std::abs(v));
        }
        return worst;
    };

    CompatibilityReport report;
    report.tolerance = tol;
    auto add = [&](std::string name, double violation) {
        report.conditions.push_back({std::move(name), violation, violation <= tol});
    };
    add("df/dt(0,x) = 0", edge_max(1, 0, true, 0.0));
    add("d2f/dt2(0,x) = 0", edge_max(2, 0, true, 0.0));
    add("d3f/dt3(0,x) = 0", edge_max(3, 0, true, 0.0));
    add("f(t,0) = 0", edge_max(0, 0, false, 0.0));
    add("f(t,1) = 0", edge_max(0, 0, false, 1.0));
    add("d2f/dx2(t,0) = 0", edge_max(0, 2, false, 0.0));
    add("d2f/dx2(t,1) = 0", edge_max(0, 2, false, 1.0));
    return report;
}

std::vector<ModalCoefficients> modal_traces(const ForcingField& f, int m_max,
                                            std::size_t t_intervals, const SpectralOptions& opts) {
    if (t_intervals < 1) {
        throw ResolutionError("modal traces need at least one time interval");
    }
    check_x_nodes(opts.x_nodes);
    if (m_max > max_resolved_mode(opts.x_nodes)) {
        throw ResolutionError("mode count exceeds the x resolution cap");
    }
    const std::size_t rows = t_intervals + 1;
    const double q = f.horizon();
    const double h = q / static_cast<double>(t_intervals);
    const auto mm = static_cast<std::size_t>(m_max);

    // coef[order][m - 1][i] = d^order f_m / dt^order at t_i
    std::vector<std::vector<std::vector<double>>> coef(
        4, std::vector<std::vector<double>>(mm, std::vector<double>(rows, 0.0)));
    if (!f.is_zero()) {
        for (int order = 0; order <= 3; ++order) {
            const auto& g = f.compiled(order, 0);
            if (g.is_zero()) {
                continue;
            }
            for (std::size_t i = 0; i < rows; ++i) {
                const double t = i + 1 == rows ? q : h * static_cast<double>(i);
                const auto c = project_sine(sample_row(g, t, opts.x_nodes), m_max);
                for (std::size_t m = 0; m < mm; ++m) {
                    coef[order][m][i] = c[m];
                }
            }
        }
    }

    std::vector<ModalCoefficients> out;
    out.reserve(mm);
    for (std::size_t m = 0; m < mm; ++m) {
        auto make = [&](int order) {
            auto interp = std::make_shared<const detail::UniformHermite>(
                0.0, h, coef[order][m], coef[order + 1][m]);
            return [interp](double t) { return (*interp)(t); };
        };
        ModalCoefficients mc;
        mc.m = static_cast<int>(m) + 1;
        mc.value = make(0);
        mc.first_derivative = make(1);
        mc.second_derivative = make(2);
        out.push_back(std::move(mc));
    }
    return out;
}

}  // namespace cfheat
