#pragma once

#include "cfheat/expr.hpp"

#include <Eigen/Core>

#include <array>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cfheat {

/// sin(pi * y) with exact zeros at integer y.
double sin_pi(double y);

/// Forcing f(t, x) on [0, q] x [0, 1] with the symbolic partial derivatives
/// needed by the reduction, the decay factors and the compatibility checks.
///
/// Available partials: d^i/dt^i d^j/dx^j for i in 0..3 and j in {0, 2, 4}.
class ForcingField {
public:
    ForcingField(expr::Expr f, double horizon);

    static ForcingField parse(std::string_view text, double horizon);
    static ForcingField zero(double horizon);

    double horizon() const noexcept { return horizon_; }
    const expr::Expr& expression() const noexcept { return f_; }

    double operator()(double t, double x) const { return partial(0, 0, t, x); }

    /// Throws DerivativeOrderError for partials outside the available set.
    double partial(int t_order, int x_order, double t, double x) const;
    const expr::CompiledExpr& compiled(int t_order, int x_order) const;

    /// True when f is the literal zero after folding.
    bool is_zero() const;

private:
    static constexpr int kMaxT = 3;
    static constexpr std::array<int, 3> kXOrders{0, 2, 4};

    expr::Expr f_;
    double horizon_;
    std::array<std::array<expr::CompiledExpr, 3>, kMaxT + 1> partials_;
};

struct SpectralOptions {
    /// Odd number of x nodes for composite Simpson.
    std::size_t x_nodes = 1025;
};

/// Highest mode resolved with at least 16 nodes per wavelength.
int max_resolved_mode(std::size_t x_nodes);

/// Sine coefficients c_m = 2 int_0^1 s(x) sin(m pi x) dx for m = 1..m_max of
/// samples on the uniform grid x_j = j / (n - 1). Values below the round-off
/// bound of the quadrature sum are returned as exact zeros.
std::vector<double> project_sine(std::span<const double> samples, int m_max);

/// f_1(t)..f_{m_max}(t) with the reconstructing convention
/// f_m(t) = 2 int_0^1 f(t, x) sin(m pi x) dx.
std::vector<double> sine_coefficients(const ForcingField& f, int m_max, double t,
                                      const SpectralOptions& opts = {});

/// Time trace of one mode: T_m(t_i) on a shared time grid.
struct ModalSeries {
    int m = 1;
    std::vector<double> times;
    std::vector<double> values;
};

/// u(t_i, x_j) = sum_m T_m(t_i) sin(m pi x_j); rows are time nodes.
/// Throws MismatchError if the modes do not share one time grid.
Eigen::MatrixXd synthesize(std::span<const ModalSeries> modes, std::span<const double> x);

/// Sine-weighted integrals of d^4f/dx^4, d^5f/dt dx^4 and d^6f/dt^2 dx^4
/// (same factor-2 normalisation as sine_coefficients). For compatible f,
/// f_m(t) = f40 / (m pi)^4.
struct DecayFactors {
    double f40 = 0.0;
    double f41 = 0.0;
    double f42 = 0.0;
};

DecayFactors decay_factors(const ForcingField& f, int m, double t,
                           const SpectralOptions& opts = {});

struct ConditionCheck {
    std::string name;
    double max_violation = 0.0;
    bool passed = false;
};

struct CompatibilityReport {
    std::vector<ConditionCheck> conditions;
    double tolerance = 0.0;
    bool passed() const;
};

/// The seven conditions f_t = f_tt = f_ttt = 0 at t = 0, f = 0 and f_xx = 0 at
/// x = 0 and x = 1, each sampled on `samples` points of its edge.
CompatibilityReport validate_compatibility(const ForcingField& f, double tol,
                                           std::size_t samples = 129);

/// Modal forcing f_m(t) with optional derivative traces.
struct ModalCoefficients {
    int m = 1;
    std::function<double(double)> value;
    std::function<double(double)> first_derivative;
    std::function<double(double)> second_derivative;
};

/// Samples f, f_t, f_tt, f_ttt on a (t_intervals + 1) x x_nodes grid, projects
/// every row onto modes 1..m_max and returns piecewise cubic Hermite traces
/// of f_m, f_m' and f_m''.
std::vector<ModalCoefficients> modal_traces(const ForcingField& f, int m_max,
                                            std::size_t t_intervals,
                                            const SpectralOptions& opts = {});

}  // namespace cfheat
