#pragma once

#include "cfheat/fractional_order.hpp"
#include "cfheat/spectral.hpp"

#include <functional>
#include <span>
#include <vector>

namespace cfheat {

/// Multi-term problem
///   sum_{n=0}^{k} lambda_n CF D^{alpha+n} u - u_xx = f   on (0,q) x (0,1),
///   u(t,0) = u(t,1) = 0,  d^i u/dt^i (0, .) given per mode.
struct ProblemSpec {
    FractionalOrder order{0.5};
    int k = 2;
    std::vector<double> lambdas{0.0, 0.0, 1.0};
    double horizon = 1.0;
    ForcingField forcing = ForcingField::zero(1.0);
    /// initial[m - 1] = (T_m(0), T_m'(0), ..., T_m^(k)(0)); missing or empty
    /// entries mean zero data.
    std::vector<std::vector<double>> initial;
    int modes = 8;
    /// Output grid: nt + 1 time nodes, nx + 1 space nodes.
    std::size_t nt = 64;
    std::size_t nx = 64;

    /// Throws ProblemError on violated invariants.
    void validate() const;

    /// Initial vector of mode m, length k + 1.
    std::vector<double> initial_data(int m) const;
};

/// Coefficient of T~^(k+1) in the differentiated reduced equation before
/// normalisation: lambda_k for k >= 1, lambda_0 + (m pi)^2 (1 - alpha) for k = 0.
double leading_coefficient(const ProblemSpec& spec, int m);

/// Monic coefficients b_0..b_{k+1} (b_j multiplies T~^(j), b_{k+1} = 1) of
/// the order k+1 ODE for T~_m(t) = T_m(t) e^{beta t}.
///
/// For k = 2: (b_0, b_1, b_2) = (A_3, A_2, A_1).
std::vector<double> transform_coefficients(const ProblemSpec& spec, int m);

/// [alpha f_m(t) + (1 - alpha) f_m'(t)] e^{beta t} / leading_coefficient.
double transformed_rhs(const ProblemSpec& spec, const ModalCoefficients& fm, double t);

/// T~^(j)(0) = sum_{i<=j} C(j,i) beta^{j-i} C_i.
std::vector<double> transform_initial_conditions(std::span<const double> c, double beta);

/// Inverse of transform_initial_conditions.
std::vector<double> inverse_initial_conditions(std::span<const double> c_tilde, double beta);

/// value * e^{-beta t}.
double inverse_transform(double value, double beta, double t);

/// Reduced integer-order IVP for one mode:
///   sum_j coefficients[j] T~^(j)(t) = rhs(t),  T~^(j)(0) = initial_transformed[j].
struct ModeODE {
    int m = 1;
    double beta = 1.0;
    double horizon = 1.0;
    std::vector<double> coefficients;  // monic, ascending derivative order
    std::function<double(double)> rhs;
    std::function<double(double)> rhs_derivative;
    bool rhs_derivative_approximated = false;
    std::vector<double> initial_transformed;
    std::vector<double> initial;  // T_m^(j)(0)

    int order() const noexcept { return static_cast<int>(coefficients.size()) - 1; }
};

/// Assembles the reduced IVP of mode fm.m. When fm carries no second
/// derivative, g' falls back to central differences with step q/4096 and
/// the ODE is flagged.
ModeODE reduce_mode(const ProblemSpec& spec, const ModalCoefficients& fm);

}  // namespace cfheat
