#pragma once

#include "cfheat/cf_operator.hpp"
#include "cfheat/cubic.hpp"
#include "cfheat/ode_reduction.hpp"

#include <complex>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace cfheat {

enum class SolverKind { closed_form, companion };

std::string_view to_string(SolverKind s);

/// T_m(t) on [0, q], stored as nodal values of T, T', ..., T^(K) on a
/// uniform grid (K = ODE order) plus one extra level used as slopes for
/// piecewise cubic Hermite dense output. Immutable once built.
class TemporalSolution {
public:
    TemporalSolution(int m, SolverKind provenance, double horizon,
                     std::vector<std::vector<double>> levels);

    int mode() const noexcept { return m_; }
    SolverKind provenance() const noexcept { return provenance_; }
    double horizon() const noexcept { return horizon_; }
    /// Highest derivative order available through derivative().
    int max_derivative() const noexcept { return static_cast<int>(levels_.size()) - 2; }
    std::size_t steps() const noexcept { return levels_.front().size() - 1; }

    double operator()(double t) const { return derivative(0, t); }
    double derivative(int order, double t) const;

    /// Nodal values of T^(order) at t_i = i q / steps().
    std::span<const double> nodes(int order) const;
    double time(std::size_t i) const;

    /// max_i |T(t_i)|
    double sup_norm() const;

    /// View as a SampledFunction on [0, q] with all available derivatives.
    SampledFunction as_function(QuadratureOptions quadrature = {}) const;

    const std::optional<RootClassification>& classification() const noexcept { return classification_; }
    const std::vector<double>& constants() const noexcept { return constants_; }

    void set_classification(RootClassification c) { classification_ = c; }
    void set_constants(std::vector<double> c) { constants_ = std::move(c); }

private:
    int m_;
    SolverKind provenance_;
    double horizon_;
    std::vector<std::vector<double>> levels_;
    std::optional<RootClassification> classification_;
    std::vector<double> constants_;
};

/// Real fundamental system of the mode in T-space for a classified cubic,
/// shifted by -beta. Each member is Re or Im of t^p e^{rate t}.
struct FundamentalMember {
    std::complex<double> rate;  // mu - beta
    int power = 0;
    bool imaginary = false;
};

std::vector<FundamentalMember> fundamental_system(const RootClassification& c, double beta);

/// Matrix W(i, j) = d^i/dt^i member_j at t = 0, i = 0..2.
std::array<std::array<double, 3>, 3> fundamental_matrix(std::span<const FundamentalMember> system);

/// Homogeneous constants C_1..C_3 such that sum_j C_j member_j^(i)(0) equals
/// initial[i] - particular[i] for i = 0..2 (partial-pivot elimination).
/// Throws SingularSystemError when the fundamental matrix is singular.
std::vector<double> solve_constants(const RootClassification& c, double beta,
                                    std::span<const double> initial,
                                    std::span<const double> particular);

struct ClosedFormOptions {
    std::size_t steps = 4096;
    double degeneracy_tolerance = kDegeneracyTolerance;
};

/// Closed-form solution for third-order modes: case-dependent fundamental
/// system with constants from solve_constants and a variation-of-parameters
/// particular part accumulated on the time grid. Throws MismatchError when
/// the ODE order is not 3.
TemporalSolution solve_mode_closed_form(const ModeODE& ode, const RootClassification& c,
                                        const ClosedFormOptions& opts = {});
TemporalSolution solve_mode_closed_form(const ModeODE& ode, const ClosedFormOptions& opts = {});

struct CompanionOptions {
    std::size_t steps = 16384;
};

/// Classical RK4 on the companion first-order system of the reduced ODE,
/// any order. Throws ResolutionError for fewer than 16 steps.
TemporalSolution solve_mode_companion(const ModeODE& ode, const CompanionOptions& opts = {});

/// Eigenvalues of the companion matrix of a monic polynomial given in
/// ascending order (last entry 1).
std::vector<std::complex<double>> companion_eigenvalues(std::span<const double> monic);

/// max |a(t) - b(t)| over `samples` + 1 uniform points of [0, q].
double sup_difference(const TemporalSolution& a, const TemporalSolution& b,
                      std::size_t samples = 2048);

}  // namespace cfheat
