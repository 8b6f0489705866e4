#pragma once

#include "cfheat/fractional_order.hpp"
#include "cfheat/quadrature.hpp"

#include <functional>

namespace cfheat {

/// A scalar function of time on [a, t] together with a declared number of
/// analytic derivatives and the quadrature resolution used on it.
class SampledFunction {
public:
    /// Called as eval(order, t) for 0 <= order <= declared derivative order.
    using Evaluator = std::function<double(int, double)>;

    SampledFunction(double base, int derivative_order, Evaluator eval,
                    QuadratureOptions quadrature = {});

    double base() const noexcept { return base_; }
    int derivative_order() const noexcept { return derivative_order_; }
    const QuadratureOptions& quadrature() const noexcept { return quadrature_; }

    double operator()(double t) const { return eval_(0, t); }

    /// Throws DerivativeOrderError when `order` exceeds the declared order.
    double derivative(int order, double t) const;

    /// Same function with a different quadrature resolution.
    SampledFunction with_quadrature(QuadratureOptions quadrature) const;

private:
    double base_;
    int derivative_order_;
    Evaluator eval_;
    QuadratureOptions quadrature_;
};

/// Result of a quadrature-based CF derivative.
struct CfValue {
    double value = 0.0;
    /// Set when g' had to be approximated by finite differences.
    bool finite_difference = false;
};

/// (1/(1-alpha)) * int_a^t g'(s) exp(-beta (t - s)) ds by composite trapezoid.
///
/// Uses the analytic first derivative when g declares one; otherwise g' is
/// replaced by central differences on the quadrature grid (second-order
/// one-sided stencils at the ends) and the result is flagged.
/// Returns exactly 0 at t == a.
CfValue cf_derivative(const SampledFunction& g, const FractionalOrder& order, double t);

/// CF derivative of order alpha + n, i.e. cf_derivative applied to g^(n).
/// Requires g to declare n + 1 derivatives when n >= 1.
CfValue cf_derivative_higher(const SampledFunction& g, const FractionalOrder& order,
                             int n, double t);

/// Integration-by-parts form of the order alpha + n derivative:
///
///   1/(1-alpha) { sum_{i=0}^{n} (-beta)^i [g^(n-i)(t) - g^(n-i)(a) e^{-beta(t-a)}]
///                 + (-beta)^{n+1} int_a^t g(s) e^{-beta(t-s)} ds }
///
/// Needs only g^(0..n); serves as an independent route to cf_derivative_higher.
double cf_expansion(const SampledFunction& g, const FractionalOrder& order, int n, double t);

}  // namespace cfheat
