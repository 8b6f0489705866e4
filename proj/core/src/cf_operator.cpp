#include "cfheat/cf_operator.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace cfheat {

SampledFunction::SampledFunction(double base, int derivative_order, Evaluator eval,
                                 QuadratureOptions quadrature)
    : base_(base), derivative_order_(derivative_order), eval_(std::move(eval)),
      quadrature_(quadrature) {
    if (derivative_order_ < 0) {
        throw DerivativeOrderError("declared derivative order must be >= 0");
    }
    if (!eval_) {
        throw DomainError("sampled function needs an evaluator");
    }
}

double SampledFunction::derivative(int order, double t) const {
    if (order < 0 || order > derivative_order_) {
        throw DerivativeOrderError("derivative of order " + std::to_string(order) +
                                   " requested, function declares " +
                                   std::to_string(derivative_order_));
    }
    return eval_(order, t);
}

SampledFunction SampledFunction::with_quadrature(QuadratureOptions quadrature) const {
    SampledFunction copy = *this;
    copy.quadrature_ = quadrature;
    return copy;
}

namespace {

void check_interval(const SampledFunction& g, double t) {
    if (t < g.base()) {
        throw DomainError("CF derivative evaluated at t = " + std::to_string(t) +
                          " before the base point " + std::to_string(g.base()));
    }
    if (g.quadrature().nodes < 2) {
        throw ResolutionError("CF quadrature needs at least 2 nodes");
    }
}

// g^(order)' on the uniform grid of [a, t] by central differences of g^(order),
// second-order one-sided at both ends.
std::vector<double> differentiate_on_grid(const SampledFunction& g, int order, double a,
                                          double t, std::size_t n) {
    const double h = (t - a) / static_cast<double>(n - 1);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = g.derivative(order, i + 1 == n ? t : a + h * static_cast<double>(i));
    }
    std::vector<double> d(n);
    if (n == 2) {
        d[0] = d[1] = (v[1] - v[0]) / h;
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    }
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
    return d;
}

// (1/(1-alpha)) int_a^t D(s) e^{-beta(t-s)} ds where D = g^(order+1), analytic
// or differenced.
CfValue kernel_integral(const SampledFunction& g, const FractionalOrder& ord, int order,
                        double t) {
    check_interval(g, t);
    const double a = g.base();
    if (t == a) {
        return {0.0, order + 1 > g.derivative_order()};
    }
    const auto& q = g.quadrature();
    const std::size_t n = q.nodes;
    const double h = (t - a) / static_cast<double>(n - 1);
    const double beta = ord.beta();

    std::vector<double> samples(n);
    bool fd = false;
    if (order + 1 <= g.derivative_order()) {
        for (std::size_t i = 0; i < n; ++i) {
            const double s = i + 1 == n ? t : a + h * static_cast<double>(i);
            samples[i] = g.derivative(order + 1, s);
        }
    } else {
        samples = differentiate_on_grid(g, order, a, t, n);
        fd = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const double s = i + 1 == n ? t : a + h * static_cast<double>(i);
        samples[i] *= std::exp(-beta * (t - s));
    }
    return {ord.scale() * trapezoid(samples, h, q.richardson), fd};
}

}  // namespace

CfValue cf_derivative(const SampledFunction& g, const FractionalOrder& order, double t) {
    return kernel_integral(g, order, 0, t);
}

CfValue cf_derivative_higher(const SampledFunction& g, const FractionalOrder& order, int n,
                             double t) {
    if (n < 0) {
        throw DerivativeOrderError("CF order alpha + n needs n >= 0");
    }
    if (n == 0) {
        return cf_derivative(g, order, t);
    }
    if (g.derivative_order() < n + 1) {
        throw DerivativeOrderError("CF derivative of order alpha + " + std::to_string(n) +
                                   " needs " + std::to_string(n + 1) +
                                   " derivatives, function declares " +
                                   std::to_string(g.derivative_order()));
    }
    return kernel_integral(g, order, n, t);
}

double cf_expansion(const SampledFunction& g, const FractionalOrder& order, int n, double t) {
    if (n < 0) {
        throw DerivativeOrderError("CF order alpha + n needs n >= 0");
    }
    if (g.derivative_order() < n) {
        throw DerivativeOrderError("CF expansion of order alpha + " + std::to_string(n) +
                                   " needs " + std::to_string(n) + " derivatives");
    }
    check_interval(g, t);
    const double a = g.base();
    const double beta = order.beta();
    const double decay = std::exp(-beta * (t - a));

    double sum = 0.0;
    double power = 1.0;  // (-beta)^i
    for (int i = 0; i <= n; ++i) {
        sum += power * (g.derivative(n - i, t) - g.derivative(n - i, a) * decay);
        power *= -beta;
    }
    if (t > a) {
        const double integral = integrate(
            [&](double s) { return g(s) * std::exp(-beta * (t - s)); }, a, t, g.quadrature());
        sum += power * integral;
    }
    return order.scale() * sum;
}

}  // namespace cfheat
