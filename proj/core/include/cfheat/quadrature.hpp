#pragma once

#include "cfheat/error.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace cfheat {

/// Composite trapezoid settings shared by the CF operator, the verifier and
/// the particular-solution integrals.
struct QuadratureOptions {
    /// Number of nodes including both endpoints (2^12 intervals by default).
    std::size_t nodes = 4097;
    /// Combine the h and 2h trapezoid sums as (4 T_h - T_2h) / 3.
    /// Requires an even number of intervals.
    bool richardson = false;
};

inline constexpr QuadratureOptions kDefaultQuadrature{};

/// Composite trapezoid of samples on a uniform grid of spacing h.
double trapezoid(std::span<const double> samples, double h);

/// Trapezoid with optional one-step Richardson extrapolation over the same samples.
double trapezoid(std::span<const double> samples, double h, bool richardson);

/// Uniform composite trapezoid of f over [a, b].
template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
    if (opts.nodes < 2) {
        throw ResolutionError("quadrature needs at least 2 nodes");
    }
    const std::size_t n = opts.nodes;
    const double h = (b - a) / static_cast<double>(n - 1);
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double s = (i + 1 == n) ? b : a + h * static_cast<double>(i);
        samples[i] = f(s);
    }
    return trapezoid(samples, h, opts.richardson);
}

/// Composite Simpson weights for an odd number of uniform nodes spanning a
/// segment of length `length`.
std::vector<double> simpson_weights(std::size_t nodes, double length);

}  // namespace cfheat
