#include "cfheat/quadrature.hpp"

namespace cfheat {

double trapezoid(std::span<const double> samples, double h) {
    const std::size_t n = samples.size();
    if (n < 2) {
        throw ResolutionError("trapezoid rule needs at least 2 samples");
    }
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        interior += samples[i];
    }
    return h * (0.5 * (samples.front() + samples.back()) + interior);
}

double trapezoid(std::span<const double> samples, double h, bool richardson) {
    if (!richardson) {
        return trapezoid(samples, h);
    }
    const std::size_t intervals = samples.size() - 1;
    if (samples.size() < 3 || intervals % 2 != 0) {
        throw ResolutionError("Richardson extrapolation needs an even number of intervals");
    }
    const double fine = trapezoid(samples, h);
    double coarse_interior = 0.0;
    for (std::size_t i = 2; i + 1 < samples.size(); i += 2) {
        coarse_interior += samples[i];
    }
    const double coarse = 2.0 * h * (0.5 * (samples.front() + samples.back()) + coarse_interior);
    return (4.0 * fine - coarse) / 3.0;
}

std::vector<double> simpson_weights(std::size_t nodes, double length) {
    if (nodes < 3 || nodes % 2 == 0) {
        throw ResolutionError("Simpson rule needs an odd number of nodes >= 3");
    }
    const double h = length / static_cast<double>(nodes - 1);
    std::vector<double> w(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        if (i == 0 || i + 1 == nodes) {
            w[i] = h / 3.0;
        } else {
            w[i] = (i % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
        }
    }
    return w;
}

}  // namespace cfheat
