#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace cfheat::detail {

/// Piecewise cubic Hermite interpolant on a uniform grid over [t0, t0 + h n].
class UniformHermite {
public:
    UniformHermite() = default;
    UniformHermite(double t0, double h, std::vector<double> values, std::vector<double> slopes)
        : t0_(t0), h_(h), v_(std::move(values)), d_(std::move(slopes)) {}

    double operator()(double t) const {
        const std::size_t n = v_.size() - 1;
        double s = (t - t0_) / h_;
        s = std::clamp(s, 0.0, static_cast<double>(n));
        std::size_t i = static_cast<std::size_t>(s);
        if (i >= n) {
            i = n - 1;
        }
        const double u = s - static_cast<double>(i);
        if (u == 0.0) {
            return v_[i];
        }
        const double u2 = u * u;
        const double u3 = u2 * u;
        const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
        const double h10 = u3 - 2.0 * u2 + u;
        const double h01 = -2.0 * u3 + 3.0 * u2;
        const double h11 = u3 - u2;
        return h00 * v_[i] + h_ * h10 * d_[i] + h01 * v_[i + 1] + h_ * h11 * d_[i + 1];
    }

    const std::vector<double>& values() const noexcept { return v_; }

private:
    double t0_ = 0.0;
    double h_ = 1.0;
    std::vector<double> v_;
    std::vector<double> d_;
};

}  // namespace cfheat::detail
