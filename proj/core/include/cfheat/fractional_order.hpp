#pragma once

#include "cfheat/error.hpp"

#include <cmath>
#include <string>

namespace cfheat {

/// Order alpha of a Caputo-Fabrizio derivative, 0 < alpha < 1.
///
/// The kernel decay rate beta = alpha / (1 - alpha) is derived on every call
/// so that the two can never disagree.
class FractionalOrder {
public:
    explicit FractionalOrder(double alpha) : alpha_(alpha) {
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw DomainError("fractional order alpha must lie in (0, 1), got " +
                              std::to_string(alpha));
        }
    }

    double alpha() const noexcept { return alpha_; }
    double beta() const noexcept { return alpha_ / (1.0 - alpha_); }

    /// 1 / (1 - alpha), the kernel normalisation.
    double scale() const noexcept { return 1.0 / (1.0 - alpha_); }

private:
    double alpha_;
};

}  // namespace cfheat
