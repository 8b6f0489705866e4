#include "cfheat/ode_reduction.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cfheat {

namespace {

double binomial(int n, int r) {
    if (r < 0 || r > n) {
        return 0.0;
    }
    double b = 1.0;
    for (int i = 1; i <= r; ++i) {
        b = b * static_cast<double>(n - r + i) / static_cast<double>(i);
    }
    return b;
}

double mode_stiffness(int m) {
    const double w = static_cast<double>(m) * std::numbers::pi;
    return w * w;
}

}  // namespace

void ProblemSpec::validate() const {
    if (k < 0) {
        throw ProblemError("k must be a nonnegative integer");
    }
    if (lambdas.size() != static_cast<std::size_t>(k) + 1) {
        throw ProblemError("lambdas must have exactly k + 1 = " + std::to_string(k + 1) +
                           " entries, got " + std::to_string(lambdas.size()));
    }
    for (double l : lambdas) {
        if (!std::isfinite(l)) {
            throw ProblemError("lambdas must be finite");
        }
    }
    if (lambdas.back() == 0.0) {
        throw ProblemError("leading coefficient lambda_k must be nonzero");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw ProblemError("horizon q must be a positive finite number");
    }
    if (forcing.horizon() != horizon) {
        throw ProblemError("forcing horizon does not match q");
    }
    if (modes < 1) {
        throw ProblemError("mode count M must be >= 1");
    }
    if (nt < 1 || nx < 2) {
        throw ProblemError("grid needs nt >= 1 and nx >= 2");
    }
    for (std::size_t i = 0; i < initial.size(); ++i) {
        if (!initial[i].empty() && initial[i].size() != static_cast<std::size_t>(k) + 1) {
            throw ProblemError("initial data of mode " + std::to_string(i + 1) +
                               " must have k + 1 entries");
        }
    }
    if (k == 0) {
        for (int m = 1; m <= modes; ++m) {
            if (leading_coefficient(*this, m) == 0.0) {
                throw ProblemError("reduced equation of mode " + std::to_string(m) +
                                   " has a vanishing leading coefficient");
            }
        }
    }
}

std::vector<double> ProblemSpec::initial_data(int m) const {
    const auto idx = static_cast<std::size_t>(m - 1);
    if (m >= 1 && idx < initial.size() && !initial[idx].empty()) {
        return initial[idx];
    }
    return std::vector<double>(static_cast<std::size_t>(k) + 1, 0.0);
}

double leading_coefficient(const ProblemSpec& spec, int m) {
    if (spec.k == 0) {
        return spec.lambdas.at(0) + mode_stiffness(m) * (1.0 - spec.order.alpha());
    }
    return spec.lambdas.at(static_cast<std::size_t>(spec.k));
}

std::vector<double> transform_coefficients(const ProblemSpec& spec, int m) {
    const int k = spec.k;
    if (spec.lambdas.size() != static_cast<std::size_t>(k) + 1) {
        throw ProblemError("lambdas must have exactly k + 1 entries");
    }
    if (spec.lambdas.back() == 0.0) {
        throw ProblemError("leading coefficient lambda_k must be nonzero");
    }
    const double nb = -spec.order.beta();

    // Coefficients of the undifferentiated reduced equation:
    //   sum_j e[j] (T~^(j)(t) - T~^(j)(0)) + integral * int_0^t T~ + stiffness * T~ = rhs
    std::vector<double> e(static_cast<std::size_t>(k) + 1, 0.0);
    double integral = 0.0;
    for (int n = 0; n <= k; ++n) {
        const double lambda = spec.lambdas[static_cast<std::size_t>(n)];
        double outer = 1.0;  // (-beta)^i
        for (int i = 0; i <= n; ++i) {
            for (int j = 0; j <= n - i; ++j) {
                double inner = 1.0;  // (-beta)^(n-i-j)
                for (int p = 0; p < n - i - j; ++p) {
                    inner *= nb;
                }
                e[static_cast<std::size_t>(j)] += lambda * outer * binomial(n - i, j) * inner;
            }
            outer *= nb;
        }
        integral += lambda * outer;  // outer == (-beta)^(n+1) here
    }

    // One t-derivative: T~^(j) -> T~^(j+1), integral -> T~.
    std::vector<double> d(static_cast<std::size_t>(k) + 2, 0.0);
    d[0] = integral;
    for (int j = 0; j <= k; ++j) {
        d[static_cast<std::size_t>(j) + 1] += e[static_cast<std::size_t>(j)];
    }
    d[1] += mode_stiffness(m) * (1.0 - spec.order.alpha());

    const double lead = d.back();
    if (lead == 0.0) {
        throw ProblemError("reduced equation has a vanishing leading coefficient");
    }
    for (double& c : d) {
        c /= lead;
    }
    d.back() = 1.0;
    return d;
}

double transformed_rhs(const ProblemSpec& spec, const ModalCoefficients& fm, double t) {
    if (!fm.value || !fm.first_derivative) {
        throw DerivativeOrderError("transformed right-hand side needs f_m and f_m'");
    }
    const double alpha = spec.order.alpha();
    return (alpha * fm.value(t) + (1.0 - alpha) * fm.first_derivative(t)) *
           std::exp(spec.order.beta() * t) / leading_coefficient(spec, fm.m);
}

std::vector<double> transform_initial_conditions(std::span<const double> c, double beta) {
    std::vector<double> out(c.size(), 0.0);
    for (std::size_t j = 0; j < c.size(); ++j) {
        double power = 1.0;  // beta^(j - i), i running down from j
        for (std::size_t ii = 0; ii <= j; ++ii) {
            const std::size_t i = j - ii;
            out[j] += binomial(static_cast<int>(j), static_cast<int>(i)) * power * c[i];
            power *= beta;
        }
    }
    return out;
}

std::vector<double> inverse_initial_conditions(std::span<const double> c_tilde, double beta) {
    return transform_initial_conditions(c_tilde, -beta);
}

double inverse_transform(double value, double beta, double t) { return value * std::exp(-beta * t); }

ModeODE reduce_mode(const ProblemSpec& spec, const ModalCoefficients& fm) {
    if (!fm.value || !fm.first_derivative) {
        throw DerivativeOrderError("mode reduction needs f_m and f_m'");
    }
    ModeODE ode;
    ode.m = fm.m;
    ode.beta = spec.order.beta();
    ode.horizon = spec.horizon;
    ode.coefficients = transform_coefficients(spec, fm.m);

    const double alpha = spec.order.alpha();
    const double beta = ode.beta;
    const double lead = leading_coefficient(spec, fm.m);
    auto value = fm.value;
    auto first = fm.first_derivative;
    ode.rhs = [=](double t) {
        return (alpha * value(t) + (1.0 - alpha) * first(t)) * std::exp(beta * t) / lead;
    };
    if (fm.second_derivative) {
        auto second = fm.second_derivative;
        auto g = ode.rhs;
        ode.rhs_derivative = [=](double t) {
            return (alpha * first(t) + (1.0 - alpha) * second(t)) * std::exp(beta * t) / lead +
                   beta * g(t);
        };
    } else {
        auto g = ode.rhs;
        const double h = spec.horizon / 4096.0;
        ode.rhs_derivative = [=](double t) { return (g(t + h) - g(t - h)) / (2.0 * h); };
        ode.rhs_derivative_approximated = true;
    }
    ode.initial = spec.initial_data(fm.m);
    ode.initial_transformed = transform_initial_conditions(ode.initial, beta);
    return ode;
}

}  // namespace cfheat
