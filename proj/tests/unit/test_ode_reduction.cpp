#include "cfheat/cf_operator.hpp"
#include "cfheat/ode_reduction.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace cfheat;

namespace {

ProblemSpec make_spec(double alpha, std::vector<double> lambdas) {
    ProblemSpec s;
    s.order = FractionalOrder(alpha);
    s.k = static_cast<int>(lambdas.size()) - 1;
    s.lambdas = std::move(lambdas);
    return s;
}

double binom(int n, int r) {
    if (r < 0 || r > n) return 0.0;
    return std::round(std::tgamma(n + 1.0) / (std::tgamma(r + 1.0) * std::tgamma(n - r + 1.0)));
}

// Collapsed form of the nested sums: coefficient of T~^(r) before normalisation.
std::vector<double> collapsed(const ProblemSpec& s, int m) {
    const double b = s.order.beta();
    const double w = std::pow(m * std::numbers::pi, 2) * (1 - s.order.alpha());
    std::vector<double> d(static_cast<std::size_t>(s.k) + 2, 0.0);
    for (int r = 0; r <= s.k + 1; ++r) {
        for (int n = std::max(0, r - 1); n <= s.k; ++n) {
            d[static_cast<std::size_t>(r)] +=
                s.lambdas[static_cast<std::size_t>(n)] * binom(n + 1, r) * std::pow(-b, n + 1 - r);
        }
        if (r == 1) d[1] += w;
    }
    const double lead = d.back();
    for (double& v : d) v /= lead;
    return d;
}

ModalCoefficients linear_mode() {
    return {1, [](double t) { return t; }, [](double) { return 1.0; }, [](double) { return 0.0; }};
}

}  // namespace

TEST(TransformCoefficients, SecondOrderExample) {
    const auto b = transform_coefficients(make_spec(0.5, {0, 0, 1}), 1);
    ASSERT_EQ(b.size(), 4u);
    EXPECT_NEAR(b[2], -3.0, 1e-15);
    EXPECT_NEAR(b[1], 7.93480220054467931, 1e-14);
    EXPECT_NEAR(b[0], -1.0, 1e-15);
    EXPECT_EQ(b[3], 1.0);
}

TEST(TransformCoefficients, GrowthInMode) {
    const auto s = make_spec(0.3, {0.5, -1, 2});
    const auto b10 = transform_coefficients(s, 10);
    const auto b20 = transform_coefficients(s, 20);
    EXPECT_DOUBLE_EQ(b10[2], b20[2]);
    EXPECT_DOUBLE_EQ(b10[0], b20[0]);
    const double slope = (b20[1] - b10[1]) / (std::pow(20 * std::numbers::pi, 2) - std::pow(10 * std::numbers::pi, 2));
    EXPECT_NEAR(slope, 0.7 / 2.0, 1e-12);
}

TEST(TransformCoefficients, SingleTermNormalisesByTrueLeadingCoefficient) {
    const auto s = make_spec(0.5, {1});
    const auto b = transform_coefficients(s, 1);
    ASSERT_EQ(b.size(), 2u);
    EXPECT_EQ(b[1], 1.0);
    EXPECT_NEAR(b[0], -0.168497612255421560, 1e-15);
    EXPECT_DOUBLE_EQ(leading_coefficient(s, 1), 1.0 + std::pow(std::numbers::pi, 2) * 0.5);
}

TEST(TransformCoefficients, MatchesCollapsedSums) {
    for (int k = 0; k <= 4; ++k) {
        for (double alpha : {0.15, 0.5, 0.85}) {
            std::vector<double> lambdas;
            for (int n = 0; n <= k; ++n) lambdas.push_back(0.7 - 0.4 * n + 0.1 * n * n);
            const auto s = make_spec(alpha, lambdas);
            for (int m : {1, 3, 9}) {
                const auto a = transform_coefficients(s, m);
                const auto b = collapsed(s, m);
                ASSERT_EQ(a.size(), b.size());
                for (std::size_t j = 0; j < a.size(); ++j) {
                    EXPECT_NEAR(a[j], b[j], 1e-11 * std::max(1.0, std::abs(b[j]))) << k << " " << j;
                }
            }
        }
    }
}

TEST(TransformCoefficients, RejectsZeroLeadingCoefficient) {
    EXPECT_THROW(transform_coefficients(make_spec(0.5, {1, 1, 0}), 1), ProblemError);
    try {
        make_spec(0.5, {1, 1, 0}).validate();
        FAIL();
    } catch (const ProblemError& e) {
        EXPECT_STREQ(e.what(), "leading coefficient lambda_k must be nonzero");
    }
}

TEST(TransformCoefficients, DifferentiatedEquationConsistency) {
    // For T = T~ e^{-beta t}, lead * sum_j B_j T~^(j) equals the t-derivative of
    // (1 - alpha) e^{beta t} [sum_n lambda_n CF D^{alpha+n} T + (m pi)^2 T].
    for (int k = 0; k <= 3; ++k) {
        std::vector<double> lambdas;
        for (int n = 0; n <= k; ++n) lambdas.push_back(1.0 + 0.5 * n);
        const auto s = make_spec(0.4, lambdas);
        const double beta = s.order.beta();
        const int m = 2;
        std::vector<double> p(static_cast<std::size_t>(k) + 2);
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = 0.3 + 0.2 * static_cast<double>(i);
        auto ptilde = [&](int order, double t) {
            double v = 0.0;
            for (std::size_t i = static_cast<std::size_t>(order); i < p.size(); ++i) {
                double f = 1.0;
                for (int j = 0; j < order; ++j) f *= static_cast<double>(i) - j;
                v += p[i] * f * std::pow(t, static_cast<double>(i) - order);
            }
            return v;
        };
        const SampledFunction T(0.0, k + 2, [&](int order, double t) {
            double v = 0.0;
            for (int j = 0; j <= order; ++j) v += binom(order, j) * std::pow(-beta, order - j) * ptilde(j, t);
            return std::exp(-beta * t) * v;
        }, {4097, true});
        const double w = std::pow(m * std::numbers::pi, 2);
        auto bracket = [&](double t) {
            double v = w * T(t);
            for (int n = 0; n <= k; ++n) v += lambdas[static_cast<std::size_t>(n)] * cf_derivative_higher(T, s.order, n, t).value;
            return (1 - s.order.alpha()) * std::exp(beta * t) * v;
        };
        const auto B = transform_coefficients(s, m);
        const double lead = leading_coefficient(s, m);
        for (double t : {0.3, 0.8}) {
            double lhs = 0.0;
            for (std::size_t j = 0; j < B.size(); ++j) lhs += B[j] * ptilde(static_cast<int>(j), t);
            lhs *= lead;
            const double h = 1e-4;
            const double rhs = (bracket(t + h) - bracket(t - h)) / (2 * h);
            EXPECT_NEAR(lhs, rhs, 1e-6 * std::max(1.0, std::abs(lhs))) << "k=" << k;
        }
    }
}

TEST(TransformedRhs, Examples) {
    const auto s = make_spec(0.5, {0, 0, 1});
    const ModalCoefficients zero{1, [](double) { return 0.0; }, [](double) { return 0.0; }, {}};
    EXPECT_EQ(transformed_rhs(s, zero, 0.7), 0.0);
    EXPECT_DOUBLE_EQ(transformed_rhs(s, linear_mode(), 0.0), 0.5);
    // (0.5 * 1 + 0.5 * 1) e = e
    EXPECT_NEAR(transformed_rhs(s, linear_mode(), 1.0), 2.71828182845904524, 1e-14);
    const ModalCoefficients missing{1, [](double t) { return t; }, {}, {}};
    EXPECT_THROW(transformed_rhs(s, missing, 0.5), DerivativeOrderError);
}

TEST(InitialConditions, Examples) {
    const std::vector<double> z{0, 0, 0};
    EXPECT_EQ(transform_initial_conditions(z, 1.0), z);
    EXPECT_EQ(transform_initial_conditions(std::vector<double>{1, 0, 0}, 1.0), (std::vector<double>{1, 1, 1}));
    EXPECT_EQ(transform_initial_conditions(std::vector<double>{0, 1, 0}, 1.0), (std::vector<double>{0, 1, 2}));
}

TEST(InitialConditions, RoundTrip) {
    for (double beta : {0.1, 1.0, 4.0, 10.0}) {
        for (int k = 0; k <= 4; ++k) {
            std::vector<double> c;
            for (int i = 0; i <= k; ++i) c.push_back(std::sin(1.0 + i) * (i + 1));
            const auto back = inverse_initial_conditions(transform_initial_conditions(c, beta), beta);
            for (std::size_t i = 0; i < c.size(); ++i) {
                EXPECT_NEAR(back[i], c[i], 1e-12 * std::max(1.0, std::pow(beta, static_cast<double>(i))));
            }
        }
    }
}

TEST(InverseTransform, Examples) {
    EXPECT_EQ(inverse_transform(1.0, 1.0, 0.0), 1.0);
    EXPECT_NEAR(inverse_transform(std::exp(1.0), 1.0, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(inverse_transform(2.5, 0.25, 2.0), 1.51632664928158356, 1e-15);
}

TEST(ProblemSpec, Validation) {
    auto s = make_spec(0.5, {0, 0, 1});
    EXPECT_NO_THROW(s.validate());
    s.lambdas = {1, 1};
    EXPECT_THROW(s.validate(), ProblemError);
    s = make_spec(0.5, {0, 0, 1});
    s.initial = {{0, 0}};
    EXPECT_THROW(s.validate(), ProblemError);
    s = make_spec(0.5, {0, 0, 1});
    s.horizon = 2.0;
    EXPECT_THROW(s.validate(), ProblemError);
    s = make_spec(0.5, {0, 0, 1});
    s.modes = 0;
    EXPECT_THROW(s.validate(), ProblemError);
}

TEST(ReduceMode, FallsBackToFiniteDifferences) {
    const auto s = make_spec(0.5, {0, 0, 1});
    ModalCoefficients fm{1, [](double t) { return t * t; }, [](double t) { return 2 * t; }, {}};
    const auto ode = reduce_mode(s, fm);
    EXPECT_TRUE(ode.rhs_derivative_approximated);
    fm.second_derivative = [](double) { return 2.0; };
    const auto exact = reduce_mode(s, fm);
    EXPECT_FALSE(exact.rhs_derivative_approximated);
    EXPECT_NEAR(ode.rhs_derivative(0.5), exact.rhs_derivative(0.5), 1e-6);
    EXPECT_EQ(exact.order(), 3);
    EXPECT_EQ(exact.initial_transformed, (std::vector<double>{0, 0, 0}));
}
