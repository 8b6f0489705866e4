#include "cfheat/temporal_solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace cfheat;

namespace {

RootClassification distinct(double n1, double n2, double n3, double beta) {
    RootClassification c;
    c.kind = RootCase::three_distinct_real;
    c.roots = {n1 + beta, n2 + beta, n3 + beta};
    return c;
}

// Reduced ODE with T~* = t^3 (T* = t^3 e^{-beta t}), zero data.
ModeODE manufactured(double a1, double a2, double a3, double beta) {
    ModeODE ode;
    ode.beta = beta;
    ode.horizon = 1.0;
    ode.coefficients = {a3, a2, a1, 1.0};
    ode.rhs = [=](double t) { return 6 + 6 * a1 * t + 3 * a2 * t * t + a3 * t * t * t; };
    ode.rhs_derivative = [=](double t) { return 6 * a1 + 6 * a2 * t + 3 * a3 * t * t; };
    ode.initial = {0, 0, 0};
    ode.initial_transformed = {0, 0, 0};
    return ode;
}

double manufactured_error(const TemporalSolution& s, double beta) {
    double e = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        const double t = i / 1000.0;
        e = std::max(e, std::abs(s(t) - t * t * t * std::exp(-beta * t)));
    }
    return e;
}

ModeODE homogeneous(std::vector<double> coefficients, std::vector<double> initial, double beta) {
    ModeODE ode;
    ode.beta = beta;
    ode.horizon = 1.0;
    ode.coefficients = std::move(coefficients);
    ode.rhs = [](double) { return 0.0; };
    ode.rhs_derivative = [](double) { return 0.0; };
    ode.initial = initial;
    ode.initial_transformed = transform_initial_conditions(initial, beta);
    return ode;
}

}  // namespace

TEST(SolveConstants, ZeroRightSide) {
    const auto c = solve_constants(distinct(0, 1, 2, 0.5), 0.5, std::vector<double>{1, 2, 3},
                                   std::vector<double>{1, 2, 3});
    for (double v : c) EXPECT_EQ(v, 0.0);
}

TEST(SolveConstants, Vandermonde) {
    const auto c = solve_constants(distinct(0, 1, 2, 1.0), 1.0, std::vector<double>{3, 3, 5},
                                   std::vector<double>{0, 0, 0});
    EXPECT_NEAR(c[0], 1.0, 1e-14);
    EXPECT_NEAR(c[1], 1.0, 1e-14);
    EXPECT_NEAR(c[2], 1.0, 1e-14);
}

TEST(SolveConstants, SymmetricNodes) {
    // Columns (1, nu, nu^2) at nu = -1, 0, 1; (-1, 0, 1) maps to (0, 2, 0).
    const auto c = solve_constants(distinct(-1, 0, 1, 0.0), 0.0, std::vector<double>{0, 2, 0},
                                   std::vector<double>{0, 0, 0});
    EXPECT_NEAR(c[0], -1.0, 1e-14);
    EXPECT_NEAR(c[1], 0.0, 1e-14);
    EXPECT_NEAR(c[2], 1.0, 1e-14);
}

TEST(SolveConstants, SingularSystem) {
    EXPECT_THROW(solve_constants(distinct(1, 1, 2, 0.0), 0.0, std::vector<double>{1, 0, 0},
                                 std::vector<double>{0, 0, 0}),
                 SingularSystemError);
}

TEST(FundamentalSystem, RepeatedAndComplexMembers) {
    RootClassification c;
    c.kind = RootCase::triple_root;
    c.roots = {2.0, 2.0, 2.0};
    const auto s = fundamental_system(c, 0.5);
    ASSERT_EQ(s.size(), 3u);
    EXPECT_EQ(s[2].power, 2);
    const auto w = fundamental_matrix(s);
    // t^2 e^{1.5 t}: value 0, slope 0, second derivative 2
    EXPECT_EQ(w[0][2], 0.0);
    EXPECT_EQ(w[1][2], 0.0);
    EXPECT_EQ(w[2][2], 2.0);
    EXPECT_EQ(w[2][0], 2.25);

    c.kind = RootCase::one_real_conjugate_pair;
    c.roots = {1.0, {0.5, 2.0}, {0.5, -2.0}};
    const auto p = fundamental_system(c, 0.5);
    EXPECT_FALSE(p[1].imaginary);
    EXPECT_TRUE(p[2].imaginary);
    const auto wp = fundamental_matrix(p);
    EXPECT_EQ(wp[0][2], 0.0);
    EXPECT_EQ(wp[1][2], 2.0);
    EXPECT_EQ(wp[2][1], -4.0);
}

TEST(ClosedForm, ZeroProblemGivesZero) {
    const auto ode = homogeneous({1, 3, 3, 1}, {0, 0, 0}, 0.7);
    const auto s = solve_mode_closed_form(ode);
    EXPECT_EQ(s.sup_norm(), 0.0);
    EXPECT_EQ(s.provenance(), SolverKind::closed_form);
}

TEST(ClosedForm, ManufacturedSolutionAllCases) {
    const std::vector<std::array<double, 3>> cubics{
        {6, 11, 6}, {1, 3, 5}, {-4, 5, -2}, {3, 3, 1}, {0.3, -2, 0.7}};
    for (const auto& a : cubics) {
        const auto ode = manufactured(a[0], a[1], a[2], 1.0);
        EXPECT_LE(manufactured_error(solve_mode_closed_form(ode), 1.0), 1e-9);
        EXPECT_LE(manufactured_error(solve_mode_companion(ode), 1.0), 1e-9);
    }
}

TEST(ClosedForm, InitialConditionsExact) {
    const std::vector<double> init{0.3, -1.2, 2.5};
    for (const auto& coeffs : std::vector<std::vector<double>>{
             {-6, 11, -6, 1}, {5, 3, 1, 1}, {-2, 5, -4, 1}, {1, 3, 3, 1}}) {
        const auto s = solve_mode_closed_form(homogeneous(coeffs, init, 0.4));
        for (int i = 0; i < 3; ++i) {
            EXPECT_NEAR(s.derivative(i, 0.0), init[static_cast<std::size_t>(i)], 1e-8);
        }
        ASSERT_TRUE(s.classification().has_value());
        EXPECT_EQ(s.constants().size(), 3u);
    }
}

TEST(ClosedForm, HigherLevelsFollowTheEquation) {
    const auto ode = manufactured(1, 3, 5, 0.6);
    const auto s = solve_mode_closed_form(ode);
    for (double t : {0.2, 0.55, 1.0}) {
        // T''' for T = t^3 e^{-b t}
        const double b = 0.6;
        const double e = std::exp(-b * t);
        const double t3 = e * (6 - 18 * b * t + 9 * b * b * t * t - b * b * b * t * t * t);
        EXPECT_NEAR(s.derivative(3, t), t3, 1e-8);
    }
    EXPECT_EQ(s.max_derivative(), 3);
    EXPECT_THROW(s.derivative(4, 0.1), DerivativeOrderError);
    EXPECT_THROW(s.derivative(0, 1.5), DomainError);
}

TEST(ClosedForm, Errors) {
    auto ode = homogeneous({1, 1}, {0}, 1.0);
    EXPECT_THROW(solve_mode_closed_form(ode), MismatchError);
    ode = homogeneous({1, 3, 3, 1}, {0, 0, 0}, 1.0);
    EXPECT_THROW(solve_mode_closed_form(ode, ClosedFormOptions{8}), ResolutionError);
}

TEST(Companion, ZeroProblemAndResolution) {
    const auto ode = homogeneous({0.5, 2, 1, 1}, {0, 0, 0}, 1.0);
    EXPECT_EQ(solve_mode_companion(ode).sup_norm(), 0.0);
    EXPECT_THROW(solve_mode_companion(ode, CompanionOptions{15}), ResolutionError);
}

TEST(Companion, Eigenvalues) {
    const auto e = companion_eigenvalues(std::vector<double>{-6, 11, -6, 1});
    ASSERT_EQ(e.size(), 3u);
    EXPECT_NEAR(e[0].real(), 1.0, 1e-10);
    EXPECT_NEAR(e[1].real(), 2.0, 1e-10);
    EXPECT_NEAR(e[2].real(), 3.0, 1e-10);
    EXPECT_THROW(companion_eigenvalues(std::vector<double>{1, 2}), MismatchError);
}

TEST(Companion, GeneralOrder) {
    // T~' + T~ = 0 with T~(0) = 1 and beta = 0.5: T = e^{-1.5 t}
    const auto first = solve_mode_companion(homogeneous({1, 1}, {1}, 0.5));
    EXPECT_NEAR(first(1.0), std::exp(-1.5), 1e-12);
    // T~'''' = 0 with T~ = 1 + t + t^2 + t^3 data
    ModeODE ode = homogeneous({0, 0, 0, 0, 1}, {}, 0.0);
    ode.initial_transformed = {1, 1, 2, 6};
    const auto fourth = solve_mode_companion(ode);
    EXPECT_NEAR(fourth(0.5), 1 + 0.5 + 0.25 + 0.125, 1e-12);
    EXPECT_NEAR(fourth.derivative(2, 0.5), 2 + 6 * 0.5, 1e-12);
}

TEST(CrossSolver, RandomProblemsAgree) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int i = 0; i < 10; ++i) {
        const double a1 = u(rng), a2 = u(rng), a3 = u(rng);
        ModeODE ode;
        ode.beta = 0.2 + 0.3 * i;
        ode.horizon = 1.0;
        ode.coefficients = {a3, a2, a1, 1.0};
        ode.rhs = [](double t) { return std::sin(3 * t) + t * t; };
        ode.rhs_derivative = [](double t) { return 3 * std::cos(3 * t) + 2 * t; };
        ode.initial = {0.1, -0.2, 0.3};
        ode.initial_transformed = transform_initial_conditions(ode.initial, ode.beta);
        EXPECT_LE(sup_difference(solve_mode_closed_form(ode), solve_mode_companion(ode)), 1e-8);
    }
}

TEST(TemporalSolution, AsFunctionExposesDerivatives) {
    const auto s = solve_mode_closed_form(manufactured(1, 3, 5, 1.0));
    const auto f = s.as_function();
    EXPECT_EQ(f.derivative_order(), 3);
    EXPECT_DOUBLE_EQ(f(0.4), s(0.4));
    EXPECT_EQ(s.nodes(0).size(), s.steps() + 1);
    EXPECT_DOUBLE_EQ(s.time(s.steps()), 1.0);
}
