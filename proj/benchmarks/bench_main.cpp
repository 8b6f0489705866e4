#include "cfheat/cf_operator.hpp"
#include "cfheat/cubic.hpp"
#include "cfheat/expr.hpp"
#include "cfheat/ode_reduction.hpp"
#include "cfheat/spectral.hpp"
#include "cfheat/temporal_solver.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

using namespace cfheat;

namespace {

SampledFunction cubic_poly(QuadratureOptions q) {
    return SampledFunction(0.0, 3, [](int o, double t) {
        switch (o) {
        case 0: return t * t * t;
        case 1: return 3 * t * t;
        case 2: return 6 * t;
        default: return 6.0;
        }
    }, q);
}

ModeODE sample_ode() {
    ProblemSpec s;
    s.order = FractionalOrder(0.5);
    s.lambdas = {1, 1, 1};
    const auto b = transform_coefficients(s, 1);
    ModeODE ode;
    ode.m = 1;
    ode.beta = s.order.beta();
    ode.horizon = 1.0;
    ode.coefficients = b;
    ode.rhs = [](double t) { return std::sin(3 * t) * std::exp(t); };
    ode.rhs_derivative = [](double t) { return (3 * std::cos(3 * t) + std::sin(3 * t)) * std::exp(t); };
    ode.initial = {0, 0, 0};
    ode.initial_transformed = {0, 0, 0};
    return ode;
}

}  // namespace

static void BM_CfDerivative(benchmark::State& state) {
    const auto g = cubic_poly({static_cast<std::size_t>(state.range(0)) + 1, state.range(1) != 0});
    const FractionalOrder ord(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(cf_derivative(g, ord, 1.3).value);
}
BENCHMARK(BM_CfDerivative)->ArgsProduct({{1 << 10, 1 << 12, 1 << 14}, {0, 1}});

static void BM_CfExpansion(benchmark::State& state) {
    const auto g = cubic_poly({});
    const FractionalOrder ord(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(cf_expansion(g, ord, 1, 1.3));
}
BENCHMARK(BM_CfExpansion);

static void BM_ClassifyCubic(benchmark::State& state) {
    double a = -6.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(classify_cubic(a, 11.0, -6.0));
        benchmark::ClobberMemory();
    }
}
BENCHMARK(BM_ClassifyCubic);

static void BM_ClosedForm(benchmark::State& state) {
    const auto ode = sample_ode();
    ClosedFormOptions opt;
    opt.steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_mode_closed_form(ode, opt).sup_norm());
}
BENCHMARK(BM_ClosedForm)->Arg(1 << 10)->Arg(1 << 12)->Unit(benchmark::kMillisecond);

static void BM_Companion(benchmark::State& state) {
    const auto ode = sample_ode();
    CompanionOptions opt;
    opt.steps = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(solve_mode_companion(ode, opt).sup_norm());
}
BENCHMARK(BM_Companion)->Arg(1 << 12)->Arg(1 << 14)->Unit(benchmark::kMillisecond);

static void BM_ProjectSine(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> samples(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(n - 1);
        samples[i] = x * x * x * (1 - x) * (1 - x) * (1 - x);
    }
    for (auto _ : state) benchmark::DoNotOptimize(project_sine(samples, 32));
}
BENCHMARK(BM_ProjectSine)->Arg(257)->Arg(1025);

static void BM_ExprEval(benchmark::State& state) {
    const auto e = expr::parse("t^4*x^3*(1-x)^3 + exp(-t)*sin(pi*x)");
    double t = 0.3;
    for (auto _ : state) benchmark::DoNotOptimize(expr::eval(e, t, 0.4));
}
BENCHMARK(BM_ExprEval);

static void BM_CompiledEval(benchmark::State& state) {
    const expr::CompiledExpr c(expr::parse("t^4*x^3*(1-x)^3 + exp(-t)*sin(pi*x)"));
    double t = 0.3;
    for (auto _ : state) benchmark::DoNotOptimize(c(t, 0.4));
}
BENCHMARK(BM_CompiledEval);

BENCHMARK_MAIN();
