#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "subgrowth/growth_transform.hpp"
#include "subgrowth/solver.hpp"

using namespace subgrowth;

namespace {

void BM_growth_transform_closed(benchmark::State& state) {
    GrowthTransform gt(make_nonlinearity("power", {{"beta", 0.5}}));
    double x = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gt.F(x));
        x = x < 1e12 ? x * 1.001 : 1.0;
    }
}
BENCHMARK(BM_growth_transform_closed);

void BM_growth_transform_numeric(benchmark::State& state) {
    // rv-osc carries no closed forms, so F runs through the chained quadrature
    // cache; steady state measures the incremental per-call cost.
    GrowthTransform gt(make_nonlinearity("rv-osc"));
    gt.F(1e12);  // warm the node cache
    double x = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gt.F(x));
        x = x < 1e12 ? x * 1.001 : 1.0;
    }
}
BENCHMARK(BM_growth_transform_numeric);

void BM_inverse_transform(benchmark::State& state) {
    GrowthTransform gt(make_nonlinearity("rv-osc"));
    gt.F(1e12);
    double y = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(gt.F_inverse(y));
        y = y < 1e6 ? y * 1.01 : 1.0;
    }
}
BENCHMARK(BM_inverse_transform);

void BM_exp_recursion_step(benchmark::State& state) {
    const auto w = exp_kernel_step(1.0, 1.0, 1.0 / 64.0);
    double I = 0.0, f_old = 1.0, f_new = 1.1;
    for (auto _ : state) {
        I = w.decay * I + w.w_old * f_old + w.w_new * f_new;
        benchmark::DoNotOptimize(I);
    }
}
BENCHMARK(BM_exp_recursion_step);

void BM_direct_window_step(benchmark::State& state) {
    // The windowed-sum alternative the recursion replaces, at a fixed window.
    const std::size_t window = static_cast<std::size_t>(state.range(0));
    const auto w = exp_kernel_step(1.0, 1.0, 1.0 / 64.0);
    std::vector<double> fv(window + 1, 1.0);
    for (std::size_t i = 0; i <= window; ++i) fv[i] = 1.0 + 1e-3 * static_cast<double>(i);
    for (auto _ : state) {
        double I = 0.0;
        double decay_pow = 1.0;
        for (std::size_t j = window; j-- > 0;) {
            I += decay_pow * (w.w_old * fv[j] + w.w_new * fv[j + 1]);
            decay_pow *= w.decay;
        }
        benchmark::DoNotOptimize(I);
    }
}
BENCHMARK(BM_direct_window_step)->Arg(64)->Arg(512);

void BM_solver_delay_atom(benchmark::State& state) {
    const double t_end = static_cast<double>(state.range(0));
    Measure mu1({{1.0, 1.0}}, {});
    auto nl = make_nonlinearity("power", {{"beta", 0.5}});
    SolverOptions opts;
    opts.mesh.t_end = t_end;
    opts.mesh.h0 = 1.0 / 64.0;
    for (auto _ : state) {
        auto sol = solve_fde(mu1, Measure{}, nl, History::constant(1.0, 1.0), opts);
        benchmark::DoNotOptimize(sol.values.back());
    }
}
BENCHMARK(BM_solver_delay_atom)->Arg(100)->Arg(10000);

void BM_solver_exp_kernel(benchmark::State& state) {
    const double t_end = static_cast<double>(state.range(0));
    Measure mu2({}, {exponential_density(1.0)});
    auto nl = make_nonlinearity("power", {{"beta", 0.5}});
    SolverOptions opts;
    opts.mesh.t_end = t_end;
    opts.mesh.h0 = 1.0 / 64.0;
    for (auto _ : state) {
        auto sol = solve_fde(Measure{}, mu2, nl, History::constant(1.0), opts);
        benchmark::DoNotOptimize(sol.values.back());
    }
}
BENCHMARK(BM_solver_exp_kernel)->Arg(100)->Arg(10000);

void BM_spiky_eval(benchmark::State& state) {
    auto nl = make_nonlinearity("spiky");
    nl.f(1e6);  // warm the breakpoint cache
    double x = 0.5;
    for (auto _ : state) {
        benchmark::DoNotOptimize(nl.f(x));
        x = x < 1e6 ? x * 1.01 : 0.5;
    }
}
BENCHMARK(BM_spiky_eval);

}  // namespace

BENCHMARK_MAIN();
