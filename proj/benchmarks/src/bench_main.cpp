#include <benchmark/benchmark.h>

#include "fyk/moments.hpp"
#include "fyk/solver.hpp"
#include "fyk/specfun.hpp"

using namespace fyk;

static void BM_BesselK(benchmark::State& state) {
    double t = 0.01;
    for (auto _ : state) {
        benchmark::DoNotOptimize(bessel_k(0.3, t));
        t = t > 30.0 ? 0.01 : t * 1.07;
    }
}
BENCHMARK(BM_BesselK);

static void BM_MomentRatios(benchmark::State& state) {
    const ProblemIndex idx{7, 0.25};
    for (auto _ : state) benchmark::DoNotOptimize(compute_integrals(idx, IntegralMethod::bessel_moments).C0);
}
BENCHMARK(BM_MomentRatios)->Unit(benchmark::kMillisecond);

static void BM_ExtensionSolve(benchmark::State& state) {
    const ProblemIndex idx{3, 0.5};
    const int nodes = static_cast<int>(state.range(0));
    const WeightedGrid g = WeightedGrid::make(idx, 8.0, 8.0, nodes, nodes);
    for (auto _ : state) benchmark::DoNotOptimize(solve_bubble_extension(idx, g).values(0, 0));
}
BENCHMARK(BM_ExtensionSolve)->Arg(33)->Arg(65)->Arg(129)->Unit(benchmark::kMillisecond);

static void BM_Lambda1(benchmark::State& state) {
    const ProblemIndex idx{3, 0.5};
    const double h = 1.0 / static_cast<double>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(rayleigh_lambda1(idx, 1.0, h).lambda1);
}
BENCHMARK(BM_Lambda1)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
