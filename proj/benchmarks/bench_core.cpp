#include <benchmark/benchmark.h>

#include "decaywalk/hitting.hpp"
#include "decaywalk/pgf.hpp"
#include "decaywalk/scale.hpp"
#include "decaywalk/simulate.hpp"

using namespace decaywalk;

static void BM_ScaleTable(benchmark::State& state)
{
    const WalkModel model{0.8, static_cast<int>(state.range(0))};
    for (auto _ : state)
        benchmark::DoNotOptimize(LogRatioTable{model, EnvParam{0.4}}.scale(model.boundary()));
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ScaleTable)->RangeMultiplier(4)->Range(4, 4096)->Complexity();

static void BM_SolveBvp(benchmark::State& state)
{
    const WalkModel model{0.8, static_cast<int>(state.range(0))};
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_bvp(BvpKind::return_to_origin, PgfQuery{0.7}, EnvParam{0.4}, model).values);
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SolveBvp)->RangeMultiplier(4)->Range(4, 4096)->Complexity();

static void BM_ProbReach(benchmark::State& state)
{
    const WalkModel model{0.8, static_cast<int>(state.range(0))};
    for (auto _ : state)
        benchmark::DoNotOptimize(prob_reach(model).value);
}
BENCHMARK(BM_ProbReach)->Arg(2)->Arg(10)->Arg(100);

static void BM_ExpectedHittingTime(benchmark::State& state)
{
    const WalkModel model{0.8, static_cast<int>(state.range(0))};
    for (auto _ : state)
        benchmark::DoNotOptimize(expected_hitting_time(model).value);
}
BENCHMARK(BM_ExpectedHittingTime)->Arg(2)->Arg(10);

static void BM_SimulateExcursions(benchmark::State& state)
{
    SimConfig config;
    config.model = WalkModel{0.8, 10};
    config.n_excursions = state.range(0);
    config.seed = 42;
    for (auto _ : state)
        benchmark::DoNotOptimize(simulate_excursions(config).excursions);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateExcursions)->Arg(1 << 14)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
