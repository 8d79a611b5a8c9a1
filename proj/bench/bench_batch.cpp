#include <benchmark/benchmark.h>

#include "lqgwalk/sim.hpp"

using namespace lqgwalk;

namespace {

std::vector<ScenarioConfig> grid(int n) {
    ScenarioConfig base;
    base.steps.n_steps = 10;
    SweepGrid g;
    for (int i = 0; i < n; ++i) g.forces.push_back(-90.0 + 180.0 * i / std::max(1, n - 1));
    return sweep_scenarios(base, g);
}

void BM_BatchSerial(benchmark::State& state) {
    const auto cfgs = grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(run_batch_serial(cfgs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_BatchOpenMP(benchmark::State& state) {
    const auto cfgs = grid(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(run_batch(cfgs));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_SingleScenario(benchmark::State& state) {
    ScenarioConfig cfg;
    cfg.noise.enabled = true;
    for (auto _ : state) benchmark::DoNotOptimize(run_scenario(cfg));
}

} // namespace

BENCHMARK(BM_BatchSerial)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_BatchOpenMP)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SingleScenario)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
