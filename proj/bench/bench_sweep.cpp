// Landscape sweep timing: serial reference against the OpenMP kernel.

#include <benchmark/benchmark.h>

#include "ftlink/landscape.hpp"

namespace {

using namespace ftlink;

GridSpec bench_grid(int side) {
  GridSpec g;
  g.memory_min = 2000;
  g.memory_max = 20000;
  g.memory_count = side;
  g.r_bell_min = 1e-3;
  g.r_bell_max = 1e3;
  g.r_bell_count = side;
  return g;
}

void BM_SweepSerial(benchmark::State& state) {
  const auto grid = bench_grid(static_cast<int>(state.range(0)));
  const auto registry = default_registry();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_serial(grid, HardwareParams{}, ModelConfig{}, registry));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
}

void BM_SweepParallel(benchmark::State& state) {
  const auto grid = bench_grid(static_cast<int>(state.range(0)));
  const auto registry = default_registry();
  const int jobs = static_cast<int>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sweep_parallel(grid, HardwareParams{}, ModelConfig{}, registry, {}, jobs));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0) * state.range(0));
  state.counters["threads"] = jobs;
}

BENCHMARK(BM_SweepSerial)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_SweepParallel)
    ->ArgsProduct({{4, 8}, {1, 2, 4}})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
