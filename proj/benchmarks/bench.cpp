#include <benchmark/benchmark.h>

#include "coldpipe/baselines.hpp"
#include "coldpipe/dp_scheduler.hpp"
#include "coldpipe/experiment.hpp"

namespace {

using namespace coldpipe;

// Fleet of `k` devices cycling through the reference rows, with enough
// memory that every subset is feasible.
std::vector<DeviceProfile> fleet(int k) {
  const std::vector<DeviceProfile> base = reference_fleet();
  std::vector<DeviceProfile> out;
  for (int i = 0; i < k; ++i) {
    DeviceProfile d = base[i % base.size()];
    d.id = i + 1;
    d.memory_bytes = 40e9;
    d.radio.distance_m *= 1.0 + 0.1 * i;
    out.push_back(d);
  }
  return out;
}

CostTables tables(int k, int num_layers, TokenCount tokens) {
  ModelConfig model = qwen3_14b();
  model.num_layers = num_layers;
  return CostTables::build(build_profiles(model, tokens), fleet(k), tokens);
}

void BM_CostTablesBuild(benchmark::State& state) {
  const auto layers = build_profiles(qwen3_14b(), 4096);
  const auto devices = reference_fleet();
  for (auto _ : state) benchmark::DoNotOptimize(CostTables::build(layers, devices, 4096));
}
BENCHMARK(BM_CostTablesBuild);

void BM_DpSolve(benchmark::State& state) {
  const CostTables t =
      tables(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 4096);
  for (auto _ : state) benchmark::DoNotOptimize(solve(t).makespan);
  state.counters["states"] = static_cast<double>(state_count(t.num_devices(), t.num_layers()));
}
BENCHMARK(BM_DpSolve)
    ->Args({4, 40})
    ->Args({6, 40})
    ->Args({8, 60})
    ->Args({10, 60})
    ->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const CostTables t =
      tables(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 4096);
  for (auto _ : state) benchmark::DoNotOptimize(brute_force(t).makespan);
}
BENCHMARK(BM_BruteForce)->Args({4, 8})->Args({5, 10})->Unit(benchmark::kMillisecond);

void BM_ReferenceSweep(benchmark::State& state) {
  const Scenario sc = reference_scenario();
  for (auto _ : state) benchmark::DoNotOptimize(run_sweep(sc).size());
}
BENCHMARK(BM_ReferenceSweep)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
