#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coldpipe/baselines.hpp"
#include "coldpipe/device_model.hpp"
#include "coldpipe/model_profile.hpp"
#include "coldpipe/plan.hpp"
#include "coldpipe/timeline.hpp"

namespace coldpipe {

struct Scenario {
  std::string model_name;
  ModelConfig model;
  std::vector<DeviceProfile> devices;
  std::vector<TokenCount> token_lengths;
  std::vector<StrategyId> strategies;
  HeuristicScoring heuristic_scoring = HeuristicScoring::kRaw;
  std::uint64_t seed = 0;

  // Throws InvalidArgument on an empty or nonpositive token grid, an empty
  // strategy list, or invalid model/device parameters.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// Reference setup: Qwen3-14B on the four-device fleet, token lengths
// 256..8192 in powers of two, optimal_dp plus the three baselines.
Scenario reference_scenario();

// Powers of two from `lo` to `hi` inclusive.
std::vector<TokenCount> power_of_two_grid(TokenCount lo, TokenCount hi);

// Per-strategy plan for one token length. single_device plans are evaluated
// without the memory check; everything else enforces it.
struct StrategyRun {
  StrategyId strategy;
  Plan plan;
  Timeline timeline;
};

StrategyRun run_strategy(StrategyId strategy, const CostTables& tables,
                         std::span<const DeviceProfile> devices,
                         HeuristicScoring scoring = HeuristicScoring::kRaw);

struct ResultRow {
  TokenCount token_length = 0;
  StrategyId strategy = StrategyId::kOptimalDp;
  double makespan = 0.0;
  Plan plan;
  Timeline timeline;
  // (T_best_baseline - T_dp) / T_best_baseline; set on optimal_dp rows only,
  // and only when at least one baseline ran at the same token length.
  std::optional<double> improvement;

  double load_total() const;
  double comm_total() const;
  double comp_total() const;
  double wait_total() const;
};

// One row per (token length, strategy), grouped by token length in grid
// order, strategies in scenario order. Token lengths run on up to
// `max_threads` workers; the output does not depend on the thread count.
// Solver errors are rethrown with the token length prepended.
std::vector<ResultRow> run_sweep(const Scenario& scenario, unsigned max_threads = 1);

struct SweepSummary {
  // Mean over token lengths of the optimal_dp improvement vs the best baseline.
  double mean_improvement_vs_best = 0.0;
  // Per-baseline improvements (T_s - T_dp) / T_s over every token length.
  double min_improvement_vs_any = 0.0;
  double max_improvement_vs_any = 0.0;
};

// Throws InvalidArgument when the rows contain no optimal_dp/baseline pairs.
SweepSummary summarize(const std::vector<ResultRow>& rows);

// Small randomized instance for oracle checks.
struct SmallInstance {
  Scenario scenario;  // one token length, strategies {optimal_dp, brute_force}
  TokenCount tokens = 0;
  // False when no single device can hold the whole model; the instance may
  // still be solvable across several devices.
  bool single_device_feasible = true;
};

// `count` instances with K in [1,4], L in [1,8] and device parameters drawn
// log-uniformly around the reference fleet. Deterministic in `seed`.
std::vector<SmallInstance> random_instance_suite(int count, std::uint64_t seed);

}  // namespace coldpipe
