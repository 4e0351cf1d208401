#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "coldpipe/cost_tables.hpp"
#include "coldpipe/device_model.hpp"
#include "coldpipe/plan.hpp"

namespace coldpipe {

enum class StrategyId { kOptimalDp, kEven, kHeuristic, kSingleDevice, kBruteForce };

inline constexpr StrategyId kAllStrategies[] = {
    StrategyId::kOptimalDp, StrategyId::kEven, StrategyId::kHeuristic,
    StrategyId::kSingleDevice, StrategyId::kBruteForce};

// "optimal_dp", "even", "heuristic", "single_device", "brute_force".
std::string_view to_string(StrategyId id);
std::optional<StrategyId> parse_strategy(std::string_view name);

// The fixed-plan comparison strategies (everything except optimal_dp and
// brute_force, which search).
bool is_baseline(StrategyId id);

// How the heuristic scores a device before the harmonic mean.
//   kRaw:        H(c*, r) with c* in FLOP/s and r in bytes/s.
//   kNormalized: H(c*/max c*, r/max r) over the fleet.
enum class HeuristicScoring { kRaw, kNormalized };

std::string_view to_string(HeuristicScoring s);
std::optional<HeuristicScoring> parse_heuristic_scoring(std::string_view name);

// Fleet indices ordered strongest first: descending peak FLOPS, ties by index.
std::vector<int> strength_order(std::span<const DeviceProfile> devices);

// All layers on the strongest device. Memory is not checked by this strategy;
// evaluate it with MemoryCheck::kWaive.
Plan single_device_plan(std::span<const DeviceProfile> devices, int num_layers);

// Layer counts differing by at most one, extra layers on the strongest
// devices, stages ordered strongest first. With fewer layers than devices the
// weakest devices are left out.
Plan even_plan(std::span<const DeviceProfile> devices, int num_layers);

// Harmonic-mean score per device, one per fleet index.
std::vector<double> heuristic_scores(std::span<const DeviceProfile> devices,
                                     HeuristicScoring scoring);

// Layer counts proportional to the heuristic score (largest-remainder rounding,
// ties to stronger devices), stages ordered strongest first, zero-layer
// devices dropped.
Plan heuristic_plan(std::span<const DeviceProfile> devices, int num_layers,
                    HeuristicScoring scoring = HeuristicScoring::kRaw);

inline constexpr int kMaxBruteForceDevices = 5;
inline constexpr int kMaxBruteForceLayers = 10;

struct BruteForceResult {
  double makespan = 0.0;
  Plan plan;
  std::int64_t candidates = 0;  // enumerated (device sequence, composition) pairs
};

// Exhaustive oracle: every partition count N, every ordered choice of N
// distinct devices, every composition of the layers into N positive parts,
// each evaluated through `evaluate` with memory enforced. Candidates are
// visited by N ascending, so on exact ties the fewest-device plan wins.
// Throws InstanceTooLarge beyond the guards and Infeasible when nothing fits.
BruteForceResult brute_force(const CostTables& tables);

}  // namespace coldpipe
