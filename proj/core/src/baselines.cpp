#include "coldpipe/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "coldpipe/errors.hpp"
#include "coldpipe/timeline.hpp"

namespace coldpipe {
namespace {

void require_fleet(std::span<const DeviceProfile> devices, int num_layers) {
  if (devices.empty()) throw InvalidArgument("strategy needs at least one device");
  if (num_layers < 1) throw InvalidArgument("strategy needs at least one layer");
}

// Stages in `order`, skipping devices with zero layers.
Plan plan_from_counts(const std::vector<int>& order, const std::vector<int>& counts) {
  Plan plan;
  int next = 1;
  for (std::size_t n = 0; n < order.size(); ++n) {
    if (counts[n] == 0) continue;
    plan.stages.push_back(Stage{order[n], next, next + counts[n] - 1});
    next += counts[n];
  }
  return plan;
}

double harmonic_mean(double x, double y) { return 2.0 / (1.0 / x + 1.0 / y); }

}  // namespace

std::string_view to_string(StrategyId id) {
  switch (id) {
    case StrategyId::kOptimalDp:
      return "optimal_dp";
    case StrategyId::kEven:
      return "even";
    case StrategyId::kHeuristic:
      return "heuristic";
    case StrategyId::kSingleDevice:
      return "single_device";
    case StrategyId::kBruteForce:
      return "brute_force";
  }
  return "unknown";
}

std::optional<StrategyId> parse_strategy(std::string_view name) {
  for (StrategyId id : kAllStrategies) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

bool is_baseline(StrategyId id) {
  return id == StrategyId::kEven || id == StrategyId::kHeuristic ||
         id == StrategyId::kSingleDevice;
}

std::string_view to_string(HeuristicScoring s) {
  return s == HeuristicScoring::kRaw ? "raw" : "normalized";
}

std::optional<HeuristicScoring> parse_heuristic_scoring(std::string_view name) {
  if (name == "raw") return HeuristicScoring::kRaw;
  if (name == "normalized") return HeuristicScoring::kNormalized;
  return std::nullopt;
}

std::vector<int> strength_order(std::span<const DeviceProfile> devices) {
  std::vector<int> order(devices.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return devices[a].peak_flops > devices[b].peak_flops;
  });
  return order;
}

Plan single_device_plan(std::span<const DeviceProfile> devices, int num_layers) {
  require_fleet(devices, num_layers);
  return Plan{{Stage{strength_order(devices).front(), 1, num_layers}}};
}

Plan even_plan(std::span<const DeviceProfile> devices, int num_layers) {
  require_fleet(devices, num_layers);
  const std::vector<int> order = strength_order(devices);
  const int k = static_cast<int>(order.size());
  std::vector<int> counts(order.size(), num_layers / k);
  for (int n = 0; n < num_layers % k; ++n) ++counts[n];
  return plan_from_counts(order, counts);
}

std::vector<double> heuristic_scores(std::span<const DeviceProfile> devices,
                                     HeuristicScoring scoring) {
  double compute_scale = 1.0;
  double disk_scale = 1.0;
  if (scoring == HeuristicScoring::kNormalized) {
    compute_scale = 0.0;
    disk_scale = 0.0;
    for (const DeviceProfile& d : devices) {
      compute_scale = std::max(compute_scale, d.peak_flops);
      disk_scale = std::max(disk_scale, d.disk_read_bytes_per_s);
    }
  }
  std::vector<double> scores;
  scores.reserve(devices.size());
  for (const DeviceProfile& d : devices) {
    scores.push_back(
        harmonic_mean(d.peak_flops / compute_scale, d.disk_read_bytes_per_s / disk_scale));
  }
  return scores;
}

Plan heuristic_plan(std::span<const DeviceProfile> devices, int num_layers,
                    HeuristicScoring scoring) {
  require_fleet(devices, num_layers);
  const std::vector<int> order = strength_order(devices);
  const std::vector<double> scores = heuristic_scores(devices, scoring);
  const double total = std::accumulate(scores.begin(), scores.end(), 0.0);

  std::vector<int> counts(order.size());
  std::vector<double> remainders(order.size());
  int assigned = 0;
  for (std::size_t n = 0; n < order.size(); ++n) {
    const double quota = num_layers * scores[order[n]] / total;
    counts[n] = static_cast<int>(std::floor(quota));
    remainders[n] = quota - counts[n];
    assigned += counts[n];
  }
  std::vector<std::size_t> by_remainder(order.size());
  std::iota(by_remainder.begin(), by_remainder.end(), std::size_t{0});
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](std::size_t a, std::size_t b) { return remainders[a] > remainders[b]; });
  for (std::size_t r = 0; assigned < num_layers; ++r, ++assigned) {
    ++counts[by_remainder[r % by_remainder.size()]];
  }
  return plan_from_counts(order, counts);
}

BruteForceResult brute_force(const CostTables& tables) {
  const int k = tables.num_devices();
  const int num_layers = tables.num_layers();
  if (k > kMaxBruteForceDevices || num_layers > kMaxBruteForceLayers) {
    throw InstanceTooLarge("brute force is limited to " + std::to_string(kMaxBruteForceDevices) +
                           " devices and " + std::to_string(kMaxBruteForceLayers) +
                           " layers; got " + std::to_string(k) + " devices and " +
                           std::to_string(num_layers) + " layers");
  }

  BruteForceResult result;
  result.makespan = std::numeric_limits<double>::infinity();
  bool found = false;

  for (int n = 1; n <= std::min(k, num_layers); ++n) {
    // Ordered selections of n distinct devices, lexicographic.
    std::vector<int> devices(n);
    std::vector<bool> taken(k, false);
    auto for_each_sequence = [&](auto&& self, int pos, auto&& visit) -> void {
      if (pos == n) {
        visit();
        return;
      }
      for (int d = 0; d < k; ++d) {
        if (taken[d]) continue;
        taken[d] = true;
        devices[pos] = d;
        self(self, pos + 1, visit);
        taken[d] = false;
      }
    };

    // Compositions of num_layers into n positive parts as n-1 cut points.
    std::vector<int> cuts(n - 1);
    for_each_sequence(for_each_sequence, 0, [&] {
      std::iota(cuts.begin(), cuts.end(), 1);
      for (;;) {
        ++result.candidates;
        Plan plan;
        int first = 1;
        bool fits = true;
        for (int s = 0; s < n; ++s) {
          const int last = s + 1 < n ? cuts[s] : num_layers;
          if (!tables.fits(first, last, devices[s])) fits = false;
          plan.stages.push_back(Stage{devices[s], first, last});
          first = last + 1;
        }
        if (fits) {
          const double t = evaluate(plan, tables, MemoryCheck::kEnforce).makespan;
          if (t < result.makespan) {
            result.makespan = t;
            result.plan = std::move(plan);
            found = true;
          }
        }
        // Advance to the next combination of cut points in [1, num_layers-1].
        int pos = n - 2;
        while (pos >= 0 && cuts[pos] == num_layers - 1 - (n - 2 - pos)) --pos;
        if (pos < 0) break;
        ++cuts[pos];
        for (int q = pos + 1; q < n - 1; ++q) cuts[q] = cuts[q - 1] + 1;
      }
    });
  }

  if (!found) throw Infeasible("no layer assignment satisfies the device memory limits");
  return result;
}

}  // namespace coldpipe
