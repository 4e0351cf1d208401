#include "coldpipe/dp_scheduler.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <new>
#include <stdexcept>
#include <string>

#include "coldpipe/errors.hpp"

namespace coldpipe {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::int64_t state_count(int num_devices, int num_layers) {
  if (num_devices < 1 || num_layers < 1) {
    throw InvalidArgument("state_count needs at least one device and one layer");
  }
  if (num_devices > kMaxDpDevices) {
    throw InstanceTooLarge("DP supports at most " + std::to_string(kMaxDpDevices) +
                           " devices, got " + std::to_string(num_devices));
  }
  return static_cast<std::int64_t>(num_devices) * num_layers * (std::int64_t{1} << num_devices);
}

DpTable::DpTable(int num_devices, int num_layers)
    : num_devices_(num_devices), num_layers_(num_layers) {
  if (num_layers > std::numeric_limits<std::int16_t>::max()) {
    throw InstanceTooLarge("DP supports at most 32767 layers");
  }
  const auto states = static_cast<std::size_t>(state_count(num_devices, num_layers));
  try {
    values_.assign(states, kInf);
    backs_.assign(states, Back{});
  } catch (const std::bad_alloc&) {
    throw InstanceTooLarge("cannot allocate " + std::to_string(states) + " DP states");
  }
}

DpTable fill_dp_table(const CostTables& tables) {
  const int k = tables.num_devices();
  const int num_layers = tables.num_layers();
  DpTable dp(k, num_layers);
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;

  for (int d = 0; d < k; ++d) {
    const std::uint32_t single = std::uint32_t{1} << d;
    for (int j = 1; j <= num_layers; ++j) {
      if (!tables.fits(1, j, d)) continue;
      dp.set(single, j, d, tables.load_time(1, j, d) + tables.compute_time(1, j, d), {});
    }
  }

  for (int j = 2; j <= num_layers; ++j) {
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      const int used = std::popcount(mask);
      // Each device in the set holds at least one of layers 1..j.
      if (used < 2 || used > j) continue;
      for (int d = 0; d < k; ++d) {
        if (((mask >> d) & 1u) == 0) continue;
        const std::uint32_t rest = mask ^ (std::uint32_t{1} << d);
        double best = kInf;
        DpTable::Back best_back;
        for (int i = used - 1; i <= j - 1; ++i) {
          if (!tables.fits(i + 1, j, d)) continue;
          const double load = tables.load_time(i + 1, j, d);
          const double comp = tables.compute_time(i + 1, j, d);
          for (int prev = 0; prev < k; ++prev) {
            if (((rest >> prev) & 1u) == 0) continue;
            const double upstream = dp.value(rest, i, prev);
            if (upstream == kInf) continue;
            const double finish =
                std::max(load, upstream) + tables.comm_time(prev, d, i) + comp;
            if (finish < best) {
              best = finish;
              best_back = {static_cast<std::int16_t>(i), static_cast<std::int8_t>(prev)};
            }
          }
        }
        if (best < kInf) dp.set(mask, j, d, best, best_back);
      }
    }
  }
  return dp;
}

Plan reconstruct(const DpTable& table, std::uint32_t mask, int device) {
  Plan reversed;
  int last = table.num_layers();
  for (;;) {
    if (device < 0 || device >= table.num_devices() || ((mask >> device) & 1u) == 0 ||
        last < 1) {
      throw std::logic_error("DP back-pointer chain is corrupt");
    }
    if (table.value(mask, last, device) == kInf) {
      throw std::logic_error("DP back-pointer chain reaches an unreachable state");
    }
    const DpTable::Back back = table.back(mask, last, device);
    reversed.stages.push_back(Stage{device, back.split + 1, last});
    if (back.split == 0) {
      if (back.prev_device != -1 || mask != (std::uint32_t{1} << device)) {
        throw std::logic_error("DP base state has an inconsistent back-pointer");
      }
      break;
    }
    if (back.split >= last) throw std::logic_error("DP back-pointer does not shrink the prefix");
    mask ^= std::uint32_t{1} << device;
    last = back.split;
    device = back.prev_device;
  }
  std::reverse(reversed.stages.begin(), reversed.stages.end());
  return reversed;
}

Solution solve(const CostTables& tables) {
  const DpTable dp = fill_dp_table(tables);
  const int k = tables.num_devices();
  const int num_layers = tables.num_layers();
  const std::uint32_t full = (std::uint32_t{1} << k) - 1;

  double best = kInf;
  std::uint32_t best_mask = 0;
  int best_device = -1;
  for (int used = 1; used <= std::min(k, num_layers); ++used) {
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
      if (std::popcount(mask) != used) continue;
      for (int d = 0; d < k; ++d) {
        if (((mask >> d) & 1u) == 0) continue;
        const double v = dp.value(mask, num_layers, d);
        if (v < best) {
          best = v;
          best_mask = mask;
          best_device = d;
        }
      }
    }
  }
  if (best == kInf) {
    throw Infeasible("no layer assignment satisfies the device memory limits");
  }
  return Solution{best, reconstruct(dp, best_mask, best_device)};
}

}  // namespace coldpipe
