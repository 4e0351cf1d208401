#pragma once

#include <cstdint>
#include <vector>

#include "coldpipe/cost_tables.hpp"
#include "coldpipe/plan.hpp"

namespace coldpipe {

inline constexpr int kMaxDpDevices = 24;

// Number of (device subset, last layer, last device) states: K * L * 2^K.
// Throws InstanceTooLarge for K > kMaxDpDevices.
std::int64_t state_count(int num_devices, int num_layers);

// Exact cold-start schedule table.
//
// value(S, j, d) is the earliest finish time of layers 1..j spread over the
// device set S (bitmask over fleet indices), with the segment ending at j on
// device d in S; +infinity when no memory-feasible schedule exists. A state's
// back-pointer names the split layer i (its predecessor covered 1..i) and the
// predecessor's device, or {0, -1} for a single-segment state.
class DpTable {
 public:
  struct Back {
    std::int16_t split = 0;
    std::int8_t prev_device = -1;
  };

  DpTable(int num_devices, int num_layers);

  int num_devices() const { return num_devices_; }
  int num_layers() const { return num_layers_; }

  double value(std::uint32_t mask, int last_layer, int device) const {
    return values_[index(mask, last_layer, device)];
  }
  Back back(std::uint32_t mask, int last_layer, int device) const {
    return backs_[index(mask, last_layer, device)];
  }

  void set(std::uint32_t mask, int last_layer, int device, double value, Back back) {
    const std::size_t i = index(mask, last_layer, device);
    values_[i] = value;
    backs_[i] = back;
  }

 private:
  std::size_t index(std::uint32_t mask, int last_layer, int device) const {
    return (static_cast<std::size_t>(mask) * num_layers_ + (last_layer - 1)) * num_devices_ +
           device;
  }

  int num_devices_;
  int num_layers_;
  std::vector<double> values_;
  std::vector<Back> backs_;
};

// Fills every state in the fixed order: last layer, subset mask, last device,
// split, predecessor device. Strict improvement only, so earlier candidates
// win exact ties (smaller split, then smaller predecessor index).
DpTable fill_dp_table(const CostTables& tables);

// Walks back-pointers from (mask, num_layers, device) and returns the stages
// in pipeline order. Throws std::logic_error on a broken chain.
Plan reconstruct(const DpTable& table, std::uint32_t mask, int device);

struct Solution {
  double makespan = 0.0;
  Plan plan;
};

// Minimum makespan over all partition counts, layer boundaries and device
// assignments. Among equal makespans the plan using fewer devices wins, then
// the smaller subset mask, then the smaller final device index.
// Throws Infeasible when no assignment satisfies the memory constraint.
Solution solve(const CostTables& tables);

}  // namespace coldpipe
