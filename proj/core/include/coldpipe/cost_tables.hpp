#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "coldpipe/device_model.hpp"
#include "coldpipe/model_profile.hpp"

namespace coldpipe {

// Segment cost lookups for one (layers, fleet, token count) scenario.
//
// Layer indices are 1-based: a segment [first, last] satisfies
// 1 <= first <= last <= num_layers(). Device indices are 0-based positions in
// the fleet passed to build(). Every lookup is O(1).
class CostTables {
 public:
  static CostTables build(std::span<const LayerProfile> layers,
                          std::span<const DeviceProfile> devices, TokenCount tokens);

  int num_layers() const { return static_cast<int>(activation_.size()); }
  int num_devices() const { return static_cast<int>(compute_.size()); }
  TokenCount tokens() const { return tokens_; }

  // Parameter bytes of the segment over the device's disk read speed.
  double load_time(int first, int last, int device) const;

  // Segment FLOPs over the device's effective compute at this token count.
  double compute_time(int first, int last, int device) const;

  // Activation produced by `boundary_layer`, shipped sender -> AP -> receiver
  // over the slower of the sender's uplink and the receiver's downlink.
  // Sizes are bytes, rates bits/s.
  double comm_time(int from_device, int to_device, int boundary_layer) const;

  // Largest activation inside the segment plus its parameter bytes.
  double memory_footprint(int first, int last) const;

  double segment_param_bytes(int first, int last) const;
  double segment_workload(int first, int last) const;

  double effective_compute(int device) const { return compute_.at(device); }
  double disk_read(int device) const { return disk_read_.at(device); }
  double memory_capacity(int device) const { return memory_.at(device); }
  double uplink(int device) const { return uplink_.at(device); }
  double downlink(int device) const { return downlink_.at(device); }
  double min_link(int from_device, int to_device) const;

  bool fits(int first, int last, int device) const {
    return memory_footprint(first, last) <= memory_capacity(device);
  }

  // Copy with every device's effective compute and disk speed multiplied.
  CostTables scaled(double compute_factor, double disk_factor) const;

  const std::vector<double>& prefix_param_bytes() const { return prefix_param_; }
  const std::vector<double>& prefix_workload_flops() const { return prefix_workload_; }

 private:
  void check_segment(int first, int last) const;
  void check_device(int device) const;

  TokenCount tokens_ = 0;
  std::vector<double> prefix_param_;     // size L+1, [0] = 0
  std::vector<double> prefix_workload_;  // size L+1, [0] = 0
  std::vector<double> activation_;       // size L, activation_[l-1] = A_l
  // activation_max_[k][i] = max A over layers i+1 .. i+2^k (sparse table).
  std::vector<std::vector<double>> activation_max_;
  std::vector<double> compute_;
  std::vector<double> disk_read_;
  std::vector<double> memory_;
  std::vector<double> uplink_;
  std::vector<double> downlink_;
  std::vector<double> min_link_;  // K x K, row = sender
};

}  // namespace coldpipe
