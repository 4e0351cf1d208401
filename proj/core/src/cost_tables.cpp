#include "coldpipe/cost_tables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "coldpipe/errors.hpp"

namespace coldpipe {

CostTables CostTables::build(std::span<const LayerProfile> layers,
                             std::span<const DeviceProfile> devices, TokenCount tokens) {
  if (layers.empty()) throw InvalidArgument("cost tables need at least one layer");
  if (devices.empty()) throw InvalidArgument("cost tables need at least one device");

  CostTables t;
  t.tokens_ = tokens;
  const std::size_t num_layers = layers.size();
  t.prefix_param_.assign(num_layers + 1, 0.0);
  t.prefix_workload_.assign(num_layers + 1, 0.0);
  t.activation_.resize(num_layers);
  for (std::size_t l = 0; l < num_layers; ++l) {
    const LayerProfile& p = layers[l];
    if (!(p.workload_flops >= 0.0) || !(p.activation_bytes >= 0.0) || !(p.param_bytes >= 0.0)) {
      throw InvalidArgument("layer " + std::to_string(l + 1) + " has a negative cost");
    }
    t.prefix_param_[l + 1] = t.prefix_param_[l] + p.param_bytes;
    t.prefix_workload_[l + 1] = t.prefix_workload_[l] + p.workload_flops;
    t.activation_[l] = p.activation_bytes;
  }

  t.activation_max_.push_back(t.activation_);
  for (std::size_t span = 2; span <= num_layers; span *= 2) {
    const auto& prev = t.activation_max_.back();
    std::vector<double> next(num_layers - span + 1);
    for (std::size_t i = 0; i < next.size(); ++i) {
      next[i] = std::max(prev[i], prev[i + span / 2]);
    }
    t.activation_max_.push_back(std::move(next));
  }

  const std::size_t k = devices.size();
  for (const DeviceProfile& dev : devices) {
    dev.validate();
    t.compute_.push_back(coldpipe::effective_compute(dev, tokens));
    t.disk_read_.push_back(dev.disk_read_bytes_per_s);
    t.memory_.push_back(dev.memory_bytes);
    const double up = link_rate(dev.radio, LinkDirection::kUp);
    const double down = link_rate(dev.radio, LinkDirection::kDown);
    if (!(up > 0.0) || !(down > 0.0) || !std::isfinite(up) || !std::isfinite(down)) {
      throw DegenerateScenario("device " + std::to_string(dev.id) + " has a zero link rate");
    }
    t.uplink_.push_back(up);
    t.downlink_.push_back(down);
  }
  t.min_link_.resize(k * k);
  for (std::size_t from = 0; from < k; ++from) {
    for (std::size_t to = 0; to < k; ++to) {
      t.min_link_[from * k + to] = std::min(t.uplink_[from], t.downlink_[to]);
    }
  }
  return t;
}

void CostTables::check_segment(int first, int last) const {
  if (first < 1 || last > num_layers() || first > last) {
    throw InvalidArgument("invalid layer segment [" + std::to_string(first) + ", " +
                          std::to_string(last) + "] for " + std::to_string(num_layers()) +
                          " layers");
  }
}

void CostTables::check_device(int device) const {
  if (device < 0 || device >= num_devices()) {
    throw InvalidArgument("device index " + std::to_string(device) + " out of range");
  }
}

double CostTables::segment_param_bytes(int first, int last) const {
  check_segment(first, last);
  return prefix_param_[last] - prefix_param_[first - 1];
}

double CostTables::segment_workload(int first, int last) const {
  check_segment(first, last);
  return prefix_workload_[last] - prefix_workload_[first - 1];
}

double CostTables::load_time(int first, int last, int device) const {
  check_device(device);
  return segment_param_bytes(first, last) / disk_read_[device];
}

double CostTables::compute_time(int first, int last, int device) const {
  check_device(device);
  return segment_workload(first, last) / compute_[device];
}

double CostTables::min_link(int from_device, int to_device) const {
  check_device(from_device);
  check_device(to_device);
  return min_link_[static_cast<std::size_t>(from_device) * compute_.size() + to_device];
}

double CostTables::comm_time(int from_device, int to_device, int boundary_layer) const {
  if (from_device == to_device) {
    throw InvalidArgument("activation transfer from device " + std::to_string(from_device) +
                          " to itself");
  }
  if (boundary_layer < 1 || boundary_layer >= num_layers()) {
    throw InvalidArgument("transfer boundary layer " + std::to_string(boundary_layer) +
                          " must be in [1, " + std::to_string(num_layers() - 1) + "]");
  }
  return 8.0 * activation_[boundary_layer - 1] / min_link(from_device, to_device);
}

double CostTables::memory_footprint(int first, int last) const {
  check_segment(first, last);
  const auto len = static_cast<unsigned>(last - first + 1);
  const int level = std::bit_width(len) - 1;
  const auto& row = activation_max_[level];
  const double peak = std::max(row[first - 1], row[last - (1 << level)]);
  return peak + (prefix_param_[last] - prefix_param_[first - 1]);
}

CostTables CostTables::scaled(double compute_factor, double disk_factor) const {
  if (!(compute_factor > 0.0) || !(disk_factor > 0.0)) {
    throw InvalidArgument("scale factors must be positive");
  }
  CostTables out = *this;
  for (double& c : out.compute_) c *= compute_factor;
  for (double& r : out.disk_read_) r *= disk_factor;
  return out;
}

}  // namespace coldpipe
