#pragma once

// Test-only reference computations. Nothing here calls into the code paths it
// is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "coldpipe/device_model.hpp"
#include "coldpipe/model_profile.hpp"
#include "coldpipe/plan.hpp"

namespace coldpipe::testing {

// Schoolbook decimal arithmetic on nonnegative integers held as digit strings.
inline std::string dec_add(const std::string& a, const std::string& b) {
  std::string out;
  int carry = 0;
  for (int i = static_cast<int>(a.size()) - 1, j = static_cast<int>(b.size()) - 1;
       i >= 0 || j >= 0 || carry; --i, --j) {
    int s = carry + (i >= 0 ? a[i] - '0' : 0) + (j >= 0 ? b[j] - '0' : 0);
    out.push_back(static_cast<char>('0' + s % 10));
    carry = s / 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

inline std::string dec_mul(const std::string& a, const std::string& b) {
  std::vector<int> acc(a.size() + b.size(), 0);
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) {
    for (int j = static_cast<int>(b.size()) - 1; j >= 0; --j) {
      acc[i + j + 1] += (a[i] - '0') * (b[j] - '0');
    }
  }
  for (int k = static_cast<int>(acc.size()) - 1; k > 0; --k) {
    acc[k - 1] += acc[k] / 10;
    acc[k] %= 10;
  }
  std::string out;
  for (int d : acc) {
    if (out.empty() && d == 0) continue;
    out.push_back(static_cast<char>('0' + d));
  }
  return out.empty() ? "0" : out;
}

inline std::string dec(std::int64_t v) { return std::to_string(v); }

inline std::string dec_prod(std::initializer_list<std::string> factors) {
  std::string p = "1";
  for (const auto& f : factors) p = dec_mul(p, f);
  return p;
}

// Correctly rounded double of a decimal integer string.
inline double dec_to_double(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

struct FormulaOracle {
  std::string attn, ffn, workload, activation, params;
};

inline FormulaOracle formula_oracle(const ModelConfig& c, std::int64_t t) {
  FormulaOracle o;
  const std::string inner = dec_add(dec_add(dec_mul(dec(c.d_model), dec(c.h_q)),
                                            dec_mul(dec(c.d_model), dec(c.h_kv))),
                                    dec_mul(dec(t), dec(c.h_q)));
  o.attn = dec_prod({"4", dec(t), dec(c.d_head), inner});
  o.ffn = dec_prod({"6", dec(t), dec(c.d_model), dec(c.d_ff)});
  o.workload = dec_add(o.attn, o.ffn);
  o.activation = dec_prod({dec(c.bytes_per_element), dec(t), dec(c.d_model)});
  o.params = dec_mul(dec(c.bytes_per_element),
                     dec_add(dec_prod({"2", dec(c.d_model), dec(c.d_head),
                                       dec_add(dec(c.h_q), dec(c.h_kv))}),
                             dec_prod({"3", dec(c.d_model), dec(c.d_ff)})));
  return o;
}

inline double rel_err(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0 ? 0 : std::abs(a - b) / scale;
}

// Random heterogeneous layer profiles in Qwen-like magnitudes.
inline std::vector<LayerProfile> random_layers(std::mt19937_64& rng, int num_layers) {
  std::uniform_real_distribution<double> w(1e11, 2e12), a(1e6, 1e8), p(1e8, 1.5e9);
  std::vector<LayerProfile> layers;
  for (int l = 0; l < num_layers; ++l) layers.push_back({w(rng), a(rng), p(rng)});
  return layers;
}

inline DeviceProfile random_device(std::mt19937_64& rng, int id, double memory_lo = 2e9,
                                   double memory_hi = 40e9) {
  auto lu = [&](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  };
  std::uniform_real_distribution<double> power(10, 30);
  DeviceProfile d;
  d.id = id;
  d.peak_flops = lu(10e12, 300e12);
  d.util_ceiling = lu(0.1, 1.0);
  d.util_rate = lu(1e-4, 5e-3);
  d.disk_read_bytes_per_s = lu(1e9, 8e9);
  d.memory_bytes = lu(memory_lo, memory_hi);
  d.radio = RadioParams{160e6, power(rng), power(rng), -174, lu(0.5, 10), 1, 3, -47.2, 0.5};
  return d;
}

inline std::vector<DeviceProfile> random_fleet(std::mt19937_64& rng, int k,
                                               double memory_lo = 2e9, double memory_hi = 40e9) {
  std::vector<DeviceProfile> fleet;
  for (int i = 0; i < k; ++i) fleet.push_back(random_device(rng, i + 1, memory_lo, memory_hi));
  return fleet;
}

// Makespan straight from layer sums and device formulas, without CostTables.
inline double replay_makespan(const Plan& plan, const std::vector<LayerProfile>& layers,
                              const std::vector<DeviceProfile>& devices, TokenCount tokens) {
  double finish = 0;
  const Stage* prev = nullptr;
  for (const Stage& s : plan.stages) {
    double params = 0, work = 0;
    for (int l = s.first_layer; l <= s.last_layer; ++l) {
      params += layers[l - 1].param_bytes;
      work += layers[l - 1].workload_flops;
    }
    const DeviceProfile& d = devices[s.device];
    const double load = params / d.disk_read_bytes_per_s;
    const double u = d.util_ceiling * (1 - std::exp(-d.util_rate * static_cast<double>(tokens)));
    const double comp = work / (d.peak_flops * u);
    double comm = 0;
    if (prev) {
      const double up = link_rate(devices[prev->device].radio, LinkDirection::kUp);
      const double down = link_rate(d.radio, LinkDirection::kDown);
      comm = 8 * layers[prev->last_layer - 1].activation_bytes / std::min(up, down);
    }
    finish = std::max(load, finish) + comm + comp;
    prev = &s;
  }
  return finish;
}

}  // namespace coldpipe::testing
