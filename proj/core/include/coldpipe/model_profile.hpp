#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace coldpipe {

using TokenCount = std::int64_t;

// Transformer block hyperparameters (GQA attention + SwiGLU FFN).
struct ModelConfig {
  std::int64_t d_model = 0;
  std::int64_t h_q = 0;
  std::int64_t h_kv = 0;
  std::int64_t d_head = 0;
  std::int64_t d_ff = 0;
  std::int64_t num_layers = 0;
  std::int64_t bytes_per_element = 2;  // bf16

  // Throws InvalidArgument unless all fields are positive and h_kv <= h_q.
  void validate() const;

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

// Per-layer cost triple. Workload and activation depend on the token count,
// parameter bytes do not.
struct LayerProfile {
  double workload_flops = 0.0;
  double activation_bytes = 0.0;
  double param_bytes = 0.0;

  friend bool operator==(const LayerProfile&, const LayerProfile&) = default;
};

// Dimensions are evaluated in 128-bit integer arithmetic and rounded to double
// once, so results are exact below 2^53 and correctly rounded above. For
// Qwen3-14B-sized blocks the workload stays below 2^53 up to t ~ 10^7.

// 4 t d_head (d_model h_q + d_model h_kv + t h_q)
double attn_flops(const ModelConfig& cfg, TokenCount tokens);

// 6 t d_model d_ff
double ffn_flops(const ModelConfig& cfg, TokenCount tokens);

double layer_workload(const ModelConfig& cfg, TokenCount tokens);

// bytes_per_element * t * d_model
double activation_bytes(const ModelConfig& cfg, TokenCount tokens);

// bytes_per_element * (2 d_model d_head (h_q + h_kv) + 3 d_model d_ff)
double layer_param_bytes(const ModelConfig& cfg);

// num_layers identical profiles.
std::vector<LayerProfile> build_profiles(const ModelConfig& cfg, TokenCount tokens);

// Public Qwen3-14B block shape: hidden 5120, 40 query heads, 8 KV heads,
// head dim 128, FFN 17408, 40 layers, bf16.
ModelConfig qwen3_14b();

std::optional<ModelConfig> model_preset(std::string_view name);

}  // namespace coldpipe
