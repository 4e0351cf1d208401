#include "coldpipe/model_profile.hpp"

#include <string>

#include "coldpipe/errors.hpp"

namespace coldpipe {
namespace {

__extension__ using Wide = unsigned __int128;

// Bounds keep every 128-bit intermediate product below 2^127.
constexpr std::int64_t kMaxDimension = 10'000'000;
constexpr TokenCount kMaxTokens = 1'000'000'000;

void require_tokens(TokenCount tokens) {
  if (tokens < 1) {
    throw InvalidArgument("token count must be >= 1, got " + std::to_string(tokens));
  }
  if (tokens > kMaxTokens) {
    throw InvalidArgument("token count " + std::to_string(tokens) + " exceeds " +
                          std::to_string(kMaxTokens));
  }
}

Wide w(std::int64_t v) { return static_cast<Wide>(v); }

double to_double(Wide v) { return static_cast<double>(v); }

}  // namespace

void ModelConfig::validate() const {
  auto positive = [](std::int64_t v, const char* name) {
    if (v <= 0) {
      throw InvalidArgument(std::string("model.") + name + " must be positive, got " +
                            std::to_string(v));
    }
    if (v > kMaxDimension) {
      throw InvalidArgument(std::string("model.") + name + " exceeds " +
                            std::to_string(kMaxDimension));
    }
  };
  positive(d_model, "d_model");
  positive(h_q, "h_q");
  positive(h_kv, "h_kv");
  positive(d_head, "d_head");
  positive(d_ff, "d_ff");
  positive(num_layers, "num_layers");
  positive(bytes_per_element, "bytes_per_element");
  if (h_kv > h_q) {
    throw InvalidArgument("model.h_kv (" + std::to_string(h_kv) + ") exceeds model.h_q (" +
                          std::to_string(h_q) + ")");
  }
}

double attn_flops(const ModelConfig& cfg, TokenCount tokens) {
  cfg.validate();
  require_tokens(tokens);
  const Wide t = w(tokens);
  return to_double(4 * t * w(cfg.d_head) *
                   (w(cfg.d_model) * w(cfg.h_q) + w(cfg.d_model) * w(cfg.h_kv) + t * w(cfg.h_q)));
}

double ffn_flops(const ModelConfig& cfg, TokenCount tokens) {
  cfg.validate();
  require_tokens(tokens);
  return to_double(6 * w(tokens) * w(cfg.d_model) * w(cfg.d_ff));
}

double layer_workload(const ModelConfig& cfg, TokenCount tokens) {
  cfg.validate();
  require_tokens(tokens);
  const Wide t = w(tokens);
  const Wide attn =
      4 * t * w(cfg.d_head) *
      (w(cfg.d_model) * w(cfg.h_q) + w(cfg.d_model) * w(cfg.h_kv) + t * w(cfg.h_q));
  const Wide ffn = 6 * t * w(cfg.d_model) * w(cfg.d_ff);
  return to_double(attn + ffn);
}

double activation_bytes(const ModelConfig& cfg, TokenCount tokens) {
  cfg.validate();
  require_tokens(tokens);
  return to_double(w(cfg.bytes_per_element) * w(tokens) * w(cfg.d_model));
}

double layer_param_bytes(const ModelConfig& cfg) {
  cfg.validate();
  const Wide attn = 2 * w(cfg.d_model) * w(cfg.d_head) * (w(cfg.h_q) + w(cfg.h_kv));
  const Wide ffn = 3 * w(cfg.d_model) * w(cfg.d_ff);
  return to_double(w(cfg.bytes_per_element) * (attn + ffn));
}

std::vector<LayerProfile> build_profiles(const ModelConfig& cfg, TokenCount tokens) {
  const LayerProfile layer{
      .workload_flops = layer_workload(cfg, tokens),
      .activation_bytes = activation_bytes(cfg, tokens),
      .param_bytes = layer_param_bytes(cfg),
  };
  return std::vector<LayerProfile>(static_cast<std::size_t>(cfg.num_layers), layer);
}

ModelConfig qwen3_14b() {
  return ModelConfig{
      .d_model = 5120,
      .h_q = 40,
      .h_kv = 8,
      .d_head = 128,
      .d_ff = 17408,
      .num_layers = 40,
      .bytes_per_element = 2,
  };
}

std::optional<ModelConfig> model_preset(std::string_view name) {
  if (name == "qwen3_14b") return qwen3_14b();
  return std::nullopt;
}

}  // namespace coldpipe
