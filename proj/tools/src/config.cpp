#include "coldpipe_app/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string_view>

namespace coldpipe::app {
namespace {

// Quantity that may be given either in a display unit or in SI.
struct UnitKey {
  const char* scaled;  // e.g. "memory_gb"
  const char* si;      // e.g. "memory_bytes"
  double factor;       // si = scaled * factor
};

constexpr UnitKey kMemory{"memory_gb", "memory_bytes", 1e9};
constexpr UnitKey kDisk{"disk_read_mb_s", "disk_read_bytes_per_s", 1e6};
constexpr UnitKey kBandwidth{"bandwidth_mhz", "bandwidth_hz", 1e6};

const std::set<std::string> kTopKeys{"model", "radio", "devices", "experiment"};
const std::set<std::string> kModelKeys{"preset",   "name", "d_model",    "h_q",
                                       "h_kv",     "d_head", "d_ff",     "num_layers",
                                       "bytes_per_element"};
const std::set<std::string> kRadioKeys{
    "efficiency",         "bandwidth_mhz",   "bandwidth_hz", "noise_dbm_per_hz",
    "ref_distance_m",     "path_loss_exponent", "ref_gain_db", "tx_power_down_dbm"};
const std::set<std::string> kDeviceKeys{
    "id",          "peak_flops",      "flops_unit",            "util_ceiling",
    "util_rate",   "disk_read_mb_s",  "disk_read_bytes_per_s", "memory_gb",
    "memory_bytes", "tx_power_up_dbm", "tx_power_down_dbm",    "distance_m",
    "bandwidth_mhz", "bandwidth_hz"};
const std::set<std::string> kExperimentKeys{"token_lengths", "strategies", "heuristic_scoring",
                                            "seed",          "csv_out",    "gantt_dir"};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

void require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) fail(path, "expected a mapping");
}

void reject_unknown(const YAML::Node& node, const std::string& path,
                    const std::set<std::string>& allowed) {
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.contains(key)) fail(join(path, key), "unknown key");
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& path, const char* expected) {
  if (!node.IsScalar()) fail(path, std::string("expected ") + expected);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(path, std::string("expected ") + expected + ", got '" + node.Scalar() + "'");
  }
}

double number(const YAML::Node& parent, const std::string& path, const char* key) {
  const YAML::Node n = parent[key];
  if (!n) fail(join(path, key), "missing required key");
  return scalar<double>(n, join(path, key), "a number");
}

std::optional<double> optional_number(const YAML::Node& parent, const std::string& path,
                                      const char* key) {
  const YAML::Node n = parent[key];
  if (!n) return std::nullopt;
  return scalar<double>(n, join(path, key), "a number");
}

std::int64_t integer(const YAML::Node& node, const std::string& path) {
  return scalar<std::int64_t>(node, path, "an integer");
}

std::optional<double> unit_value(const YAML::Node& parent, const std::string& path,
                                 const UnitKey& key) {
  const auto scaled = optional_number(parent, path, key.scaled);
  const auto si = optional_number(parent, path, key.si);
  if (scaled && si) {
    fail(join(path, key.scaled), std::string("conflicts with ") + key.si + "; give only one");
  }
  if (scaled) return *scaled * key.factor;
  return si;
}

ModelConfig parse_model(const YAML::Node& node, std::string& name) {
  const std::string path = "model";
  require_map(node, path);
  reject_unknown(node, path, kModelKeys);
  ModelConfig cfg{};
  bool from_preset = false;
  if (const YAML::Node p = node["preset"]) {
    const auto preset = scalar<std::string>(p, "model.preset", "a preset name");
    const auto found = model_preset(preset);
    if (!found) fail("model.preset", "unknown preset '" + preset + "'");
    cfg = *found;
    name = preset;
    from_preset = true;
  }
  if (const YAML::Node n = node["name"]) name = scalar<std::string>(n, "model.name", "a string");

  struct Field {
    const char* key;
    std::int64_t ModelConfig::*member;
  };
  constexpr Field kFields[] = {
      {"d_model", &ModelConfig::d_model},     {"h_q", &ModelConfig::h_q},
      {"h_kv", &ModelConfig::h_kv},           {"d_head", &ModelConfig::d_head},
      {"d_ff", &ModelConfig::d_ff},           {"num_layers", &ModelConfig::num_layers},
      {"bytes_per_element", &ModelConfig::bytes_per_element},
  };
  for (const Field& f : kFields) {
    if (const YAML::Node n = node[f.key]) {
      cfg.*f.member = integer(n, join(path, f.key));
    } else if (!from_preset) {
      fail(join(path, f.key), "missing required key (or set model.preset)");
    }
  }
  try {
    cfg.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

struct SharedRadio {
  RadioParams defaults;
  std::optional<double> tx_power_down_dbm;
  std::optional<double> bandwidth_hz;
};

SharedRadio parse_radio(const YAML::Node& node) {
  const std::string path = "radio";
  require_map(node, path);
  reject_unknown(node, path, kRadioKeys);
  SharedRadio shared;
  RadioParams& r = shared.defaults;
  r.efficiency = number(node, path, "efficiency");
  r.noise_dbm_per_hz = number(node, path, "noise_dbm_per_hz");
  r.ref_distance_m = number(node, path, "ref_distance_m");
  r.path_loss_exponent = number(node, path, "path_loss_exponent");
  r.ref_gain_db = number(node, path, "ref_gain_db");
  shared.bandwidth_hz = unit_value(node, path, kBandwidth);
  shared.tx_power_down_dbm = optional_number(node, path, "tx_power_down_dbm");
  return shared;
}

DeviceProfile parse_device(const YAML::Node& node, const std::string& path,
                           const SharedRadio& shared, int position) {
  require_map(node, path);
  reject_unknown(node, path, kDeviceKeys);
  DeviceProfile d;
  d.id = node["id"] ? static_cast<int>(integer(node["id"], join(path, "id"))) : position + 1;
  d.peak_flops = number(node, path, "peak_flops") * number(node, path, "flops_unit");
  d.util_ceiling = number(node, path, "util_ceiling");
  d.util_rate = number(node, path, "util_rate");
  const auto disk = unit_value(node, path, kDisk);
  if (!disk) fail(join(path, kDisk.scaled), "missing required key");
  d.disk_read_bytes_per_s = *disk;
  const auto memory = unit_value(node, path, kMemory);
  if (!memory) fail(join(path, kMemory.scaled), "missing required key");
  d.memory_bytes = *memory;

  d.radio = shared.defaults;
  d.radio.tx_power_up_dbm = number(node, path, "tx_power_up_dbm");
  d.radio.distance_m = number(node, path, "distance_m");
  if (auto down = optional_number(node, path, "tx_power_down_dbm")) {
    d.radio.tx_power_down_dbm = *down;
  } else if (shared.tx_power_down_dbm) {
    d.radio.tx_power_down_dbm = *shared.tx_power_down_dbm;
  } else {
    fail(join(path, "tx_power_down_dbm"), "missing (set it per device or under radio)");
  }
  if (auto bw = unit_value(node, path, kBandwidth)) {
    d.radio.bandwidth_hz = *bw;
  } else if (shared.bandwidth_hz) {
    d.radio.bandwidth_hz = *shared.bandwidth_hz;
  } else {
    fail(join(path, kBandwidth.scaled), "missing (set it per device or under radio)");
  }
  try {
    d.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return d;
}

void parse_experiment(const YAML::Node& node, Config& cfg) {
  const std::string path = "experiment";
  require_map(node, path);
  reject_unknown(node, path, kExperimentKeys);
  Scenario& sc = cfg.scenario;

  if (const YAML::Node tl = node["token_lengths"]) {
    if (!tl.IsSequence()) fail("experiment.token_lengths", "expected a list");
    sc.token_lengths.clear();
    for (std::size_t i = 0; i < tl.size(); ++i) {
      const std::string p = "experiment.token_lengths[" + std::to_string(i) + "]";
      const std::int64_t t = integer(tl[i], p);
      if (t < 1) fail(p, "token length must be >= 1");
      sc.token_lengths.push_back(t);
    }
    if (sc.token_lengths.empty()) fail("experiment.token_lengths", "must not be empty");
  }
  if (const YAML::Node st = node["strategies"]) {
    if (!st.IsSequence()) fail("experiment.strategies", "expected a list");
    sc.strategies.clear();
    for (std::size_t i = 0; i < st.size(); ++i) {
      const std::string p = "experiment.strategies[" + std::to_string(i) + "]";
      const auto name = scalar<std::string>(st[i], p, "a strategy name");
      const auto id = parse_strategy(name);
      if (!id) fail(p, "unknown strategy '" + name + "'");
      sc.strategies.push_back(*id);
    }
    if (sc.strategies.empty()) fail("experiment.strategies", "must not be empty");
  }
  if (const YAML::Node h = node["heuristic_scoring"]) {
    const auto name = scalar<std::string>(h, "experiment.heuristic_scoring", "raw|normalized");
    const auto s = parse_heuristic_scoring(name);
    if (!s) fail("experiment.heuristic_scoring", "expected raw or normalized, got '" + name + "'");
    sc.heuristic_scoring = *s;
  }
  if (const YAML::Node s = node["seed"]) {
    sc.seed = scalar<std::uint64_t>(s, "experiment.seed", "a nonnegative integer");
  }
  if (const YAML::Node c = node["csv_out"]) {
    cfg.outputs.csv = scalar<std::string>(c, "experiment.csv_out", "a path");
  }
  if (const YAML::Node g = node["gantt_dir"]) {
    cfg.outputs.gantt_dir = scalar<std::string>(g, "experiment.gantt_dir", "a path");
  }
}

// Shortest decimal form that parses back to exactly `v`.
std::string exact(double v) {
  char buf[40];
  for (int precision = 1; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

void emit_unit(YAML::Emitter& out, double si_value, const UnitKey& key) {
  const double scaled = si_value / key.factor;
  if (scaled * key.factor == si_value) {
    out << YAML::Key << key.scaled << YAML::Value << exact(scaled);
  } else {
    out << YAML::Key << key.si << YAML::Value << exact(si_value);
  }
}

}  // namespace

Config parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string("<yaml>: ") + e.what());
  }
  require_map(root, "<root>");
  reject_unknown(root, "", kTopKeys);

  Config cfg;
  Scenario& sc = cfg.scenario;
  sc.token_lengths = power_of_two_grid(256, 8192);
  sc.strategies = {StrategyId::kOptimalDp, StrategyId::kEven, StrategyId::kHeuristic,
                   StrategyId::kSingleDevice};

  if (!root["model"]) fail("model", "missing required section");
  sc.model = parse_model(root["model"], sc.model_name);

  if (!root["radio"]) fail("radio", "missing required section");
  const SharedRadio shared = parse_radio(root["radio"]);

  const YAML::Node devices = root["devices"];
  if (!devices) fail("devices", "missing required section");
  if (!devices.IsSequence() || devices.size() == 0) fail("devices", "expected a nonempty list");
  for (std::size_t i = 0; i < devices.size(); ++i) {
    sc.devices.push_back(parse_device(devices[i], "devices[" + std::to_string(i) + "]", shared,
                                      static_cast<int>(i)));
  }
  if (const YAML::Node exp = root["experiment"]) parse_experiment(exp, cfg);
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string dump_config(const Config& config) {
  const Scenario& sc = config.scenario;
  YAML::Emitter out;
  out << YAML::BeginMap;

  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << sc.model_name;
  out << YAML::Key << "d_model" << YAML::Value << sc.model.d_model;
  out << YAML::Key << "h_q" << YAML::Value << sc.model.h_q;
  out << YAML::Key << "h_kv" << YAML::Value << sc.model.h_kv;
  out << YAML::Key << "d_head" << YAML::Value << sc.model.d_head;
  out << YAML::Key << "d_ff" << YAML::Value << sc.model.d_ff;
  out << YAML::Key << "num_layers" << YAML::Value << sc.model.num_layers;
  out << YAML::Key << "bytes_per_element" << YAML::Value << sc.model.bytes_per_element;
  out << YAML::EndMap;

  // Shared radio values come from the first device; every device repeats the
  // fields that may differ so the dump stays exact for mixed fleets.
  const RadioParams& r0 = sc.devices.front().radio;
  out << YAML::Key << "radio" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "efficiency" << YAML::Value << exact(r0.efficiency);
  out << YAML::Key << "noise_dbm_per_hz" << YAML::Value << exact(r0.noise_dbm_per_hz);
  out << YAML::Key << "ref_distance_m" << YAML::Value << exact(r0.ref_distance_m);
  out << YAML::Key << "path_loss_exponent" << YAML::Value << exact(r0.path_loss_exponent);
  out << YAML::Key << "ref_gain_db" << YAML::Value << exact(r0.ref_gain_db);
  out << YAML::EndMap;
  for (const DeviceProfile& d : sc.devices) {
    const RadioParams& r = d.radio;
    if (r.efficiency != r0.efficiency || r.noise_dbm_per_hz != r0.noise_dbm_per_hz ||
        r.ref_distance_m != r0.ref_distance_m || r.path_loss_exponent != r0.path_loss_exponent ||
        r.ref_gain_db != r0.ref_gain_db) {
      throw InvalidArgument("dump_config: devices with different shared radio parameters");
    }
  }

  out << YAML::Key << "devices" << YAML::Value << YAML::BeginSeq;
  for (const DeviceProfile& d : sc.devices) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << d.id;
    const double tflops = d.peak_flops / 1e12;
    const bool tera = tflops * 1e12 == d.peak_flops;
    out << YAML::Key << "peak_flops" << YAML::Value << exact(tera ? tflops : d.peak_flops);
    out << YAML::Key << "flops_unit" << YAML::Value << (tera ? "1.0e12" : "1");
    out << YAML::Key << "util_ceiling" << YAML::Value << exact(d.util_ceiling);
    out << YAML::Key << "util_rate" << YAML::Value << exact(d.util_rate);
    emit_unit(out, d.disk_read_bytes_per_s, kDisk);
    emit_unit(out, d.memory_bytes, kMemory);
    out << YAML::Key << "tx_power_up_dbm" << YAML::Value << exact(d.radio.tx_power_up_dbm);
    out << YAML::Key << "tx_power_down_dbm" << YAML::Value << exact(d.radio.tx_power_down_dbm);
    out << YAML::Key << "distance_m" << YAML::Value << exact(d.radio.distance_m);
    emit_unit(out, d.radio.bandwidth_hz, kBandwidth);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "token_lengths" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (TokenCount t : sc.token_lengths) out << t;
  out << YAML::EndSeq;
  out << YAML::Key << "strategies" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (StrategyId s : sc.strategies) out << std::string(to_string(s));
  out << YAML::EndSeq;
  out << YAML::Key << "heuristic_scoring" << YAML::Value
      << std::string(to_string(sc.heuristic_scoring));
  out << YAML::Key << "seed" << YAML::Value << sc.seed;
  if (!config.outputs.csv.empty()) {
    out << YAML::Key << "csv_out" << YAML::Value << config.outputs.csv;
  }
  if (!config.outputs.gantt_dir.empty()) {
    out << YAML::Key << "gantt_dir" << YAML::Value << config.outputs.gantt_dir;
  }
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace coldpipe::app
