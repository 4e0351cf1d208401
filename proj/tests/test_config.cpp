#include <doctest.h>

#include <fstream>
#include <sstream>

#include "coldpipe_app/config.hpp"

using namespace coldpipe;
using namespace coldpipe::app;

namespace {

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kTab1 = COLDPIPE_SOURCE_DIR "/configs/tab1.yaml";

std::string config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  const auto pos = s.find(from);
  REQUIRE(pos != std::string::npos);
  return s.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("tab1 config matches the built-in reference scenario") {
  const Config cfg = load_config(kTab1);
  Scenario expected = reference_scenario();
  expected.seed = 2025;
  CHECK(cfg.scenario == expected);
  CHECK(cfg.outputs.csv == "results/tab1_sweep.csv");
}

TEST_CASE("dump round-trips") {
  const Config cfg = load_config(kTab1);
  const std::string text = dump_config(cfg);
  CHECK(parse_config(text) == cfg);
  CHECK(dump_config(parse_config(text)) == text);

  for (const auto& inst : random_instance_suite(30, 8)) {
    Config c;
    c.scenario = inst.scenario;
    c.outputs.gantt_dir = "charts";
    CHECK(parse_config(dump_config(c)) == c);
  }
}

TEST_CASE("preset alone is enough for the model section") {
  const std::string text = replace(read(kTab1), "  d_model: 5120\n", "");
  CHECK(parse_config(text).scenario.model == qwen3_14b());
}

TEST_CASE("errors name the offending key") {
  const std::string base = read(kTab1);
  CHECK(config_error(replace(base, "memory_gb: 20", "memroy_gb: 20")) ==
        "devices[0].memroy_gb: unknown key");
  CHECK(config_error(replace(base, "disk_read_mb_s: 4000", "disk_read_mb_s: fast"))
            .starts_with("devices[1].disk_read_mb_s: expected a number"));
  CHECK(config_error(replace(base, "strategies: [optimal_dp,", "strategies: [optimal,"))
            .starts_with("experiment.strategies[0]: unknown strategy"));
  CHECK(config_error(replace(base, "strategies: [optimal_dp, even, heuristic, single_device]",
                             "strategies: []")) == "experiment.strategies: must not be empty");
  CHECK(config_error(replace(base, "token_lengths: [256,", "token_lengths: [0,"))
            .starts_with("experiment.token_lengths[0]"));
  CHECK(config_error(replace(base, "  efficiency: 0.5\n", "")) ==
        "radio.efficiency: missing required key");
  CHECK(config_error(replace(base, "heuristic_scoring: raw", "heuristic_scoring: mean"))
            .starts_with("experiment.heuristic_scoring"));
  CHECK(config_error(replace(base, "memory_gb: 20", "memory_gb: 20\n    memory_bytes: 2e10"))
            .starts_with("devices[0].memory_gb: conflicts"));
  CHECK(config_error(replace(base, "h_kv: 8", "h_kv: 80")).find("h_kv") != std::string::npos);
  CHECK(config_error(replace(base, "model:", "modle:")) == "modle: unknown key");
  CHECK(config_error("devices: [") .starts_with("<yaml>"));
  CHECK_THROWS_AS(load_config("/nonexistent/x.yaml"), ConfigError);
}

TEST_CASE("per-device overrides of shared radio values") {
  const std::string text =
      replace(read(kTab1), "    tx_power_up_dbm: 18\n",
              "    tx_power_up_dbm: 18\n    tx_power_down_dbm: 21\n    bandwidth_mhz: 80\n");
  const Config cfg = parse_config(text);
  CHECK(cfg.scenario.devices[1].radio.tx_power_down_dbm == 21);
  CHECK(cfg.scenario.devices[1].radio.bandwidth_hz == 80e6);
  CHECK(cfg.scenario.devices[0].radio.tx_power_down_dbm == 25);
  CHECK(parse_config(dump_config(cfg)) == cfg);
}
