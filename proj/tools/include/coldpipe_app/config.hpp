#pragma once

#include <filesystem>
#include <string>

#include "coldpipe/errors.hpp"
#include "coldpipe/experiment.hpp"

namespace coldpipe::app {

// Parse/validation failure in a config file. what() starts with the key path,
// e.g. "devices[2].memory_gb: expected a number".
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct OutputPaths {
  std::string csv;        // sweep CSV; empty -> stdout
  std::string gantt_dir;  // per-cell charts from `sweep`; empty -> none

  friend bool operator==(const OutputPaths&, const OutputPaths&) = default;
};

struct Config {
  Scenario scenario;
  OutputPaths outputs;

  friend bool operator==(const Config&, const Config&) = default;
};

Config parse_config(const std::string& yaml_text);
Config load_config(const std::filesystem::path& path);

// YAML text that parse_config() maps back to an identical Config. Quantities
// are written in the human units (TFLOPS, MB/s, GB, MHz) when that round-trips
// exactly and in SI units otherwise.
std::string dump_config(const Config& config);

}  // namespace coldpipe::app
