#include "coldpipe/device_model.hpp"

#include <cmath>
#include <string>

#include "coldpipe/errors.hpp"

namespace coldpipe {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

void RadioParams::validate() const {
  require(finite_positive(bandwidth_hz), "radio.bandwidth must be positive");
  require(finite_positive(distance_m), "radio.distance must be positive");
  require(finite_positive(ref_distance_m), "radio.ref_distance must be positive");
  require(finite_positive(path_loss_exponent), "radio.path_loss_exponent must be positive");
  require(efficiency > 0.0 && efficiency <= 1.0, "radio.efficiency must be in (0, 1]");
  require(std::isfinite(tx_power_up_dbm) && std::isfinite(tx_power_down_dbm) &&
              std::isfinite(noise_dbm_per_hz) && std::isfinite(ref_gain_db),
          "radio power/gain figures must be finite");
}

void DeviceProfile::validate() const {
  const std::string who = "device " + std::to_string(id) + ": ";
  require(finite_positive(peak_flops), who + "peak_flops must be positive");
  require(util_ceiling > 0.0 && util_ceiling <= 1.0, who + "util_ceiling must be in (0, 1]");
  require(finite_positive(util_rate), who + "util_rate must be positive");
  require(finite_positive(disk_read_bytes_per_s), who + "disk read speed must be positive");
  require(finite_positive(memory_bytes), who + "memory must be positive");
  radio.validate();
}

double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double utilization(const DeviceProfile& dev, double tokens) {
  if (!(tokens >= 0.0)) throw InvalidArgument("utilization: token count must be >= 0");
  return dev.util_ceiling * -std::expm1(-dev.util_rate * tokens);
}

double effective_compute(const DeviceProfile& dev, TokenCount tokens) {
  if (tokens < 1) {
    throw DegenerateScenario("effective compute of device " + std::to_string(dev.id) +
                             " is zero for token count " + std::to_string(tokens));
  }
  const double c = dev.peak_flops * utilization(dev, static_cast<double>(tokens));
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DegenerateScenario("effective compute of device " + std::to_string(dev.id) +
                             " is not positive");
  }
  return c;
}

double channel_gain(const RadioParams& radio) {
  return std::pow(10.0, radio.ref_gain_db / 10.0) *
         std::pow(radio.distance_m / radio.ref_distance_m, -radio.path_loss_exponent);
}

double link_rate(const RadioParams& radio, LinkDirection direction) {
  const double power_w = dbm_to_watts(direction == LinkDirection::kUp ? radio.tx_power_up_dbm
                                                                      : radio.tx_power_down_dbm);
  const double noise_w = dbm_to_watts(radio.noise_dbm_per_hz) * radio.bandwidth_hz;
  const double snr = power_w * channel_gain(radio) / noise_w;
  return radio.efficiency * radio.bandwidth_hz * std::log2(1.0 + snr);
}

std::vector<DeviceProfile> reference_fleet() {
  struct Row {
    double tflops, a, b, disk_mb_s, mem_gb, p_up_dbm, distance_m;
  };
  constexpr Row kRows[] = {
      {165, 0.4, 5.1e-4, 5000, 20, 20, 1},
      {70, 0.7, 8.7e-4, 4000, 10, 18, 3},
      {30, 0.8, 1.1e-3, 3000, 8, 15, 5},
      {20, 0.8, 1.8e-3, 2000, 8, 15, 7},
  };
  std::vector<DeviceProfile> fleet;
  int id = 1;
  for (const Row& row : kRows) {
    fleet.push_back(DeviceProfile{
        .id = id++,
        .peak_flops = row.tflops * 1e12,
        .util_ceiling = row.a,
        .util_rate = row.b,
        .disk_read_bytes_per_s = row.disk_mb_s * 1e6,
        .memory_bytes = row.mem_gb * 1e9,
        .radio =
            RadioParams{
                .bandwidth_hz = 160e6,
                .tx_power_up_dbm = row.p_up_dbm,
                .tx_power_down_dbm = 25,
                .noise_dbm_per_hz = -174,
                .distance_m = row.distance_m,
                .ref_distance_m = 1,
                .path_loss_exponent = 3,
                .ref_gain_db = -47.2,
                .efficiency = 0.5,
            },
    });
  }
  return fleet;
}

}  // namespace coldpipe
