#pragma once

#include <vector>

#include "coldpipe/model_profile.hpp"

namespace coldpipe {

// Link budget for one device <-> AP link. Powers in dBm, noise density in
// dBm/Hz, reference gain in dB; everything else in SI units.
struct RadioParams {
  double bandwidth_hz = 0.0;
  double tx_power_up_dbm = 0.0;
  double tx_power_down_dbm = 0.0;
  double noise_dbm_per_hz = 0.0;
  double distance_m = 0.0;
  double ref_distance_m = 1.0;
  double path_loss_exponent = 0.0;
  double ref_gain_db = 0.0;
  double efficiency = 1.0;

  void validate() const;

  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

struct DeviceProfile {
  int id = 0;                          // display label, 1-based in shipped configs
  double peak_flops = 0.0;             // FLOP/s
  double util_ceiling = 1.0;           // a in (0, 1]
  double util_rate = 0.0;              // b, per token
  double disk_read_bytes_per_s = 0.0;
  double memory_bytes = 0.0;
  RadioParams radio;

  void validate() const;

  friend bool operator==(const DeviceProfile&, const DeviceProfile&) = default;
};

enum class LinkDirection { kUp, kDown };

// 10^((dBm - 30) / 10). Also converts dBm/Hz to W/Hz.
double dbm_to_watts(double dbm);

// a (1 - exp(-b t)); 0 at t = 0, saturating towards a.
double utilization(const DeviceProfile& dev, double tokens);

// peak_flops * utilization. Throws DegenerateScenario when the product is not
// strictly positive (in particular for t < 1).
double effective_compute(const DeviceProfile& dev, TokenCount tokens);

// Log-distance path loss: 10^(beta0/10) (d/d0)^-zeta, linear scale.
double channel_gain(const RadioParams& radio);

// Shannon rate mu B log2(1 + P g / (N0 B)) in bits/s. The gain is the same for
// both directions; only the transmit power differs.
double link_rate(const RadioParams& radio, LinkDirection direction);

// Four-device fleet of the reference Wi-Fi setup (165/70/30/20 TFLOPS peak,
// 5000/4000/3000/2000 MB/s disks, 20/10/8/8 GB memory, 160 MHz channels).
std::vector<DeviceProfile> reference_fleet();

}  // namespace coldpipe
