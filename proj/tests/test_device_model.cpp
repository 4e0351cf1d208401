#include <doctest.h>

#include <cmath>

#include "coldpipe/device_model.hpp"
#include "coldpipe/errors.hpp"

using namespace coldpipe;

// Frozen with 40-digit mpmath evaluations of the reference-fleet formulas.
TEST_CASE("utilization and effective compute of device 1") {
  const DeviceProfile d1 = reference_fleet()[0];
  CHECK(utilization(d1, 2048) == doctest::Approx(0.25925010132755188).epsilon(1e-14));
  CHECK(effective_compute(d1, 2048) == doctest::Approx(42776266719046.06).epsilon(1e-13));
  CHECK(utilization(d1, 0) == 0.0);
  CHECK(std::abs(utilization(d1, 1e9) - d1.util_ceiling) < 1e-9);
}

TEST_CASE("utilization is increasing and below the ceiling") {
  for (const DeviceProfile& d : reference_fleet()) {
    double prev = -1;
    // Past ~1e4 tokens the gap to the ceiling drops below one ulp.
    for (double t = 0; t <= 1e4; t = t * 2 + 1) {
      const double u = utilization(d, t);
      CHECK(u > prev);
      CHECK(u < d.util_ceiling);
      prev = u;
    }
    CHECK(utilization(d, 1e6) <= d.util_ceiling);
    double c_prev = 0;
    for (TokenCount t : {1, 16, 256, 4096, 65536}) {
      const double c = effective_compute(d, t);
      CHECK(c >= c_prev);
      c_prev = c;
    }
  }
}

TEST_CASE("effective compute rejects an empty workload") {
  CHECK_THROWS_AS(effective_compute(reference_fleet()[0], 0), DegenerateScenario);
}

TEST_CASE("path-loss gain") {
  RadioParams r = reference_fleet()[0].radio;
  CHECK(channel_gain(r) == doctest::Approx(1.9054607179632472e-5).epsilon(1e-13));

  r.distance_m = r.ref_distance_m = 4;
  r.path_loss_exponent = 5.5;
  CHECK(channel_gain(r) == doctest::Approx(std::pow(10.0, -4.72)));

  RadioParams near = reference_fleet()[0].radio;
  RadioParams far = near;
  far.distance_m = 3;
  CHECK(channel_gain(far) / channel_gain(near) == doctest::Approx(1.0 / 27));
}

TEST_CASE("reference fleet link rates") {
  const auto fleet = reference_fleet();
  constexpr double kUp[] = {1720992660.0807687, 1287452422.8002715, 1030868004.7893838,
                            914392157.20232180};
  constexpr double kDown[] = {1853869757.4949825, 1473479074.5394604, 1296608527.5979045,
                              1180108748.7623865};
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    CHECK(link_rate(fleet[i].radio, LinkDirection::kUp) == doctest::Approx(kUp[i]).epsilon(1e-12));
    CHECK(link_rate(fleet[i].radio, LinkDirection::kDown) ==
          doctest::Approx(kDown[i]).epsilon(1e-12));
    CHECK(link_rate(fleet[i].radio, LinkDirection::kDown) >=
          link_rate(fleet[i].radio, LinkDirection::kUp));
  }
}

TEST_CASE("link rate is linear in efficiency and falls with distance") {
  RadioParams r = reference_fleet()[0].radio;
  const double half = link_rate(r, LinkDirection::kUp);
  r.efficiency = 1.0;
  CHECK(link_rate(r, LinkDirection::kUp) == doctest::Approx(2 * half));

  double prev = INFINITY;
  for (double d = 0.5; d < 100; d *= 1.7) {
    r.distance_m = d;
    const double rate = link_rate(r, LinkDirection::kUp);
    CHECK(rate < prev);
    CHECK(rate > 0);
    prev = rate;
  }
}

TEST_CASE("dBm conversion") {
  CHECK(dbm_to_watts(30) == doctest::Approx(1.0));
  CHECK(dbm_to_watts(20) == doctest::Approx(0.1));
  CHECK(dbm_to_watts(-174) == doctest::Approx(3.981071705534969e-21));
}

TEST_CASE("profile validation") {
  DeviceProfile d = reference_fleet()[0];
  CHECK_NOTHROW(d.validate());
  d.util_ceiling = 1.5;
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
  d = reference_fleet()[0];
  d.radio.efficiency = 0;
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
  d = reference_fleet()[0];
  d.memory_bytes = 0;
  CHECK_THROWS_AS(d.validate(), InvalidArgument);
}
