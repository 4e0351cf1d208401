#include <doctest.h>

#include <random>

#include "coldpipe/baselines.hpp"
#include "coldpipe/dp_scheduler.hpp"
#include "coldpipe/errors.hpp"
#include "coldpipe/timeline.hpp"
#include "support/oracles.hpp"

using namespace coldpipe;
using coldpipe::testing::rel_err;

namespace {

CostTables reference_tables(TokenCount tokens) {
  const auto layers = build_profiles(qwen3_14b(), tokens);
  return CostTables::build(layers, reference_fleet(), tokens);
}

void check_plan_invariants(const Plan& plan, const CostTables& t) {
  CHECK_NOTHROW(validate_plan(plan, t.num_layers(), t.num_devices()));
  for (const Stage& s : plan.stages) CHECK(t.fits(s.first_layer, s.last_layer, s.device));
}

}  // namespace

TEST_CASE("state count") {
  CHECK(state_count(4, 40) == 2560);
  CHECK(state_count(10, 60) == 614'400);
  CHECK(state_count(24, 1) == 24LL << 24);
  CHECK_THROWS_AS(state_count(25, 10), InstanceTooLarge);
}

TEST_CASE("one device: base case only") {
  const auto layers = build_profiles(qwen3_14b(), 1024);
  const std::vector<DeviceProfile> one{reference_fleet()[0]};
  auto roomy = one;
  roomy[0].memory_bytes = 40e9;
  const CostTables t = CostTables::build(layers, roomy, 1024);
  const Solution s = solve(t);
  CHECK(s.plan == Plan{{{0, 1, 40}}});
  CHECK(s.makespan == t.load_time(1, 40, 0) + t.compute_time(1, 40, 0));

  const CostTables tight = CostTables::build(layers, one, 1024);
  CHECK_THROWS_AS(solve(tight), Infeasible);
}

TEST_CASE("reconstruct") {
  const CostTables t = reference_tables(2048);
  const DpTable dp = fill_dp_table(t);

  // Single-segment state: no predecessor, value is load plus compute.
  CHECK(dp.back(0b0010, 10, 1).prev_device == -1);
  CHECK(dp.back(0b0010, 10, 1).split == 0);
  CHECK(dp.value(0b0010, 10, 1) == t.load_time(1, 10, 1) + t.compute_time(1, 10, 1));
  // No single device holds all 40 layers.
  CHECK_THROWS_AS(reconstruct(dp, 0b0010, 1), std::logic_error);

  // Two-stage chain ending on device 0.
  const DpTable::Back back = dp.back(0b0011, 40, 0);
  REQUIRE(back.split > 0);
  CHECK(back.prev_device == 1);
  const Plan two = reconstruct(dp, 0b0011, 0);
  CHECK(two == Plan{{{1, 1, back.split}, {0, back.split + 1, 40}}});

  // Device 2 is not in the set.
  CHECK_THROWS_AS(reconstruct(dp, 0b0011, 2), std::logic_error);
}

TEST_CASE("unreachable final state is reported as a broken chain") {
  const CostTables t = reference_tables(2048);
  const DpTable dp = fill_dp_table(t);
  // Device 3 alone cannot hold 40 layers in 8 GB.
  CHECK(dp.value(0b1000, 40, 3) == INFINITY);
  CHECK_THROWS_AS(reconstruct(dp, 0b1000, 3), std::logic_error);
}

TEST_CASE("reference scenario plan replays to the DP value") {
  for (TokenCount tokens : {256, 2048, 8192}) {
    const CostTables t = reference_tables(tokens);
    const Solution s = solve(t);
    check_plan_invariants(s.plan, t);
    CHECK(rel_err(evaluate(s.plan, t).makespan, s.makespan) < 1e-9);
  }
}

TEST_CASE("dp matches brute force on random heterogeneous instances") {
  std::mt19937_64 rng(99);
  int feasible = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 4);
    const int num_layers = 1 + static_cast<int>(rng() % 8);
    const auto layers = coldpipe::testing::random_layers(rng, num_layers);
    const auto fleet = coldpipe::testing::random_fleet(rng, k, 1e9, 8e9);
    const TokenCount tokens = 256 + static_cast<TokenCount>(rng() % 8000);
    const CostTables t = CostTables::build(layers, fleet, tokens);

    std::optional<Solution> dp;
    std::optional<BruteForceResult> bf;
    try { dp = solve(t); } catch (const Infeasible&) {}
    try { bf = brute_force(t); } catch (const Infeasible&) {}
    REQUIRE(dp.has_value() == bf.has_value());
    if (!dp) continue;
    ++feasible;
    CHECK(rel_err(dp->makespan, bf->makespan) <= 1e-9);
    check_plan_invariants(dp->plan, t);
    CHECK(rel_err(coldpipe::testing::replay_makespan(dp->plan, layers, fleet, tokens),
                  dp->makespan) < 1e-9);
  }
  CHECK(feasible > 100);
}

TEST_CASE("scaling disk and compute up never increases the optimum") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 4);
    const int num_layers = 2 + static_cast<int>(rng() % 12);
    const auto layers = coldpipe::testing::random_layers(rng, num_layers);
    const auto fleet = coldpipe::testing::random_fleet(rng, k, 10e9, 40e9);
    const CostTables t = CostTables::build(layers, fleet, 1024);
    const double base = solve(t).makespan;
    for (double alpha : {1.0, 1.3, 2.0, 10.0}) {
      CHECK(solve(t.scaled(alpha, alpha)).makespan <= base);
    }
  }
}

TEST_CASE("solve is deterministic") {
  const CostTables t = reference_tables(4096);
  const Solution a = solve(t);
  const Solution b = solve(t);
  CHECK(a.plan == b.plan);
  CHECK(a.makespan == b.makespan);
}

TEST_CASE("ties prefer fewer devices") {
  // Two identical devices and a single layer: both single-device plans tie,
  // so the lower index wins.
  const std::vector<LayerProfile> layers{{1e12, 1e6, 1e9}};
  auto fleet = std::vector<DeviceProfile>{reference_fleet()[0], reference_fleet()[0]};
  const CostTables t = CostTables::build(layers, fleet, 512);
  CHECK(solve(t).plan == Plan{{{0, 1, 1}}});
}

TEST_CASE("memory-tight fleet forces a split") {
  const CostTables t = reference_tables(1024);
  const Solution s = solve(t);
  // 26.4 GB of weights cannot sit on any single device.
  CHECK(s.plan.stages.size() >= 2);
  check_plan_invariants(s.plan, t);
}
