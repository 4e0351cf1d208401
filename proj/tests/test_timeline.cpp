#include <doctest.h>

#include <random>

#include "coldpipe/baselines.hpp"
#include "coldpipe/errors.hpp"
#include "coldpipe/timeline.hpp"
#include "support/oracles.hpp"

using namespace coldpipe;

namespace {

CostTables reference_tables(TokenCount tokens) {
  const auto layers = build_profiles(qwen3_14b(), tokens);
  return CostTables::build(layers, reference_fleet(), tokens);
}

}  // namespace

TEST_CASE("single-stage plan is load plus compute") {
  const CostTables t = reference_tables(2048);
  const Timeline tl = evaluate(Plan{{{0, 1, 40}}}, t, MemoryCheck::kWaive);
  REQUIRE(tl.stages.size() == 1);
  CHECK(tl.makespan == t.load_time(1, 40, 0) + t.compute_time(1, 40, 0));
  CHECK(tl.stages[0].comm == 0.0);
  CHECK(tl.stages[0].wait == 0.0);
  CHECK(bubble_report(tl).waits == std::vector<double>{0.0});
}

TEST_CASE("two identical devices: long load hides upstream work") {
  auto fleet = reference_fleet();
  fleet[1] = fleet[0];
  fleet[1].id = 2;
  fleet.resize(2);
  const auto layers = build_profiles(qwen3_14b(), 256);
  const CostTables t = CostTables::build(layers, fleet, 256);
  const Timeline tl = evaluate(Plan{{{0, 1, 10}, {1, 11, 40}}}, t);
  // Stage 2 loads three times as many layers; at 256 tokens stage 1 computes
  // long before that load completes.
  CHECK(tl.stages[0].finish < tl.stages[1].load);
  CHECK(tl.stages[1].wait == 0.0);
  CHECK(tl.stages[1].start == tl.stages[1].load);
}

TEST_CASE("memory enforcement and waiver") {
  const CostTables t = reference_tables(2048);
  const Plan all_on_one{{{0, 1, 40}}};
  CHECK_THROWS_AS(evaluate(all_on_one, t, MemoryCheck::kEnforce), Infeasible);
  CHECK_NOTHROW(evaluate(all_on_one, t, MemoryCheck::kWaive));
}

TEST_CASE("malformed plans are rejected") {
  const CostTables t = reference_tables(2048);
  CHECK_THROWS_AS(evaluate(Plan{}, t), InvalidPlan);
  CHECK_THROWS_AS(evaluate(Plan{{{0, 1, 10}, {0, 11, 40}}}, t), InvalidPlan);   // reused device
  CHECK_THROWS_AS(evaluate(Plan{{{0, 1, 10}, {1, 12, 40}}}, t), InvalidPlan);   // gap
  CHECK_THROWS_AS(evaluate(Plan{{{0, 2, 20}, {1, 21, 40}}}, t), InvalidPlan);   // no layer 1
  CHECK_THROWS_AS(evaluate(Plan{{{0, 1, 20}, {1, 21, 39}}}, t), InvalidPlan);   // short
  CHECK_THROWS_AS(evaluate(Plan{{{0, 1, 20}, {7, 21, 40}}}, t), InvalidPlan);   // bad device
}

TEST_CASE("evaluation is order sensitive") {
  const CostTables t = reference_tables(4096);
  const Timeline a = evaluate(Plan{{{0, 1, 20}, {3, 21, 40}}}, t, MemoryCheck::kWaive);
  const Timeline b = evaluate(Plan{{{3, 1, 20}, {0, 21, 40}}}, t, MemoryCheck::kWaive);
  CHECK(a.makespan != b.makespan);
}

TEST_CASE("even plan at 8192 tokens: weak devices straggle") {
  const CostTables t = reference_tables(8192);
  const Timeline tl = evaluate(even_plan(reference_fleet(), 40), t);
  REQUIRE(tl.stages.size() == 4);
  CHECK(tl.stages[2].wait > tl.stages[1].wait);
  CHECK(tl.stages[3].wait > tl.stages[2].wait);
  CHECK(tl.stages[2].wait + tl.stages[3].wait > 0.5 * bubble_report(tl).total_wait);
}

TEST_CASE("waits match an independent recomputation") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + static_cast<int>(rng() % 4);
    const int num_layers = k + static_cast<int>(rng() % 10);
    const auto layers = coldpipe::testing::random_layers(rng, num_layers);
    const auto fleet = coldpipe::testing::random_fleet(rng, k);
    const CostTables t = CostTables::build(layers, fleet, 2048);
    const Plan plan = even_plan(fleet, num_layers);
    const Timeline tl = evaluate(plan, t, MemoryCheck::kWaive);
    double upstream = 0;
    for (const StageTiming& st : tl.stages) {
      CHECK(st.wait == std::max(0.0, upstream - st.load));
      upstream = st.finish;
    }
    CHECK(coldpipe::testing::rel_err(tl.makespan, coldpipe::testing::replay_makespan(
                                                      plan, layers, fleet, 2048)) < 1e-12);
  }
}
