#include "coldpipe/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "coldpipe/cost_tables.hpp"
#include "coldpipe/dp_scheduler.hpp"
#include "coldpipe/errors.hpp"

namespace coldpipe {

void Scenario::validate() const {
  model.validate();
  if (devices.empty()) throw InvalidArgument("scenario has no devices");
  for (const DeviceProfile& d : devices) d.validate();
  if (token_lengths.empty()) throw InvalidArgument("scenario has no token lengths");
  for (TokenCount t : token_lengths) {
    if (t < 1) throw InvalidArgument("token lengths must be positive");
  }
  if (strategies.empty()) throw InvalidArgument("scenario has no strategies");
}

std::vector<TokenCount> power_of_two_grid(TokenCount lo, TokenCount hi) {
  std::vector<TokenCount> grid;
  for (TokenCount t = lo; t <= hi; t *= 2) grid.push_back(t);
  return grid;
}

Scenario reference_scenario() {
  return Scenario{
      .model_name = "qwen3_14b",
      .model = qwen3_14b(),
      .devices = reference_fleet(),
      .token_lengths = power_of_two_grid(256, 8192),
      .strategies = {StrategyId::kOptimalDp, StrategyId::kEven, StrategyId::kHeuristic,
                     StrategyId::kSingleDevice},
      .heuristic_scoring = HeuristicScoring::kRaw,
      .seed = 0,
  };
}

StrategyRun run_strategy(StrategyId strategy, const CostTables& tables,
                         std::span<const DeviceProfile> devices, HeuristicScoring scoring) {
  const int num_layers = tables.num_layers();
  StrategyRun run{strategy, {}, {}};
  MemoryCheck memory = MemoryCheck::kEnforce;
  switch (strategy) {
    case StrategyId::kOptimalDp:
      run.plan = solve(tables).plan;
      break;
    case StrategyId::kBruteForce:
      run.plan = brute_force(tables).plan;
      break;
    case StrategyId::kEven:
      run.plan = even_plan(devices, num_layers);
      break;
    case StrategyId::kHeuristic:
      run.plan = heuristic_plan(devices, num_layers, scoring);
      break;
    case StrategyId::kSingleDevice:
      run.plan = single_device_plan(devices, num_layers);
      memory = MemoryCheck::kWaive;
      break;
  }
  run.timeline = evaluate(run.plan, tables, memory);
  return run;
}

namespace {

double sum_over(const Timeline& tl, double StageTiming::*field) {
  double total = 0.0;
  for (const StageTiming& st : tl.stages) total += st.*field;
  return total;
}

std::vector<ResultRow> run_token_length(const Scenario& sc, TokenCount tokens) {
  const std::vector<LayerProfile> layers = build_profiles(sc.model, tokens);
  const CostTables tables = CostTables::build(layers, sc.devices, tokens);
  std::vector<ResultRow> rows;
  for (StrategyId s : sc.strategies) {
    StrategyRun run = run_strategy(s, tables, sc.devices, sc.heuristic_scoring);
    rows.push_back(ResultRow{
        .token_length = tokens,
        .strategy = s,
        .makespan = run.timeline.makespan,
        .plan = std::move(run.plan),
        .timeline = std::move(run.timeline),
        .improvement = std::nullopt,
    });
  }
  double best_baseline = std::numeric_limits<double>::infinity();
  for (const ResultRow& r : rows) {
    if (is_baseline(r.strategy)) best_baseline = std::min(best_baseline, r.makespan);
  }
  if (std::isfinite(best_baseline)) {
    for (ResultRow& r : rows) {
      if (r.strategy == StrategyId::kOptimalDp) {
        r.improvement = (best_baseline - r.makespan) / best_baseline;
      }
    }
  }
  return rows;
}

}  // namespace

double ResultRow::load_total() const { return sum_over(timeline, &StageTiming::load); }
double ResultRow::comm_total() const { return sum_over(timeline, &StageTiming::comm); }
double ResultRow::comp_total() const { return sum_over(timeline, &StageTiming::comp); }
double ResultRow::wait_total() const { return sum_over(timeline, &StageTiming::wait); }

std::vector<ResultRow> run_sweep(const Scenario& scenario, unsigned max_threads) {
  scenario.validate();
  const std::size_t cells = scenario.token_lengths.size();
  std::vector<std::vector<ResultRow>> per_token(cells);
  std::vector<std::exception_ptr> errors(cells);

  auto run_cell = [&](std::size_t i) {
    const TokenCount tokens = scenario.token_lengths[i];
    try {
      per_token[i] = run_token_length(scenario, tokens);
    } catch (const Infeasible& e) {
      errors[i] = std::make_exception_ptr(
          Infeasible("token length " + std::to_string(tokens) + ": " + e.what()));
    } catch (const Error& e) {
      errors[i] = std::make_exception_ptr(
          Error("token length " + std::to_string(tokens) + ": " + e.what()));
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  const unsigned workers =
      std::max(1u, std::min<unsigned>(max_threads, static_cast<unsigned>(cells)));
  if (workers == 1) {
    for (std::size_t i = 0; i < cells; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < cells; i = next++) run_cell(i);
      });
    }
  }

  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<ResultRow> rows;
  for (auto& group : per_token) {
    for (ResultRow& r : group) rows.push_back(std::move(r));
  }
  return rows;
}

SweepSummary summarize(const std::vector<ResultRow>& rows) {
  SweepSummary s;
  s.min_improvement_vs_any = std::numeric_limits<double>::infinity();
  s.max_improvement_vs_any = -std::numeric_limits<double>::infinity();
  double improvement_sum = 0.0;
  int improvement_count = 0;
  for (const ResultRow& dp : rows) {
    if (dp.strategy != StrategyId::kOptimalDp || !dp.improvement) continue;
    improvement_sum += *dp.improvement;
    ++improvement_count;
    for (const ResultRow& other : rows) {
      if (other.token_length != dp.token_length || !is_baseline(other.strategy)) continue;
      const double gain = (other.makespan - dp.makespan) / other.makespan;
      s.min_improvement_vs_any = std::min(s.min_improvement_vs_any, gain);
      s.max_improvement_vs_any = std::max(s.max_improvement_vs_any, gain);
    }
  }
  if (improvement_count == 0) {
    throw InvalidArgument("sweep has no optimal_dp rows with a baseline to compare against");
  }
  s.mean_improvement_vs_best = improvement_sum / improvement_count;
  return s;
}

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

}  // namespace

std::vector<SmallInstance> random_instance_suite(int count, std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("instance count must be >= 1");
  std::mt19937_64 rng(seed);
  std::vector<SmallInstance> suite;
  suite.reserve(static_cast<std::size_t>(count));
  for (int n = 0; n < count; ++n) {
    const int num_devices = uniform_int(rng, 1, 4);
    const int num_layers = uniform_int(rng, 1, 8);

    ModelConfig model;
    model.d_head = uniform_int(rng, 0, 1) == 0 ? 64 : 128;
    model.h_kv = uniform_int(rng, 1, 8);
    model.h_q = model.h_kv * uniform_int(rng, 1, 8);
    model.d_model = model.h_q * model.d_head;
    model.d_ff = model.d_model * uniform_int(rng, 2, 4);
    model.num_layers = num_layers;
    model.bytes_per_element = 2;

    std::vector<DeviceProfile> devices;
    for (int d = 0; d < num_devices; ++d) {
      std::uniform_real_distribution<double> power(5.0, 35.0);
      devices.push_back(DeviceProfile{
          .id = d + 1,
          .peak_flops = log_uniform(rng, 2e12, 1650e12),
          .util_ceiling = log_uniform(rng, 0.04, 1.0),
          .util_rate = log_uniform(rng, 5.1e-5, 1.8e-2),
          .disk_read_bytes_per_s = log_uniform(rng, 200e6, 50000e6),
          .memory_bytes = log_uniform(rng, 0.8e9, 200e9),
          .radio =
              RadioParams{
                  .bandwidth_hz = 160e6,
                  .tx_power_up_dbm = power(rng),
                  .tx_power_down_dbm = power(rng),
                  .noise_dbm_per_hz = -174,
                  .distance_m = log_uniform(rng, 0.1, 70.0),
                  .ref_distance_m = 1,
                  .path_loss_exponent = 3,
                  .ref_gain_db = -47.2,
                  .efficiency = 0.5,
              },
      });
    }
    const auto tokens = static_cast<TokenCount>(std::llround(log_uniform(rng, 256, 8192)));

    SmallInstance inst;
    inst.tokens = tokens;
    inst.scenario = Scenario{
        .model_name = "random_" + std::to_string(n),
        .model = model,
        .devices = std::move(devices),
        .token_lengths = {tokens},
        .strategies = {StrategyId::kOptimalDp, StrategyId::kBruteForce},
        .heuristic_scoring = HeuristicScoring::kRaw,
        .seed = seed,
    };
    const double footprint =
        activation_bytes(model, tokens) + num_layers * layer_param_bytes(model);
    inst.single_device_feasible =
        std::any_of(inst.scenario.devices.begin(), inst.scenario.devices.end(),
                    [&](const DeviceProfile& d) { return footprint <= d.memory_bytes; });
    suite.push_back(std::move(inst));
  }
  return suite;
}

}  // namespace coldpipe
