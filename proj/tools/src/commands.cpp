#include "coldpipe_app/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <thread>

#include "coldpipe/cost_tables.hpp"
#include "coldpipe/dp_scheduler.hpp"
#include "coldpipe/errors.hpp"
#include "coldpipe/timeline.hpp"
#include "coldpipe_app/config.hpp"
#include "coldpipe_app/output.hpp"

namespace coldpipe::app {
namespace {

struct UsageError : Error {
  using Error::Error;
};

StrategyId strategy_or_throw(const std::string& name) {
  const auto id = parse_strategy(name);
  if (!id) {
    throw UsageError("unknown strategy '" + name +
                     "' (expected optimal_dp, even, heuristic, single_device or brute_force)");
  }
  return *id;
}

void require_tokens(TokenCount tokens) {
  if (tokens < 1) throw UsageError("--tokens must be a positive integer");
}

bool relative_match(double a, double b) {
  return std::abs(a - b) <= kOracleRelTol * std::max(std::abs(a), std::abs(b));
}

void print_memory_headroom(const Scenario& sc, TokenCount tokens, std::ostream& err) {
  const std::vector<LayerProfile> layers = build_profiles(sc.model, tokens);
  const CostTables tables = CostTables::build(layers, sc.devices, tokens);
  const int num_layers = tables.num_layers();
  err << "per-device memory headroom (whole model needs "
      << format_number(tables.memory_footprint(1, num_layers) / 1e9) << " GB):\n";
  for (int d = 0; d < tables.num_devices(); ++d) {
    int max_layers = 0;
    while (max_layers < num_layers && tables.fits(1, max_layers + 1, d)) ++max_layers;
    err << "  device " << sc.devices[d].id << ": memory "
        << format_number(tables.memory_capacity(d) / 1e9) << " GB, headroom "
        << format_number((tables.memory_capacity(d) - tables.memory_footprint(1, num_layers)) /
                         1e9)
        << " GB, fits at most " << max_layers << " layers\n";
  }
}

// Maps the error taxonomy onto exit codes. With a config and token length,
// infeasibility also prints per-device memory headroom.
template <typename Body>
int run_guarded(Streams io, Body&& body, const Config* cfg = nullptr, TokenCount tokens = 0) {
  try {
    return body();
  } catch (const UsageError& e) {
    io.err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InstanceTooLarge& e) {
    io.err << "refused: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    io.err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Infeasible& e) {
    io.err << "infeasible: " << e.what() << '\n';
    if (cfg && tokens > 0) print_memory_headroom(cfg->scenario, tokens, io.err);
    return kExitInfeasible;
  } catch (const InvalidArgument& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

void print_plan_report(const Scenario& sc, TokenCount tokens, StrategyId strategy,
                       const Timeline& tl, std::ostream& out) {
  out << "strategy " << to_string(strategy) << ", model " << sc.model_name << ", " << tokens
      << " tokens, " << sc.devices.size() << " devices\n";
  out << "stage  device  layers      load_s       wait_s       comm_s       comp_s       "
         "finish_s\n";
  for (std::size_t n = 0; n < tl.stages.size(); ++n) {
    const StageTiming& st = tl.stages[n];
    char line[160];
    std::snprintf(line, sizeof line, "%5zu  %6d  %3d-%-3d  %11.6f  %11.6f  %11.6f  %11.6f  %12.6f\n",
                  n + 1, sc.devices[st.stage.device].id, st.stage.first_layer, st.stage.last_layer,
                  st.load, st.wait, st.comm, st.comp, st.finish);
    out << line;
  }
  const BubbleReport bubbles = bubble_report(tl);
  out << "makespan T = " << format_number(tl.makespan) << " s\n";
  out << "obstructive wait per stage:";
  for (double w : bubbles.waits) out << ' ' << format_number(w);
  out << " (total " << format_number(bubbles.total_wait) << " s)\n";
}

StrategyRun run_one(const Scenario& sc, TokenCount tokens, StrategyId strategy) {
  const std::vector<LayerProfile> layers = build_profiles(sc.model, tokens);
  const CostTables tables = CostTables::build(layers, sc.devices, tokens);
  return run_strategy(strategy, tables, sc.devices, sc.heuristic_scoring);
}

std::string chart_title(const Scenario& sc, TokenCount tokens, StrategyId strategy) {
  return std::string(to_string(strategy)) + " - " + sc.model_name + ", " +
         std::to_string(tokens) + " tokens";
}

}  // namespace

unsigned sweep_threads_from_env() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("COLDPIPE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) threads = static_cast<unsigned>(v);
  }
  return threads;
}

int cmd_solve(const SolveArgs& args, Streams io) {
  Config cfg;
  return run_guarded(
      io,
      [&] {
        const StrategyId strategy = strategy_or_throw(args.strategy);
        require_tokens(args.tokens);
        cfg = load_config(args.config);
        const StrategyRun run = run_one(cfg.scenario, args.tokens, strategy);
        print_plan_report(cfg.scenario, args.tokens, strategy, run.timeline, io.out);
        if (!args.out.empty()) {
          nlohmann::ordered_json j;
          j["strategy"] = std::string(to_string(strategy));
          j["model"] = cfg.scenario.model_name;
          j["token_length"] = args.tokens;
          j["timeline"] = timeline_json(run.timeline, cfg.scenario.devices);
          write_file_atomic(args.out, j.dump(2) + "\n");
          io.out << "plan written to " << args.out << '\n';
        }
        return kExitOk;
      },
      &cfg, args.tokens);
}

int cmd_sweep(const SweepArgs& args, Streams io) {
  Config cfg;
  return run_guarded(io, [&] {
    cfg = load_config(args.config);
    const std::vector<ResultRow> rows = run_sweep(cfg.scenario, std::max(1u, args.threads));
    const std::string csv = sweep_csv(rows);
    const std::string path = args.out.empty() ? cfg.outputs.csv : args.out;
    if (path.empty()) {
      io.out << csv;
    } else {
      write_file_atomic(path, csv);
      io.out << "wrote " << rows.size() << " rows to " << path << '\n';
    }
    if (!cfg.outputs.gantt_dir.empty()) {
      for (const ResultRow& r : rows) {
        const std::string name = std::string(to_string(r.strategy)) + "_" +
                                 std::to_string(r.token_length) + ".svg";
        write_file_atomic(std::filesystem::path(cfg.outputs.gantt_dir) / name,
                          render_gantt_svg(r.timeline, cfg.scenario.devices,
                                           chart_title(cfg.scenario, r.token_length, r.strategy)));
      }
    }
    for (const ResultRow& r : rows) {
      if (r.improvement) {
        io.out << "t=" << r.token_length << ": optimal_dp T=" << format_number(r.makespan)
               << " s, improvement vs best baseline " << format_number(*r.improvement * 100)
               << "%\n";
      }
    }
    bool has_pairs = false;
    for (const ResultRow& r : rows) has_pairs = has_pairs || r.improvement.has_value();
    if (has_pairs) {
      const SweepSummary s = summarize(rows);
      io.out << "mean improvement vs best baseline: "
             << format_number(s.mean_improvement_vs_best * 100) << "%\n"
             << "improvement range vs individual baselines: "
             << format_number(s.min_improvement_vs_any * 100) << "% .. "
             << format_number(s.max_improvement_vs_any * 100) << "%\n";
    }
    return kExitOk;
  });
}

int cmd_gantt(const GanttArgs& args, Streams io) {
  Config cfg;
  return run_guarded(
      io,
      [&] {
        const StrategyId strategy = strategy_or_throw(args.strategy);
        require_tokens(args.tokens);
        if (args.format != "svg" && args.format != "ascii") {
          throw UsageError("--format must be svg or ascii");
        }
        cfg = load_config(args.config);
        const StrategyRun run = run_one(cfg.scenario, args.tokens, strategy);
        const std::string title = chart_title(cfg.scenario, args.tokens, strategy);
        const std::string chart =
            args.format == "svg" ? render_gantt_svg(run.timeline, cfg.scenario.devices, title)
                                 : render_gantt_ascii(run.timeline, cfg.scenario.devices, title);
        if (args.out.empty()) {
          io.out << chart;
        } else {
          write_file_atomic(args.out, chart);
          io.out << "chart written to " << args.out << '\n';
        }
        return kExitOk;
      },
      &cfg, args.tokens);
}

OracleCheck check_against_oracle(const SmallInstance& inst, double dp_compute_perturbation) {
  const Scenario& sc = inst.scenario;
  const std::vector<LayerProfile> layers = build_profiles(sc.model, inst.tokens);
  const CostTables tables = CostTables::build(layers, sc.devices, inst.tokens);
  const CostTables dp_tables =
      dp_compute_perturbation == 0.0 ? tables : tables.scaled(1.0 + dp_compute_perturbation, 1.0);

  OracleCheck check;
  std::optional<Solution> dp;
  std::optional<BruteForceResult> oracle;
  try {
    dp = solve(dp_tables);
  } catch (const Infeasible&) {
  }
  try {
    oracle = brute_force(tables);
  } catch (const Infeasible&) {
  }
  if (!dp && !oracle) {
    check.pass = true;
    check.infeasible = true;
    check.detail = "both infeasible";
    return check;
  }
  if (!dp || !oracle) {
    check.detail = dp ? "oracle infeasible but DP found a plan" : "DP infeasible but oracle found a plan";
    return check;
  }
  check.dp = dp->makespan;
  check.oracle = oracle->makespan;
  check.replay = evaluate(dp->plan, tables).makespan;
  const bool value_ok = relative_match(check.dp, check.oracle);
  const bool replay_ok = relative_match(check.replay, check.dp);
  check.pass = value_ok && replay_ok;
  if (!value_ok) check.detail = "DP and oracle makespans differ";
  else if (!replay_ok) check.detail = "DP plan does not replay to its value";
  return check;
}

int cmd_verify(const VerifyArgs& args, Streams io) {
  return run_guarded(io, [&] {
    if (args.count < 1) throw UsageError("--count must be >= 1");
    const std::vector<SmallInstance> suite = random_instance_suite(args.count, args.seed);
    int failures = 0;
    for (std::size_t n = 0; n < suite.size(); ++n) {
      const SmallInstance& inst = suite[n];
      const OracleCheck c = check_against_oracle(inst, args.dp_compute_perturbation);
      failures += c.pass ? 0 : 1;
      io.out << (c.pass ? "PASS" : "FAIL") << " instance " << n << " K=" << inst.scenario.devices.size()
             << " L=" << inst.scenario.model.num_layers << " t=" << inst.tokens;
      if (c.infeasible) {
        io.out << " (infeasible for both)";
      } else {
        io.out << " dp=" << format_number(c.dp) << " oracle=" << format_number(c.oracle)
               << " replay=" << format_number(c.replay);
      }
      if (!c.detail.empty() && !c.pass) io.out << " : " << c.detail;
      io.out << '\n';
    }
    io.out << (suite.size() - failures) << "/" << suite.size() << " instances match\n";
    return failures == 0 ? kExitOk : kExitVerification;
  });
}

int cmd_dump_config(const DumpConfigArgs& args, Streams io) {
  return run_guarded(io, [&] {
    const std::string text = dump_config(load_config(args.config));
    if (args.out.empty()) {
      io.out << text;
    } else {
      write_file_atomic(args.out, text);
    }
    return kExitOk;
  });
}

}  // namespace coldpipe::app
