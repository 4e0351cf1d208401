#include <CLI11.hpp>

#include <iostream>

#include "coldpipe_app/commands.hpp"

int main(int argc, char** argv) {
  using namespace coldpipe::app;

  CLI::App app{"coldpipe: cold-start aware pipeline scheduling for edge LLM inference"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Plan one token length with one strategy");
  solve_cmd->add_option("--config", solve.config, "Scenario YAML file")->required();
  solve_cmd->add_option("--tokens", solve.tokens, "Input token length")->required();
  solve_cmd->add_option("--strategy", solve.strategy,
                        "optimal_dp | even | heuristic | single_device | brute_force");
  solve_cmd->add_option("--out", solve.out, "Write the plan and timeline as JSON");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run every strategy over the token grid");
  sweep_cmd->add_option("--config", sweep.config, "Scenario YAML file")->required();
  sweep_cmd->add_option("--out", sweep.out, "CSV path (overrides experiment.csv_out)");

  GanttArgs gantt;
  auto* gantt_cmd = app.add_subcommand("gantt", "Render a load/comm/compute Gantt chart");
  gantt_cmd->add_option("--config", gantt.config, "Scenario YAML file")->required();
  gantt_cmd->add_option("--tokens", gantt.tokens, "Input token length")->required();
  gantt_cmd->add_option("--strategy", gantt.strategy, "Strategy to chart");
  gantt_cmd->add_option("--format", gantt.format, "svg | ascii");
  gantt_cmd->add_option("--out", gantt.out, "Output file (default: stdout)");

  VerifyArgs verify;
  auto* verify_cmd = app.add_subcommand("verify", "Check DP against brute force on random instances");
  verify_cmd->add_option("--seed", verify.seed, "Instance suite seed");
  verify_cmd->add_option("--count", verify.count, "Number of instances");

  DumpConfigArgs dump;
  auto* dump_cmd = app.add_subcommand("dump-config", "Print the fully resolved config");
  dump_cmd->add_option("--config", dump.config, "Scenario YAML file")->required();
  dump_cmd->add_option("--out", dump.out, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  Streams io{std::cout, std::cerr};
  if (*solve_cmd) return cmd_solve(solve, io);
  if (*sweep_cmd) {
    sweep.threads = sweep_threads_from_env();
    return cmd_sweep(sweep, io);
  }
  if (*gantt_cmd) return cmd_gantt(gantt, io);
  if (*verify_cmd) return cmd_verify(verify, io);
  if (*dump_cmd) return cmd_dump_config(dump, io);
  return kExitUsage;
}
