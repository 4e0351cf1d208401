#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "coldpipe/baselines.hpp"
#include "coldpipe/experiment.hpp"

namespace coldpipe::app {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitInfeasible = 3,
  kExitVerification = 4,
};

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

struct SolveArgs {
  std::string config;
  TokenCount tokens = 0;
  std::string strategy = "optimal_dp";
  std::string out;  // JSON plan; empty -> none
};

struct SweepArgs {
  std::string config;
  std::string out;  // overrides experiment.csv_out
  unsigned threads = 1;
};

struct GanttArgs {
  std::string config;
  TokenCount tokens = 0;
  std::string strategy = "optimal_dp";
  std::string format = "svg";  // svg | ascii
  std::string out;             // empty -> stdout
};

struct VerifyArgs {
  std::uint64_t seed = 2025;
  int count = 100;
  // Multiplies the DP's effective compute by (1 + perturbation). Nonzero only
  // in the harness self-test.
  double dp_compute_perturbation = 0.0;
};

struct DumpConfigArgs {
  std::string config;
  std::string out;  // empty -> stdout
};

int cmd_solve(const SolveArgs& args, Streams io);
int cmd_sweep(const SweepArgs& args, Streams io);
int cmd_gantt(const GanttArgs& args, Streams io);
int cmd_verify(const VerifyArgs& args, Streams io);
int cmd_dump_config(const DumpConfigArgs& args, Streams io);

// Outcome of one dp-vs-brute-force comparison.
struct OracleCheck {
  bool pass = false;
  bool infeasible = false;  // both solvers agreed nothing fits
  double dp = 0.0;
  double oracle = 0.0;
  double replay = 0.0;  // timeline re-evaluation of the DP plan
  std::string detail;
};

inline constexpr double kOracleRelTol = 1e-9;

OracleCheck check_against_oracle(const SmallInstance& inst, double dp_compute_perturbation = 0.0);

// Reads COLDPIPE_THREADS; defaults to hardware concurrency, at least 1.
unsigned sweep_threads_from_env();

}  // namespace coldpipe::app
