#pragma once

#include <vector>

#include "coldpipe/cost_tables.hpp"
#include "coldpipe/plan.hpp"

namespace coldpipe {

struct Interval {
  double begin = 0.0;
  double end = 0.0;

  double length() const { return end - begin; }
};

// Cold-start timing of one stage. Every device starts loading its shard at
// t = 0; it becomes active once both its shard is loaded and the upstream
// stage has finished, then receives the activation and computes.
struct StageTiming {
  Stage stage;
  double load = 0.0;
  double comm = 0.0;  // always 0 for the first stage
  double comp = 0.0;
  double start = 0.0;   // max(load, upstream finish)
  double finish = 0.0;  // start + comm + comp
  double wait = 0.0;    // max(0, upstream finish - load): obstructive bubble

  Interval load_interval() const { return {0.0, load}; }
  Interval wait_interval() const { return {load, load + wait}; }
  Interval comm_interval() const { return {start, start + comm}; }
  Interval comp_interval() const { return {start + comm, finish}; }
};

struct Timeline {
  std::vector<StageTiming> stages;
  double makespan = 0.0;
};

enum class MemoryCheck { kEnforce, kWaive };

// Throws InvalidPlan for malformed plans and Infeasible when `memory` is
// kEnforce and some stage does not fit on its device.
Timeline evaluate(const Plan& plan, const CostTables& tables,
                  MemoryCheck memory = MemoryCheck::kEnforce);

struct BubbleReport {
  std::vector<double> waits;  // per stage, pipeline order
  double total_wait = 0.0;
};

BubbleReport bubble_report(const Timeline& timeline);

}  // namespace coldpipe
