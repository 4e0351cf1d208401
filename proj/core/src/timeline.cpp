#include "coldpipe/timeline.hpp"

#include <algorithm>
#include <string>

#include "coldpipe/errors.hpp"

namespace coldpipe {

Timeline evaluate(const Plan& plan, const CostTables& tables, MemoryCheck memory) {
  validate_plan(plan, tables.num_layers(), tables.num_devices());

  Timeline tl;
  tl.stages.reserve(plan.stages.size());
  double upstream_finish = 0.0;
  const Stage* upstream = nullptr;
  for (const Stage& s : plan.stages) {
    if (memory == MemoryCheck::kEnforce && !tables.fits(s.first_layer, s.last_layer, s.device)) {
      throw Infeasible("layers " + std::to_string(s.first_layer) + ".." +
                       std::to_string(s.last_layer) + " need " +
                       std::to_string(tables.memory_footprint(s.first_layer, s.last_layer)) +
                       " B on device index " + std::to_string(s.device) + " with " +
                       std::to_string(tables.memory_capacity(s.device)) + " B");
    }
    StageTiming st;
    st.stage = s;
    st.load = tables.load_time(s.first_layer, s.last_layer, s.device);
    st.comp = tables.compute_time(s.first_layer, s.last_layer, s.device);
    st.comm = upstream ? tables.comm_time(upstream->device, s.device, upstream->last_layer) : 0.0;
    st.start = std::max(st.load, upstream_finish);
    // Same evaluation order as the DP transition: (max + comm) + comp.
    st.finish = st.start + st.comm + st.comp;
    st.wait = std::max(0.0, upstream_finish - st.load);
    upstream_finish = st.finish;
    upstream = &s;
    tl.stages.push_back(st);
  }
  tl.makespan = upstream_finish;
  return tl;
}

BubbleReport bubble_report(const Timeline& timeline) {
  BubbleReport report;
  for (const StageTiming& st : timeline.stages) {
    report.waits.push_back(st.wait);
    report.total_wait += st.wait;
  }
  return report;
}

}  // namespace coldpipe
