#include "coldpipe/plan.hpp"

#include <string>

#include "coldpipe/errors.hpp"

namespace coldpipe {

void validate_plan(const Plan& plan, int num_layers, int num_devices) {
  if (plan.stages.empty()) throw InvalidPlan("plan has no stages");
  if (static_cast<int>(plan.stages.size()) > num_devices) {
    throw InvalidPlan("plan has more stages than devices");
  }
  std::vector<bool> used(static_cast<std::size_t>(num_devices), false);
  int expected_first = 1;
  for (std::size_t n = 0; n < plan.stages.size(); ++n) {
    const Stage& s = plan.stages[n];
    const std::string where = "stage " + std::to_string(n + 1) + ": ";
    if (s.device < 0 || s.device >= num_devices) {
      throw InvalidPlan(where + "device index " + std::to_string(s.device) + " out of range");
    }
    if (used[s.device]) {
      throw InvalidPlan(where + "device " + std::to_string(s.device) + " already used");
    }
    used[s.device] = true;
    if (s.first_layer != expected_first) {
      throw InvalidPlan(where + "starts at layer " + std::to_string(s.first_layer) +
                        ", expected " + std::to_string(expected_first));
    }
    if (s.last_layer < s.first_layer) throw InvalidPlan(where + "is empty");
    expected_first = s.last_layer + 1;
  }
  if (expected_first != num_layers + 1) {
    throw InvalidPlan("plan ends at layer " + std::to_string(expected_first - 1) + ", expected " +
                      std::to_string(num_layers));
  }
}

int layers_on_device(const Plan& plan, int device) {
  for (const Stage& s : plan.stages) {
    if (s.device == device) return s.layer_count();
  }
  return 0;
}

}  // namespace coldpipe
