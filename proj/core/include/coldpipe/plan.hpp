#pragma once

#include <vector>

namespace coldpipe {

// One pipeline stage: a contiguous 1-based layer range on one device.
struct Stage {
  int device = 0;  // 0-based fleet index
  int first_layer = 1;
  int last_layer = 1;

  int layer_count() const { return last_layer - first_layer + 1; }

  friend bool operator==(const Stage&, const Stage&) = default;
};

// Stages in pipeline order.
struct Plan {
  std::vector<Stage> stages;

  friend bool operator==(const Plan&, const Plan&) = default;
};

// Throws InvalidPlan unless the stages cover [1, num_layers] contiguously,
// every stage is nonempty, and no device appears twice.
void validate_plan(const Plan& plan, int num_layers, int num_devices);

// Number of layers assigned to `device` (0 when unused).
int layers_on_device(const Plan& plan, int device);

}  // namespace coldpipe
