#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coldpipe/device_model.hpp"
#include "coldpipe/experiment.hpp"
#include "coldpipe/timeline.hpp"

namespace coldpipe::app {

// Writes to a sibling temp file, then renames over `path`. Creates missing
// parent directories.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// '.'-decimal, 9 significant digits, independent of the global locale.
std::string format_number(double v);

// Header: token_length,strategy,makespan_s,load_s_total,comm_s_total,
//         comp_s_total,wait_s_total,improvement_pct
// improvement_pct is empty on rows without an improvement value.
std::string sweep_csv(const std::vector<ResultRow>& rows);

// Timeline record shared by `solve --out` and the Gantt renderers:
// {makespan_s, total_wait_s, stages: [{device_index, device_id, first_layer,
//  last_layer, load_s, wait_s, comm_s, comp_s, start_s, finish_s}]}
nlohmann::ordered_json timeline_json(const Timeline& tl, std::span<const DeviceProfile> devices);

std::string render_gantt_svg(const Timeline& tl, std::span<const DeviceProfile> devices,
                             std::string_view title);

// Fixed 80-column chart: one row per stage, '=' load, '.' obstructive wait,
// '~' activation transfer, '#' compute.
std::string render_gantt_ascii(const Timeline& tl, std::span<const DeviceProfile> devices,
                               std::string_view title);

inline constexpr int kAsciiWidth = 80;

}  // namespace coldpipe::app
