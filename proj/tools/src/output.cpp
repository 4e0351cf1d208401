#include "coldpipe_app/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include "coldpipe/errors.hpp"

namespace coldpipe::app {
namespace fs = std::filesystem;

void write_file_atomic(const fs::path& path, std::string_view contents) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::random_device rd;
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(rd());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out.flush()) throw Error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string sweep_csv(const std::vector<ResultRow>& rows) {
  std::string out =
      "token_length,strategy,makespan_s,load_s_total,comm_s_total,comp_s_total,wait_s_total,"
      "improvement_pct\n";
  for (const ResultRow& r : rows) {
    out += std::to_string(r.token_length);
    out += ',';
    out += to_string(r.strategy);
    for (double v : {r.makespan, r.load_total(), r.comm_total(), r.comp_total(), r.wait_total()}) {
      out += ',';
      out += format_number(v);
    }
    out += ',';
    if (r.improvement) out += format_number(*r.improvement * 100.0);
    out += '\n';
  }
  return out;
}

namespace {

int device_label(std::span<const DeviceProfile> devices, int index) {
  return index >= 0 && index < static_cast<int>(devices.size()) ? devices[index].id : index + 1;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// 1, 2 or 5 times a power of ten, giving roughly `target` ticks over `span`.
double tick_step(double span, int target) {
  const double raw = span / target;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0}) {
    if (m * magnitude >= raw) return m * magnitude;
  }
  return 10.0 * magnitude;
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

nlohmann::ordered_json timeline_json(const Timeline& tl, std::span<const DeviceProfile> devices) {
  nlohmann::ordered_json j;
  j["makespan_s"] = tl.makespan;
  j["total_wait_s"] = bubble_report(tl).total_wait;
  auto& stages = j["stages"] = nlohmann::ordered_json::array();
  for (const StageTiming& st : tl.stages) {
    stages.push_back({
        {"device_index", st.stage.device},
        {"device_id", device_label(devices, st.stage.device)},
        {"first_layer", st.stage.first_layer},
        {"last_layer", st.stage.last_layer},
        {"load_s", st.load},
        {"wait_s", st.wait},
        {"comm_s", st.comm},
        {"comp_s", st.comp},
        {"start_s", st.start},
        {"finish_s", st.finish},
    });
  }
  return j;
}

std::string render_gantt_svg(const Timeline& tl, std::span<const DeviceProfile> devices,
                             std::string_view title) {
  constexpr double kLeft = 170, kRight = 30, kTop = 50, kRowHeight = 34, kBarHeight = 20;
  constexpr double kPlotWidth = 760;
  const double rows = static_cast<double>(tl.stages.size());
  const double height = kTop + rows * kRowHeight + 80;
  const double width = kLeft + kPlotWidth + kRight;
  const double horizon = tl.makespan > 0 ? tl.makespan : 1.0;
  auto x = [&](double t) { return kLeft + kPlotWidth * t / horizon; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width, 0) << "\" height=\""
      << fixed(height, 0) << "\" viewBox=\"0 0 " << fixed(width, 0) << ' ' << fixed(height, 0)
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
      << "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
         "patternTransform=\"rotate(45)\"><rect width=\"6\" height=\"6\" fill=\"#ffffff\"/>"
         "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#c0392b\" stroke-width=\"2\"/>"
         "</pattern></defs>\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n"
      << "<text x=\"" << fixed(kLeft, 0) << "\" y=\"22\" font-size=\"15\" font-weight=\"bold\">"
      << xml_escape(title) << "</text>\n";

  const double step = tick_step(horizon, 8);
  const double axis_y = kTop + rows * kRowHeight + 6;
  for (double t = 0; t <= horizon * (1 + 1e-12); t += step) {
    svg << "<line x1=\"" << fixed(x(t), 2) << "\" y1=\"" << fixed(kTop - 6, 0) << "\" x2=\""
        << fixed(x(t), 2) << "\" y2=\"" << fixed(axis_y, 0)
        << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << fixed(x(t), 2) << "\" y=\"" << fixed(axis_y + 16, 0)
        << "\" text-anchor=\"middle\">" << format_number(t) << "</text>\n";
  }
  svg << "<text x=\"" << fixed(kLeft + kPlotWidth / 2, 0) << "\" y=\"" << fixed(axis_y + 34, 0)
      << "\" text-anchor=\"middle\">time (s)</text>\n";

  auto bar = [&](double y, Interval iv, const char* fill, const char* kind) {
    if (iv.length() <= 0) return;
    svg << "<rect class=\"" << kind << "\" x=\"" << fixed(x(iv.begin), 3) << "\" y=\""
        << fixed(y, 1) << "\" width=\"" << fixed(std::max(x(iv.end) - x(iv.begin), 0.5), 3)
        << "\" height=\"" << fixed(kBarHeight, 0) << "\" fill=\"" << fill
        << "\" stroke=\"#333333\" stroke-width=\"0.5\"><title>" << kind << ' '
        << format_number(iv.begin) << "-" << format_number(iv.end) << " s</title></rect>\n";
  };

  for (std::size_t n = 0; n < tl.stages.size(); ++n) {
    const StageTiming& st = tl.stages[n];
    const double y = kTop + static_cast<double>(n) * kRowHeight;
    svg << "<text x=\"" << fixed(kLeft - 8, 0) << "\" y=\"" << fixed(y + 14, 1)
        << "\" text-anchor=\"end\">Device " << device_label(devices, st.stage.device) << " (L"
        << st.stage.first_layer << "-" << st.stage.last_layer << ")</text>\n";
    bar(y, st.load_interval(), "#4a90d9", "load");
    bar(y, st.wait_interval(), "url(#hatch)", "wait");
    bar(y, st.comm_interval(), "#f5a623", "comm");
    bar(y, st.comp_interval(), "#7ed321", "comp");
  }

  const double legend_y = axis_y + 48;
  const std::pair<const char*, const char*> legend[] = {
      {"#4a90d9", "load"}, {"url(#hatch)", "obstructive wait"}, {"#f5a623", "comm"},
      {"#7ed321", "compute"}};
  double lx = kLeft;
  for (const auto& [fill, label] : legend) {
    svg << "<rect x=\"" << fixed(lx, 0) << "\" y=\"" << fixed(legend_y - 10, 0)
        << "\" width=\"14\" height=\"12\" fill=\"" << fill
        << "\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n"
        << "<text x=\"" << fixed(lx + 20, 0) << "\" y=\"" << fixed(legend_y, 0) << "\">" << label
        << "</text>\n";
    lx += 140;
  }
  svg << "<text x=\"" << fixed(kLeft + kPlotWidth, 0) << "\" y=\"" << fixed(legend_y, 0)
      << "\" text-anchor=\"end\" font-weight=\"bold\">T = " << format_number(tl.makespan)
      << " s</text>\n"
      << "</svg>\n";
  return svg.str();
}

std::string render_gantt_ascii(const Timeline& tl, std::span<const DeviceProfile> devices,
                               std::string_view title) {
  constexpr int kLabelWidth = 16;
  constexpr int kBarWidth = kAsciiWidth - kLabelWidth - 2;  // two '|' borders
  const double horizon = tl.makespan > 0 ? tl.makespan : 1.0;
  auto column = [&](double t) {
    return std::clamp(static_cast<int>(std::lround(t / horizon * kBarWidth)), 0, kBarWidth);
  };

  std::string out(title.substr(0, kAsciiWidth));
  out += '\n';
  for (const StageTiming& st : tl.stages) {
    std::string row(kBarWidth, ' ');
    auto paint = [&](Interval iv, char c) {
      if (iv.length() <= 0) return;
      int b = column(iv.begin);
      int e = column(iv.end);
      if (e == b) {
        if (b == kBarWidth) --b;
        e = b + 1;
      }
      std::fill(row.begin() + b, row.begin() + e, c);
    };
    paint(st.load_interval(), '=');
    paint(st.wait_interval(), '.');
    paint(st.comm_interval(), '~');
    paint(st.comp_interval(), '#');

    char label[kLabelWidth + 1];
    std::snprintf(label, sizeof label, "D%-2d L%d-%d", device_label(devices, st.stage.device),
                  st.stage.first_layer, st.stage.last_layer);
    std::string line(label);
    line.resize(kLabelWidth, ' ');
    out += line + '|' + row + "|\n";
  }
  std::string axis(kAsciiWidth, ' ');
  axis.replace(kLabelWidth, 2, "0s");
  const std::string end = format_number(tl.makespan) + "s";
  axis.replace(kAsciiWidth - end.size(), end.size(), end);
  while (!axis.empty() && axis.back() == ' ') axis.pop_back();
  out += axis + '\n';
  std::string legend = "= load  . wait  ~ comm  # compute   T = " + format_number(tl.makespan) + " s";
  out += legend.substr(0, kAsciiWidth) + '\n';
  return out;
}

}  // namespace coldpipe::app
