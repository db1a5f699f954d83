#include <algorithm>
#include <cmath>
#include <sstream>

#include "pfjss/experiment.hpp"
#include "pfjss/text.hpp"

namespace pfjss {

namespace {

constexpr double kLeft = 60, kTop = 20, kLane = 28, kBar = 20, kWidth = 900;

std::string job_colour(JobId job) {
  // Golden-angle hue walk keeps neighbouring jobs apart.
  double hue = std::fmod(job * 137.508, 360.0);
  return "hsl(" + fmt_fixed(hue, 1) + ",60%,60%)";
}

}  // namespace

std::string gantt_svg(const ScheduleTrace& trace, int machine_count) {
  Time span = 0;
  for (const auto& r : trace.ops) span = std::max(span, r.end);
  double scale = span > 0 ? kWidth / span : 1;
  double height = kTop * 2 + kLane * machine_count + 20;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_num(kLeft + kWidth + 20)
      << "\" height=\"" << fmt_num(height) << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int m = 1; m <= machine_count; ++m) {
    double y = kTop + kLane * (m - 1);
    svg << "<g class=\"lane\" id=\"M" << m << "\">\n";
    svg << "<text x=\"4\" y=\"" << fmt_num(y + kBar * 0.7) << "\">M" << m << "</text>\n";
    svg << "<line x1=\"" << fmt_num(kLeft) << "\" y1=\"" << fmt_num(y + kLane - 2) << "\" x2=\""
        << fmt_num(kLeft + kWidth) << "\" y2=\"" << fmt_num(y + kLane - 2)
        << "\" stroke=\"#ddd\"/>\n";
    for (const auto& r : trace.ops) {
      if (r.machine != m) continue;
      double xs = kLeft + r.setup_start * scale, x0 = kLeft + r.start * scale,
             x1 = kLeft + r.end * scale;
      if (r.start > r.setup_start)
        svg << "<rect class=\"setup\" x=\"" << fmt_fixed(xs, 2) << "\" y=\"" << fmt_num(y)
            << "\" width=\"" << fmt_fixed(x0 - xs, 2) << "\" height=\"" << fmt_num(kBar)
            << "\" fill=\"#999\" fill-opacity=\"0.5\"/>\n";
      svg << "<rect class=\"op\" x=\"" << fmt_fixed(x0, 2) << "\" y=\"" << fmt_num(y)
          << "\" width=\"" << fmt_fixed(x1 - x0, 2) << "\" height=\"" << fmt_num(kBar)
          << "\" fill=\"" << job_colour(r.job) << "\" stroke=\"black\" stroke-width=\"0.5\">"
          << "<title>J" << r.job << " O" << r.op << " [" << fmt_num(r.start) << ", "
          << fmt_num(r.end) << "]</title></rect>\n";
      svg << "<text x=\"" << fmt_fixed(x0 + 2, 2) << "\" y=\"" << fmt_num(y + kBar * 0.7) << "\">"
          << r.job << ',' << r.op << "</text>\n";
    }
    svg << "</g>\n";
  }
  double axis = kTop + kLane * machine_count + 12;
  svg << "<text x=\"" << fmt_num(kLeft) << "\" y=\"" << fmt_num(axis) << "\">0</text>\n";
  svg << "<text x=\"" << fmt_num(kLeft + kWidth) << "\" y=\"" << fmt_num(axis)
      << "\" text-anchor=\"end\">" << fmt_num(span) << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

std::string gantt_csv(const ScheduleTrace& trace) {
  std::ostringstream out;
  out << "machine,job,op,setup_start,start,end,length\n";
  auto ops = trace.ops;
  std::stable_sort(ops.begin(), ops.end(), [](const OperationRecord& a, const OperationRecord& b) {
    if (a.machine != b.machine) return a.machine < b.machine;
    return a.start < b.start;
  });
  for (const auto& r : ops)
    out << r.machine << ',' << r.job << ',' << r.op << ',' << fmt_num(r.setup_start) << ','
        << fmt_num(r.start) << ',' << fmt_num(r.end) << ',' << fmt_num(r.end - r.start) << '\n';
  return out.str();
}

void export_gantt(const ScheduleTrace& trace, const Instance& inst, const std::string& path_stem) {
  auto report = validate(trace, inst);
  if (!report.feasible()) throw GanttError("refusing to draw an infeasible trace", std::move(report));
  write_file(path_stem + ".svg", gantt_svg(trace, inst.machine_count));
  write_file(path_stem + ".csv", gantt_csv(trace));
}

}  // namespace pfjss
