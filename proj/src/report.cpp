#include "navform/report.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

namespace navform {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#17becf", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);
constexpr std::size_t kMaxPolylinePoints = 2000;

std::string num(double v) { return fmt::format("{:.12g}", v); }
std::string px(double v) { return fmt::format("{:.2f}", v); }

struct Range {
  double lo = 0.0;
  double hi = 1.0;

  void widen(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  // 10% margin on each side; degenerate ranges get unit width.
  Range padded() const {
    double span = hi - lo;
    if (!(span > 0.0)) span = std::max(1.0, std::abs(lo));
    return {lo - 0.1 * span, hi + 0.1 * span};
  }
};

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double nice = r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

std::vector<double> ticks(const Range& r) {
  std::vector<double> out;
  const double step = nice_step(r.hi - r.lo, 5);
  for (double v = std::ceil(r.lo / step) * step; v <= r.hi + 1e-9 * step; v += step) {
    out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  }
  return out;
}

// Plot frame mapping data coordinates into an SVG viewport.
struct Frame {
  double left = 70, top = 40, width = 560, height = 420;
  Range x, y;

  double sx(double v) const { return left + (v - x.lo) / (x.hi - x.lo) * width; }
  double sy(double v) const { return top + height - (v - y.lo) / (y.hi - y.lo) * height; }
};

void open_svg(std::ostringstream& out, const Frame& f, const std::string& title) {
  const double w = f.left + f.width + 140;
  const double h = f.top + f.height + 60;
  out << fmt::format(R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}">)",
                     px(w), px(h))
      << "\n";
  out << R"(<rect width="100%" height="100%" fill="white"/>)" << "\n";
  out << fmt::format(R"(<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{}</text>)",
                     px(f.left + f.width / 2), title)
      << "\n";
}

void axes(std::ostringstream& out, const Frame& f, const std::string& xlabel, const std::string& ylabel) {
  out << fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)", px(f.left),
                     px(f.top), px(f.width), px(f.height))
      << "\n";
  for (double t : ticks(f.x)) {
    const double x = f.sx(t);
    out << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" stroke="#dddddd"/>)", px(x), px(f.top),
                       px(f.top + f.height))
        << "\n";
    out << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>)",
                       px(x), px(f.top + f.height + 16), fmt::format("{:g}", t))
        << "\n";
  }
  for (double t : ticks(f.y)) {
    const double y = f.sy(t);
    out << fmt::format(R"(<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke="#dddddd"/>)", px(f.left), px(y),
                       px(f.left + f.width))
        << "\n";
    out << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>)",
                       px(f.left - 6), px(y + 4), fmt::format("{:g}", t))
        << "\n";
  }
  out << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>)",
                     px(f.left + f.width / 2), px(f.top + f.height + 40), xlabel)
      << "\n";
  out << fmt::format(
             R"svg(<text x="18" y="{0}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 18 {0})">{1}</text>)svg",
             px(f.top + f.height / 2), ylabel)
      << "\n";
}

void legend_entry(std::ostringstream& out, const Frame& f, std::size_t row, const std::string& color,
                  const std::string& label, bool dashed = false) {
  const double y = f.top + 10 + 18.0 * static_cast<double>(row);
  const double x = f.left + f.width + 14;
  out << fmt::format(R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="2"{}/>)", px(x), px(y),
                     px(x + 24), px(y), color, dashed ? R"( stroke-dasharray="6 4")" : "")
      << "\n";
  out << fmt::format(R"(<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>)", px(x + 30),
                     px(y + 4), label)
      << "\n";
}

std::size_t stride_for(std::size_t steps) {
  return std::max<std::size_t>(1, (steps + kMaxPolylinePoints - 1) / kMaxPolylinePoints);
}

// Sample indices 0, stride, 2*stride, ..., always ending with the last step.
std::vector<std::size_t> sample_steps(std::size_t steps) {
  std::vector<std::size_t> out;
  if (steps == 0) return out;
  const std::size_t stride = stride_for(steps);
  for (std::size_t s = 0; s < steps; s += stride) out.push_back(s);
  if (out.back() != steps - 1) out.push_back(steps - 1);
  return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log, std::size_t decimation) {
  if (decimation == 0) throw std::invalid_argument("decimation must be >= 1");
  out << "t,agent,qx,qy,ux,uy,in_Vf\n";
  for (std::size_t s = 0; s < log.steps(); s += decimation) {
    for (AgentIndex i = 0; i < log.agent_count; ++i) {
      const Vec2& q = log.position(s, i);
      const Vec2& u = log.control(s, i);
      out << num(log.times[s]) << ',' << (i + 1) << ',' << num(q.x()) << ',' << num(q.y()) << ',' << num(u.x())
          << ',' << num(u.y()) << ',' << (log.vf(s, i) ? 1 : 0) << '\n';
    }
  }
}

std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in) {
  std::vector<TrajectoryRow> rows;
  std::string line;
  if (!std::getline(in, line) || line != "t,agent,qx,qy,ux,uy,in_Vf") {
    throw std::runtime_error("trajectory CSV: unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw std::runtime_error("trajectory CSV: expected 7 columns");
    TrajectoryRow r;
    r.t = std::stod(cells[0]);
    r.agent = static_cast<std::size_t>(std::stoul(cells[1]));
    r.q = {std::stod(cells[2]), std::stod(cells[3])};
    r.u = {std::stod(cells[4]), std::stod(cells[5])};
    r.in_vf = cells[6] == "1";
    rows.push_back(r);
  }
  return rows;
}

std::string summary_report(const Scenario& scenario, const RunResult& result) {
  const TrajectoryLog& log = result.log;
  std::ostringstream out;
  out << "scenario: " << (scenario.name.empty() ? "unnamed" : scenario.name) << "\n";
  out << "agents: " << scenario.agent_count() << "\n";
  out << "obstacles: " << scenario.obstacles.points.size() << "\n";
  out << "dt: " << num(log.dt) << "\n";
  out << "steps: " << log.steps() << "\n";
  out << "t_end: " << num(log.times.empty() ? 0.0 : log.times.back()) << "\n";
  out << "switches: " << result.switch_count << "\n";
  out << "aborted: " << (result.aborted ? "true" : "false") << "\n";
  if (result.aborted) out << "abort_reason: \"" << result.abort_reason << "\"\n";
  out << "monitors:\n";
  for (const auto& v : result.verdicts) {
    out << "  " << v.name << ": {passed: " << (v.passed ? "true" : "false") << ", detail: \"" << v.detail << "\"}\n";
  }
  out << "all_passed: " << (result.all_passed() ? "true" : "false") << "\n";
  out << "coverage_vf_union: " << (result.coverage ? "true" : "false") << "\n";
  out << "coverage_neighborhood_union: " << (result.neighborhood_coverage ? "true" : "false") << "\n";
  out << "out_of_range_evaluations: " << log.out_of_range_evaluations << "\n";
  if (!log.times.empty()) {
    const std::size_t last = log.steps() - 1;
    out << "final:\n";
    out << "  V0: " << num(log.V.front()) << "\n";
    out << "  V: " << num(log.V.back()) << "\n";
    out << "  max_residual: " << num(result.bound.observed_max_residual) << "\n";
    out << "  distances:\n";
    for (const auto& [i, j] : scenario.formation.pairs()) {
      out << "    d_" << (i + 1) << "_" << (j + 1) << ": {value: " << num(log.pair_distance(last, i, j))
          << ", target: " << num(scenario.formation.offset(i, j).norm()) << "}\n";
    }
  }
  out << "bound:\n";
  out << "  from_inputs: " << (result.bound_from_inputs ? "true" : "false") << "\n";
  out << "  c_max: " << num(result.bound.c_max) << "\n";
  out << "  N_under: " << result.bound.n_under << "\n";
  out << "  ultimate_error: " << num(result.bound.ultimate_error) << "\n";
  out << "  observed_max_residual: " << num(result.bound.observed_max_residual) << "\n";
  return out.str();
}

std::string trajectory_svg(const Scenario& scenario, const TrajectoryLog& log) {
  Frame f;
  Range rx{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  Range ry = rx;
  for (const Vec2& q : log.positions) {
    rx.widen(q.x());
    ry.widen(q.y());
  }
  for (const Vec2& o : scenario.obstacles.points) {
    rx.widen(o.x());
    ry.widen(o.y());
  }
  if (log.positions.empty() && scenario.obstacles.points.empty()) rx = ry = Range{};
  f.x = rx.padded();
  f.y = ry.padded();
  // Equal aspect: grow the narrower axis about its center.
  const double ux = (f.x.hi - f.x.lo) / f.width;
  const double uy = (f.y.hi - f.y.lo) / f.height;
  if (ux > uy) {
    const double c = 0.5 * (f.y.lo + f.y.hi), half = 0.5 * ux * f.height;
    f.y = {c - half, c + half};
  } else {
    const double c = 0.5 * (f.x.lo + f.x.hi), half = 0.5 * uy * f.width;
    f.x = {c - half, c + half};
  }

  std::ostringstream out;
  open_svg(out, f, "Trajectories of dynamic agents achieving formation configuration");
  axes(out, f, "x", "y");
  const auto samples = sample_steps(log.steps());
  for (AgentIndex i = 0; i < log.agent_count; ++i) {
    const char* color = kPalette[i % kPaletteSize];
    out << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.5" points=")", color);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const Vec2& q = log.position(samples[k], i);
      out << (k ? " " : "") << px(f.sx(q.x())) << ',' << px(f.sy(q.y()));
    }
    out << "\"/>\n";
    if (!samples.empty()) {
      const Vec2& q0 = log.position(0, i);
      const Vec2& q1 = log.position(samples.back(), i);
      out << fmt::format(R"(<circle cx="{}" cy="{}" r="4" fill="white" stroke="{}" stroke-width="1.5"/>)",
                         px(f.sx(q0.x())), px(f.sy(q0.y())), color)
          << "\n";
      out << fmt::format(R"(<circle cx="{}" cy="{}" r="4" fill="{}"/>)", px(f.sx(q1.x())), px(f.sy(q1.y())), color)
          << "\n";
    }
    legend_entry(out, f, i, color, fmt::format("agent {}", i + 1));
  }
  if (log.steps() > 0) {
    const std::size_t last = log.steps() - 1;
    for (const auto& [i, j] : scenario.formation.pairs()) {
      const Vec2& a = log.position(last, i);
      const Vec2& b = log.position(last, j);
      out << fmt::format(
                 R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#555555" stroke-width="1" stroke-dasharray="4 3"/>)",
                 px(f.sx(a.x())), px(f.sy(a.y())), px(f.sx(b.x())), px(f.sy(b.y())))
          << "\n";
    }
  }
  for (const Vec2& o : scenario.obstacles.points) {
    const double x = f.sx(o.x()), y = f.sy(o.y());
    out << fmt::format(R"(<path d="M{} {} L{} {} M{} {} L{} {}" stroke="black" stroke-width="2"/>)", px(x - 5),
                       px(y - 5), px(x + 5), px(y + 5), px(x - 5), px(y + 5), px(x + 5), px(y - 5))
        << "\n";
  }
  legend_entry(out, f, log.agent_count, "#555555", "final links", true);
  out << "</svg>\n";
  return out.str();
}

std::string distance_svg(const Scenario& scenario, const TrajectoryLog& log) {
  Frame f;
  const double rs = scenario.params.sensing_radius;
  Range rt{0.0, log.times.empty() ? 1.0 : log.times.back()};
  Range rd{0.0, rs};
  const auto samples = sample_steps(log.steps());
  for (std::size_t s : samples) {
    for (const auto& [i, j] : scenario.formation.pairs()) rd.widen(log.pair_distance(s, i, j));
  }
  f.x = rt.hi > rt.lo ? rt : rt.padded();
  f.y = Range{0.0, rd.hi * 1.1};

  std::ostringstream out;
  open_svg(out, f, "d_ij and R_s");
  axes(out, f, "t", "d_ij");
  std::size_t row = 0;
  for (const auto& [i, j] : scenario.formation.pairs()) {
    const char* color = kPalette[row % kPaletteSize];
    out << fmt::format(R"(<polyline fill="none" stroke="{}" stroke-width="1.5" points=")", color);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      const std::size_t s = samples[k];
      out << (k ? " " : "") << px(f.sx(log.times[s])) << ',' << px(f.sy(log.pair_distance(s, i, j)));
    }
    out << "\"/>\n";
    legend_entry(out, f, row, color, fmt::format("d_{}{}", i + 1, j + 1));
    ++row;
  }
  out << fmt::format(
             R"(<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5" stroke-dasharray="8 4"/>)",
             px(f.sx(f.x.lo)), px(f.sy(rs)), px(f.sx(f.x.hi)), px(f.sy(rs)))
      << "\n";
  legend_entry(out, f, row, "black", "R_s", true);
  out << "</svg>\n";
  return out.str();
}

}  // namespace navform
