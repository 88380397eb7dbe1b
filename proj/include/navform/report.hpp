#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "navform/model.hpp"
#include "navform/sim.hpp"

namespace navform {

/// Writes `t,agent,qx,qy,ux,uy,in_Vf`, one row per agent for every
/// `decimation`-th step (steps 0, d, 2d, ...). Numbers carry 12 significant
/// digits.
void write_trajectory_csv(std::ostream& out, const TrajectoryLog& log, std::size_t decimation = 1);

struct TrajectoryRow {
  double t = 0.0;
  std::size_t agent = 0;  // 1-based
  Vec2 q = Vec2::Zero();
  Vec2 u = Vec2::Zero();
  bool in_vf = false;
};

/// Reads back a file produced by write_trajectory_csv.
std::vector<TrajectoryRow> read_trajectory_csv(std::istream& in);

/// Human-readable key/value report with monitor verdicts and bounds.
std::string summary_report(const Scenario& scenario, const RunResult& result);

/// Agent paths with obstacles and the final formation links.
std::string trajectory_svg(const Scenario& scenario, const TrajectoryLog& log);

/// Formation-pair distances over time against the sensing radius.
std::string distance_svg(const Scenario& scenario, const TrajectoryLog& log);

}  // namespace navform
