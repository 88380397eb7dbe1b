#include "navform/model.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

#include <fmt/format.h>

namespace navform {

namespace {

constexpr double kAntisymmetryTolerance = 1e-12;

std::pair<AgentIndex, AgentIndex> ordered(AgentIndex a, AgentIndex b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

// One goal realization per connected component of the formation graph,
// anchored at the component's lowest-index agent.
std::vector<Vec2> goal_positions(const Scenario& s) {
  const std::size_t n = s.agent_count();
  std::vector<Vec2> goals(n, Vec2::Zero());
  std::vector<bool> seen(n, false);
  for (AgentIndex root = 0; root < n; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    goals[root] = s.agents[root].q;
    std::queue<AgentIndex> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
      const AgentIndex i = frontier.front();
      frontier.pop();
      for (AgentIndex j : s.formation.neighbors(i)) {
        if (seen[j]) continue;
        seen[j] = true;
        goals[j] = goals[i] - s.formation.offset(i, j);
        frontier.push(j);
      }
    }
  }
  return goals;
}

bool all_colinear(const std::vector<Vec2>& points) {
  if (points.size() < 3) return true;
  // Use the farthest pair as the reference line.
  std::size_t a = 0, b = 0;
  double best = -1.0;
  for (std::size_t p = 0; p < points.size(); ++p) {
    for (std::size_t q = p + 1; q < points.size(); ++q) {
      const double d = (points[p] - points[q]).squaredNorm();
      if (d > best) {
        best = d;
        a = p;
        b = q;
      }
    }
  }
  if (best <= 0.0) return true;
  const Vec2 axis = points[b] - points[a];
  for (const Vec2& p : points) {
    const Vec2 rel = p - points[a];
    const double area = std::abs(axis.x() * rel.y() - axis.y() * rel.x());
    if (area / best > kColinearTolerance) return false;
  }
  return true;
}

}  // namespace

FormationSpec::FormationSpec(std::size_t agent_count, std::vector<FormationEdge> declared)
    : agent_count_(agent_count), declared_(std::move(declared)), neighbors_(agent_count) {
  std::map<std::pair<AgentIndex, AgentIndex>, Vec2> explicit_offsets;
  for (const auto& e : declared_) {
    if (e.i >= agent_count_ || e.j >= agent_count_ || e.i == e.j) {
      throw std::invalid_argument(fmt::format("formation edge ({}, {}) does not name two distinct agents",
                                              e.i + 1, e.j + 1));
    }
    explicit_offsets.try_emplace({e.i, e.j}, e.offset);
  }
  for (const auto& [key, c] : explicit_offsets) {
    const auto [i, j] = key;
    offsets_.try_emplace({i, j}, c);
    auto reverse = explicit_offsets.find({j, i});
    if (reverse == explicit_offsets.end()) {
      offsets_.try_emplace({j, i}, -c);
    } else if (i < j && (reverse->second + c).norm() > kAntisymmetryTolerance) {
      conflicts_.emplace_back(i, j);
    }
  }
  for (const auto& [key, c] : offsets_) {
    const auto [i, j] = key;
    neighbors_[i].push_back(j);
    if (i < j) pairs_.push_back(ordered(i, j));
  }
  for (auto& list : neighbors_) std::sort(list.begin(), list.end());
  std::sort(pairs_.begin(), pairs_.end());
}

bool FormationSpec::are_neighbors(AgentIndex i, AgentIndex j) const {
  return offsets_.count({i, j}) != 0;
}

const Vec2& FormationSpec::offset(AgentIndex i, AgentIndex j) const {
  auto it = offsets_.find({i, j});
  if (it == offsets_.end()) {
    throw std::out_of_range(fmt::format("agents {} and {} are not formation neighbors", i + 1, j + 1));
  }
  return it->second;
}

std::size_t FormationSpec::min_degree() const {
  std::size_t best = 0;
  bool first = true;
  for (const auto& list : neighbors_) {
    if (first || list.size() < best) best = list.size();
    first = false;
  }
  return best;
}

double FormationSpec::max_offset_norm(AgentIndex i) const {
  double best = 0.0;
  for (AgentIndex j : neighbors(i)) best = std::max(best, offset(i, j).norm());
  return best;
}

std::vector<Vec2> Scenario::initial_positions() const {
  std::vector<Vec2> q;
  q.reserve(agents.size());
  for (const auto& a : agents) q.push_back(a.q);
  return q;
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kParameterRange: return "parameter_range";
    case ViolationKind::kAntisymmetry: return "antisymmetry";
    case ViolationKind::kAchievability: return "achievability";
    case ViolationKind::kInitialContainment: return "initial_containment";
    case ViolationKind::kColinear: return "colinear";
    case ViolationKind::kOutsideWorkspace: return "outside_workspace";
    case ViolationKind::kCoincidentAgents: return "coincident_agents";
    case ViolationKind::kFailureModel: return "failure_model";
  }
  return "unknown";
}

double pairwise_distance(const Vec2& qi, const Vec2& qj) { return (qi - qj).norm(); }

std::vector<Violation> validate_scenario(const Scenario& s) {
  std::vector<Violation> out;
  const Params& p = s.params;
  auto add = [&out](ViolationKind kind, std::size_t i, std::size_t j, std::string msg) {
    out.push_back({kind, i, j, std::move(msg)});
  };

  if (s.agents.empty()) add(ViolationKind::kParameterRange, 0, 0, "scenario has no agents");
  if (!(p.sensing_radius > 0.0)) add(ViolationKind::kParameterRange, 0, 0, "R_s must be positive");
  if (!(p.delta1 > 0.0 && p.delta1 < p.sensing_radius)) {
    add(ViolationKind::kParameterRange, 0, 0, fmt::format("delta_1 = {} must lie in (0, R_s)", p.delta1));
  }
  if (!(p.delta2 > 0.0 && p.delta2 < p.sensing_radius)) {
    add(ViolationKind::kParameterRange, 0, 0, fmt::format("delta_2 = {} must lie in (0, R_s)", p.delta2));
  }
  if (!(p.k >= 1.0)) add(ViolationKind::kParameterRange, 0, 0, fmt::format("k = {} must be >= 1", p.k));
  if (!(p.gain > 0.0)) add(ViolationKind::kParameterRange, 0, 0, fmt::format("Gamma = {} must be positive", p.gain));
  const Integration& integ = s.integration;
  if (!(integ.dt > 0.0)) add(ViolationKind::kParameterRange, 0, 0, "dt must be positive");
  if (!(integ.t_final > 0.0)) add(ViolationKind::kParameterRange, 0, 0, "t_final must be positive");

  for (std::size_t idx = 0; idx < s.agents.size(); ++idx) {
    if (s.agents[idx].id != idx) {
      add(ViolationKind::kParameterRange, idx + 1, 0, "agent ids must be 1..N in order");
    }
  }

  for (const auto& [i, j] : s.formation.antisymmetry_conflicts()) {
    add(ViolationKind::kAntisymmetry, i + 1, j + 1,
        fmt::format("c_{0}{1} != -c_{1}{0}", i + 1, j + 1));
  }

  for (const auto& [i, j] : s.formation.pairs()) {
    const double c = s.formation.offset(i, j).norm();
    const bool too_long = !(c < p.sensing_radius - p.delta2);
    const bool too_short = p.enforce_min_offset && !(c > p.delta1);
    if (too_long || too_short) {
      add(ViolationKind::kAchievability, i + 1, j + 1,
          fmt::format("|c_{}{}| = {} outside ({}, {})", i + 1, j + 1, c,
                      p.enforce_min_offset ? p.delta1 : 0.0, p.sensing_radius - p.delta2));
    }
  }

  if (s.agents.size() == s.formation.agent_count()) {
    for (const auto& [i, j] : s.formation.pairs()) {
      const double d = pairwise_distance(s.agents[i].q, s.agents[j].q);
      if (!(d < p.sensing_radius)) {
        add(ViolationKind::kInitialContainment, i + 1, j + 1,
            fmt::format("initial d_{}{} = {} is not below R_s = {}", i + 1, j + 1, d, p.sensing_radius));
      }
    }
  } else {
    add(ViolationKind::kParameterRange, 0, 0, "formation agent count does not match agent list");
  }

  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    for (std::size_t j = i + 1; j < s.agents.size(); ++j) {
      if (pairwise_distance(s.agents[i].q, s.agents[j].q) == 0.0) {
        add(ViolationKind::kCoincidentAgents, i + 1, j + 1, "agents start at the same point");
      }
    }
    for (std::size_t o = 0; o < s.obstacles.points.size(); ++o) {
      if (pairwise_distance(s.agents[i].q, s.obstacles.points[o]) == 0.0) {
        add(ViolationKind::kCoincidentAgents, i + 1, 0, fmt::format("agent starts on obstacle {}", o + 1));
      }
    }
  }

  if (s.workspace) {
    const Workspace& w = *s.workspace;
    for (std::size_t i = 0; i < s.agents.size(); ++i) {
      const Vec2& q = s.agents[i].q;
      if ((q.array() < w.min.array()).any() || (q.array() > w.max.array()).any()) {
        add(ViolationKind::kOutsideWorkspace, i + 1, 0, "initial position outside the workspace box");
      }
    }
  }

  if (s.agents.size() >= 2 && s.agents.size() == s.formation.agent_count()) {
    std::vector<Vec2> points = s.initial_positions();
    const auto goals = goal_positions(s);
    points.insert(points.end(), goals.begin(), goals.end());
    if (all_colinear(points)) {
      add(ViolationKind::kColinear, 0, 0, "agents and goals are co-linear");
    }
  }

  const LinkFailureModel& f = s.failures;
  if (f.mode == LinkFailureModel::Mode::kSchedule) {
    for (const auto& o : f.outages) {
      if (o.i >= s.agents.size() || o.j >= s.agents.size() || o.i == o.j) {
        add(ViolationKind::kFailureModel, o.i + 1, o.j + 1, "outage names an unknown link");
      } else if (!(o.to > o.from)) {
        add(ViolationKind::kFailureModel, o.i + 1, o.j + 1, "outage must have to > from");
      }
    }
  } else {
    const RandomFailureSpec& r = f.random;
    if (!(r.p_fail >= 0.0 && r.p_fail <= 1.0)) {
      add(ViolationKind::kFailureModel, 0, 0, "p_fail must lie in [0, 1]");
    }
    if (!(r.tau > 0.0 && r.T > r.tau)) {
      add(ViolationKind::kFailureModel, 0, 0, "random failures need 0 < tau < T");
    } else if (integ.dt > 0.0 && !(r.T - r.tau > 2.0 * integ.dt)) {
      add(ViolationKind::kFailureModel, 0, 0, "dwell window (tau, T) must span more than two steps");
    }
  }
  return out;
}

}  // namespace navform
