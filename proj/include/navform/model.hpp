#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "navform/failures.hpp"
#include "navform/types.hpp"

namespace navform {

struct AgentState {
  AgentIndex id = 0;
  Vec2 q = Vec2::Zero();
};

struct FormationEdge {
  AgentIndex i = 0;
  AgentIndex j = 0;
  Vec2 offset = Vec2::Zero();  // desired q_i - q_j
};

/// Desired relative positions c_ij over a fixed, undirected neighbor graph.
///
/// Edges may be declared in one direction only; the reverse entry is then
/// implied as -c_ij. When both directions are declared and disagree, the
/// first declaration wins for lookups and the pair is reported by
/// antisymmetry_conflicts().
class FormationSpec {
 public:
  FormationSpec() = default;
  FormationSpec(std::size_t agent_count, std::vector<FormationEdge> declared);

  std::size_t agent_count() const { return agent_count_; }
  const std::vector<FormationEdge>& declared_edges() const { return declared_; }

  /// N_i^f, sorted ascending.
  const std::vector<AgentIndex>& neighbors(AgentIndex i) const { return neighbors_.at(i); }
  bool are_neighbors(AgentIndex i, AgentIndex j) const;
  /// c_ij; throws std::out_of_range when j is not a formation neighbor of i.
  const Vec2& offset(AgentIndex i, AgentIndex j) const;

  /// Unordered formation pairs (i < j), sorted.
  const std::vector<std::pair<AgentIndex, AgentIndex>>& pairs() const { return pairs_; }
  const std::vector<std::pair<AgentIndex, AgentIndex>>& antisymmetry_conflicts() const { return conflicts_; }

  std::size_t min_degree() const;
  double max_offset_norm(AgentIndex i) const;

 private:
  std::size_t agent_count_ = 0;
  std::vector<FormationEdge> declared_;
  std::map<std::pair<AgentIndex, AgentIndex>, Vec2> offsets_;
  std::vector<std::vector<AgentIndex>> neighbors_;
  std::vector<std::pair<AgentIndex, AgentIndex>> pairs_;
  std::vector<std::pair<AgentIndex, AgentIndex>> conflicts_;
};

struct ObstacleSet {
  std::vector<Vec2> points;
};

struct Params {
  double sensing_radius = 20.0;  // R_s
  double delta1 = 8.0;           // collision-region radius
  double delta2 = 2.0;           // connectivity buffer
  double k = 1.0;                // navigation exponent
  double gain = 10.0;            // Gamma
  // Enforce the lower half of the achievability bound (delta1 < |c_ij|).
  bool enforce_min_offset = true;
  // Drop agent-agent collision factors across links that are in outage.
  bool collision_requires_sensing = false;
};

struct Integration {
  double dt = 1e-3;
  double t_final = 10.0;
  std::uint64_t seed = 0;
  // Re-evaluate the navigation field at every RK4 stage; otherwise the
  // input computed at the start of the step is held for all stages.
  bool stage_recompute = true;
};

struct Workspace {
  Vec2 min = Vec2::Zero();
  Vec2 max = Vec2::Zero();
};

struct BoundInputs {
  double rho1_bar = 0.0;
  double rho2_bar = 0.0;
  double beta_under = 1.0;
};

struct MonitorSettings {
  double collision_clearance = 1e-3;   // eps_col
  double lyapunov_slack_coeff = 1.0;   // c_eta, slack = c_eta * dt^2
  double residual_epsilon = 1e-2;      // eps_V, used when no bounds are given
  std::optional<BoundInputs> bounds;
};

struct Scenario {
  std::string name;
  std::vector<AgentState> agents;
  FormationSpec formation;
  ObstacleSet obstacles;
  Params params;
  LinkFailureModel failures;
  Integration integration;
  std::optional<Workspace> workspace;
  MonitorSettings monitors;

  std::size_t agent_count() const { return agents.size(); }
  std::vector<Vec2> initial_positions() const;
};

enum class ViolationKind {
  kParameterRange,
  kAntisymmetry,
  kAchievability,
  kInitialContainment,
  kColinear,
  kOutsideWorkspace,
  kCoincidentAgents,
  kFailureModel,
};

const char* to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  // 1-based ids of the offending pair; 0 when not applicable.
  std::size_t i = 0;
  std::size_t j = 0;
  std::string message;
};

/// Checks the standing assumptions on a parsed scenario. Empty means valid.
std::vector<Violation> validate_scenario(const Scenario& s);

double pairwise_distance(const Vec2& qi, const Vec2& qj);

// Relative-area threshold for rejecting co-linear agent and goal triples.
inline constexpr double kColinearTolerance = 1e-9;

}  // namespace navform
