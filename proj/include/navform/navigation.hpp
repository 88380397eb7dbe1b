#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "navform/model.hpp"

namespace navform {

/// Raised when goal and constraint functions vanish together, which the
/// navigation function cannot represent.
class DegenerateNavigationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct NavigationEval {
  double gamma = 0.0;
  double beta = 1.0;
  double phi = 0.0;
  Vec2 grad_gamma = Vec2::Zero();
  Vec2 grad_beta = Vec2::Zero();
  Vec2 grad_phi = Vec2::Zero();
  // |N_i ∪ M_i|: agents and obstacles inside the collision region.
  std::size_t collision_set_size = 0;
  // Set when a formation neighbor sits beyond R_s, where b_ij = 0.
  bool formation_neighbor_out_of_range = false;
};

/// Position of a formation neighbor together with the desired offset c_ij.
struct NeighborTerm {
  Vec2 q;
  Vec2 offset;
};

// Goal function and its gradient.
double eval_gamma(const Vec2& qi, std::span<const NeighborTerm> neighbors);
Vec2 grad_gamma(const Vec2& qi, std::span<const NeighborTerm> neighbors);

// Connectivity factor b_ij(d) and its gradient with respect to q_i.
double eval_b(double d, double sensing_radius, double delta2);
double eval_b_derivative(double d, double sensing_radius, double delta2);
Vec2 grad_b(const Vec2& qi, const Vec2& qj, double sensing_radius, double delta2);

// Collision factor B_ik(d) and its gradient with respect to q_i.
double eval_B(double d, double delta1);
double eval_B_derivative(double d, double delta1);
Vec2 grad_B(const Vec2& qi, const Vec2& qk, double delta1);

/// phi = gamma / (gamma^k + beta)^(1/k).
double eval_phi(double gamma, double beta, double k);
Vec2 grad_phi(double gamma, double beta, const Vec2& grad_gamma, const Vec2& grad_beta, double k);

struct BetaEval {
  double beta = 1.0;
  Vec2 grad = Vec2::Zero();
};

/// Evaluates the per-agent navigation functions of a scenario.
///
/// Every "wrt" overload differentiates agent j's function with respect to
/// another agent's position q_wrt; with wrt == j it is the ordinary gradient
/// used by the controller. The collision set N_j is taken from true
/// distances and includes formation neighbors that come within delta_1.
///
/// `failed` is an optional n*n link mask (nonzero = link in outage). An agent
/// behind a failed link is invisible to the collision factors; obstacles are
/// always seen. The simulator passes it only with
/// Params::collision_requires_sensing.
using LinkMask = std::span<const std::uint8_t>;

class NavigationField {
 public:
  NavigationField(FormationSpec formation, ObstacleSet obstacles, const Params& params);

  NavigationEval evaluate(AgentIndex i, std::span<const Vec2> positions, LinkMask failed = {}) const;

  double gamma(AgentIndex j, std::span<const Vec2> positions) const;
  Vec2 grad_gamma_wrt(AgentIndex j, AgentIndex wrt, std::span<const Vec2> positions) const;
  BetaEval beta_wrt(AgentIndex j, AgentIndex wrt, std::span<const Vec2> positions, LinkMask failed = {}) const;
  Vec2 grad_phi_wrt(AgentIndex j, AgentIndex wrt, std::span<const Vec2> positions, LinkMask failed = {}) const;
  double phi(AgentIndex j, std::span<const Vec2> positions, LinkMask failed = {}) const;

  /// Indices of other agents within delta_1 of agent i (N_i).
  std::vector<AgentIndex> collision_agents(AgentIndex i, std::span<const Vec2> positions, LinkMask failed = {}) const;
  /// Indices of obstacles within delta_1 of agent i (M_i).
  std::vector<std::size_t> collision_obstacles(AgentIndex i, std::span<const Vec2> positions) const;

  const Params& params() const { return params_; }
  const FormationSpec& formation() const { return formation_; }
  const ObstacleSet& obstacles() const { return obstacles_; }

 private:
  FormationSpec formation_;
  ObstacleSet obstacles_;
  Params params_;
};

}  // namespace navform
