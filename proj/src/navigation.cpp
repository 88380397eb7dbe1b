#include "navform/navigation.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace navform {

namespace {

double clamp_unit(double v) { return std::clamp(v, 0.0, 1.0); }

// Running product rule: (P, G) <- (P f, G f + P g).
struct ProductAccumulator {
  double value = 1.0;
  Vec2 grad = Vec2::Zero();

  void multiply(double f, const Vec2& g) {
    grad = grad * f + value * g;
    value *= f;
  }
};

}  // namespace

double eval_gamma(const Vec2& qi, std::span<const NeighborTerm> neighbors) {
  double sum = 0.0;
  for (const auto& n : neighbors) sum += (qi - n.q - n.offset).squaredNorm();
  return sum;
}

Vec2 grad_gamma(const Vec2& qi, std::span<const NeighborTerm> neighbors) {
  Vec2 g = Vec2::Zero();
  for (const auto& n : neighbors) g += qi - n.q - n.offset;
  return 2.0 * g;
}

double eval_b(double d, double sensing_radius, double delta2) {
  if (d < sensing_radius - delta2) return 1.0;
  if (d > sensing_radius) return 0.0;
  const double x = d + 2.0 * delta2 - sensing_radius;
  return clamp_unit(-(x * x) / (delta2 * delta2) + 2.0 * x / delta2);
}

double eval_b_derivative(double d, double sensing_radius, double delta2) {
  if (d < sensing_radius - delta2 || d >= sensing_radius) return 0.0;
  return -2.0 * (d + delta2 - sensing_radius) / (delta2 * delta2);
}

Vec2 grad_b(const Vec2& qi, const Vec2& qj, double sensing_radius, double delta2) {
  const Vec2 diff = qi - qj;
  const double d = diff.norm();
  const double slope = eval_b_derivative(d, sensing_radius, delta2);
  if (slope == 0.0) return Vec2::Zero();
  return slope * diff / d;
}

double eval_B(double d, double delta1) {
  if (d > delta1) return 1.0;
  return clamp_unit(-(d * d) / (delta1 * delta1) + 2.0 * d / delta1);
}

double eval_B_derivative(double d, double delta1) {
  if (d > delta1) return 0.0;
  return -2.0 * d / (delta1 * delta1) + 2.0 / delta1;
}

Vec2 grad_B(const Vec2& qi, const Vec2& qk, double delta1) {
  const Vec2 diff = qi - qk;
  const double d = diff.norm();
  if (d == 0.0 || d > delta1) return Vec2::Zero();
  return eval_B_derivative(d, delta1) * diff / d;
}

double eval_phi(double gamma, double beta, double k) {
  if (gamma == 0.0 && beta == 0.0) {
    throw DegenerateNavigationError("goal and constraint functions are both zero");
  }
  if (gamma == 0.0) return 0.0;
  return gamma / std::pow(std::pow(gamma, k) + beta, 1.0 / k);
}

Vec2 grad_phi(double gamma, double beta, const Vec2& grad_gamma, const Vec2& grad_beta, double k) {
  if (gamma == 0.0 && beta == 0.0) {
    throw DegenerateNavigationError("goal and constraint functions are both zero");
  }
  const double s = std::pow(gamma, k) + beta;
  const double denom = k * std::pow(s, 1.0 / k + 1.0);
  return (k * beta * grad_gamma - gamma * grad_beta) / denom;
}

NavigationField::NavigationField(FormationSpec formation, ObstacleSet obstacles, const Params& params)
    : formation_(std::move(formation)), obstacles_(std::move(obstacles)), params_(params) {}

double NavigationField::gamma(AgentIndex j, std::span<const Vec2> positions) const {
  double sum = 0.0;
  for (AgentIndex h : formation_.neighbors(j)) {
    sum += (positions[j] - positions[h] - formation_.offset(j, h)).squaredNorm();
  }
  return sum;
}

Vec2 NavigationField::grad_gamma_wrt(AgentIndex j, AgentIndex wrt, std::span<const Vec2> positions) const {
  if (wrt == j) {
    Vec2 g = Vec2::Zero();
    for (AgentIndex h : formation_.neighbors(j)) g += positions[j] - positions[h] - formation_.offset(j, h);
    return 2.0 * g;
  }
  if (!formation_.are_neighbors(j, wrt)) return Vec2::Zero();
  // d/dq_wrt |q_j - q_wrt - c_j,wrt|^2 = 2 (q_wrt - q_j - c_wrt,j)
  return 2.0 * (positions[wrt] - positions[j] - formation_.offset(wrt, j));
}

namespace {

bool hidden(LinkMask failed, std::size_t n, AgentIndex a, AgentIndex b) {
  return !failed.empty() && failed[a * n + b] != 0;
}

}  // namespace

BetaEval NavigationField::beta_wrt(AgentIndex j, AgentIndex wrt, std::span<const Vec2> positions,
                                   LinkMask failed) const {
  const double rs = params_.sensing_radius;
  const double d2 = params_.delta2;
  const double d1 = params_.delta1;
  const Vec2& qj = positions[j];

  // Gradient of a pairwise factor f(|q_j - q_h|) with respect to q_wrt.
  auto pair_grad = [&](AgentIndex h, double slope, const Vec2& diff, double d) -> Vec2 {
    if (slope == 0.0 || d == 0.0) return Vec2::Zero();
    if (wrt == j) return slope * diff / d;
    if (wrt == h) return -slope * diff / d;
    return Vec2::Zero();
  };

  ProductAccumulator acc;
  for (AgentIndex h : formation_.neighbors(j)) {
    const Vec2 diff = qj - positions[h];
    const double d = diff.norm();
    acc.multiply(eval_b(d, rs, d2), pair_grad(h, eval_b_derivative(d, rs, d2), diff, d));
  }
  for (AgentIndex h = 0; h < positions.size(); ++h) {
    if (h == j || hidden(failed, positions.size(), j, h)) continue;
    const Vec2 diff = qj - positions[h];
    const double d = diff.norm();
    if (d > d1) continue;
    acc.multiply(eval_B(d, d1), pair_grad(h, eval_B_derivative(d, d1), diff, d));
  }
  for (const Vec2& o : obstacles_.points) {
    const Vec2 diff = qj - o;
    const double d = diff.norm();
    if (d > d1) continue;
    Vec2 g = Vec2::Zero();
    if (wrt == j && d != 0.0) g = eval_B_derivative(d, d1) * diff / d;
    acc.multiply(eval_B(d, d1), g);
  }
  return {clamp_unit(acc.value), acc.grad};
}

Vec2 NavigationField::grad_phi_wrt(AgentIndex j, AgentIndex wrt, std::span<const Vec2> positions,
                                   LinkMask failed) const {
  const double g = gamma(j, positions);
  const BetaEval b = beta_wrt(j, wrt, positions, failed);
  return grad_phi(g, b.beta, grad_gamma_wrt(j, wrt, positions), b.grad, params_.k);
}

double NavigationField::phi(AgentIndex j, std::span<const Vec2> positions, LinkMask failed) const {
  return eval_phi(gamma(j, positions), beta_wrt(j, j, positions, failed).beta, params_.k);
}

NavigationEval NavigationField::evaluate(AgentIndex i, std::span<const Vec2> positions, LinkMask failed) const {
  NavigationEval e;
  e.gamma = gamma(i, positions);
  e.grad_gamma = grad_gamma_wrt(i, i, positions);
  const BetaEval b = beta_wrt(i, i, positions, failed);
  e.beta = b.beta;
  e.grad_beta = b.grad;
  if (e.gamma == 0.0 && e.beta == 0.0) {
    throw DegenerateNavigationError(fmt::format("agent {}: gamma and beta vanish together", i + 1));
  }
  e.phi = eval_phi(e.gamma, e.beta, params_.k);
  e.grad_phi = grad_phi(e.gamma, e.beta, e.grad_gamma, e.grad_beta, params_.k);
  for (AgentIndex h = 0; h < positions.size(); ++h) {
    if (h == i || hidden(failed, positions.size(), i, h)) continue;
    if (pairwise_distance(positions[i], positions[h]) <= params_.delta1) ++e.collision_set_size;
  }
  for (const Vec2& o : obstacles_.points) {
    if (pairwise_distance(positions[i], o) <= params_.delta1) ++e.collision_set_size;
  }
  for (AgentIndex h : formation_.neighbors(i)) {
    if (pairwise_distance(positions[i], positions[h]) > params_.sensing_radius) {
      e.formation_neighbor_out_of_range = true;
    }
  }
  return e;
}

std::vector<AgentIndex> NavigationField::collision_agents(AgentIndex i, std::span<const Vec2> positions,
                                                          LinkMask failed) const {
  std::vector<AgentIndex> out;
  for (AgentIndex h = 0; h < positions.size(); ++h) {
    if (h == i || hidden(failed, positions.size(), i, h)) continue;
    if (pairwise_distance(positions[i], positions[h]) <= params_.delta1) out.push_back(h);
  }
  return out;
}

std::vector<std::size_t> NavigationField::collision_obstacles(AgentIndex i, std::span<const Vec2> positions) const {
  std::vector<std::size_t> out;
  for (std::size_t o = 0; o < obstacles_.points.size(); ++o) {
    if (pairwise_distance(positions[i], obstacles_.points[o]) <= params_.delta1) out.push_back(o);
  }
  return out;
}

}  // namespace navform
