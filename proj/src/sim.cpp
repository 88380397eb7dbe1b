#include "navform/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace navform {

double TrajectoryLog::pair_distance(std::size_t step, AgentIndex i, AgentIndex j) const {
  return pairwise_distance(position(step, i), position(step, j));
}

std::span<const Vec2> TrajectoryLog::positions_at(std::size_t step) const {
  return std::span<const Vec2>(positions).subspan(step * agent_count, agent_count);
}

void TrajectoryLog::append(double t, std::span<const Vec2> q, std::span<const Vec2> u, const ActiveSets& active,
                           std::span<const double> gammas, std::span<const double> phis, double v) {
  times.push_back(t);
  positions.insert(positions.end(), q.begin(), q.end());
  controls.insert(controls.end(), u.begin(), u.end());
  for (AgentIndex i = 0; i < agent_count; ++i) in_vf.push_back(active.in_vf[i] ? 1 : 0);
  gamma.insert(gamma.end(), gammas.begin(), gammas.end());
  phi.insert(phi.end(), phis.begin(), phis.end());
  V.push_back(v);
  if (active_sets.empty() || !(active_sets.back().second == active)) {
    active_sets.emplace_back(times.size() - 1, active);
  }
}

BoundReport compute_bound(const Params& params, const FormationSpec& formation, double rho1_bar, double rho2_bar,
                          double beta_under) {
  if (!(beta_under > 0.0)) throw std::invalid_argument("beta_under must be positive");
  if (rho1_bar < 0.0 || rho2_bar < 0.0) throw std::invalid_argument("rho bounds must be nonnegative");
  const double k = params.k;
  const double rs = params.sensing_radius;
  BoundReport r;
  r.c_max = std::sqrt(rs * rs / beta_under * (rho1_bar / (2.0 * k) + rho2_bar / (2.0 * k * k)));
  r.n_under = std::max<std::size_t>(1, formation.min_degree());
  r.ultimate_error = std::sqrt(r.c_max / static_cast<double>(r.n_under));
  return r;
}

double lyapunov_value(std::span<const Vec2> positions, const NavigationField& field) {
  double v = 0.0;
  for (AgentIndex i = 0; i < positions.size(); ++i) v += field.phi(i, positions);
  return v;
}

double max_formation_residual(std::span<const Vec2> positions, const FormationSpec& formation) {
  double best = 0.0;
  for (const auto& [i, j] : formation.pairs()) {
    best = std::max(best, (positions[i] - positions[j] - formation.offset(i, j)).norm());
  }
  return best;
}

MonitorVerdict monitor_connectivity(const TrajectoryLog& log, const FormationSpec& formation, double sensing_radius) {
  MonitorVerdict v{.name = "connectivity"};
  double worst = 0.0;
  for (std::size_t s = 0; s < log.steps(); ++s) {
    for (const auto& [i, j] : formation.pairs()) {
      const double d = log.pair_distance(s, i, j);
      worst = std::max(worst, d);
      if (v.passed && !(d < sensing_radius)) {
        v.passed = false;
        v.t = log.times[s];
        v.i = i + 1;
        v.j = j + 1;
        v.detail = fmt::format("d_{}{} = {:.12g} >= R_s at t = {:.12g}", i + 1, j + 1, d, log.times[s]);
      }
    }
  }
  if (v.passed) v.detail = fmt::format("max formation-pair distance {:.12g} < R_s = {:.12g}", worst, sensing_radius);
  return v;
}

MonitorVerdict monitor_collision(const TrajectoryLog& log, const ObstacleSet& obstacles, double clearance) {
  MonitorVerdict v{.name = "collision"};
  double worst = std::numeric_limits<double>::infinity();
  const std::size_t n = log.agent_count;
  for (std::size_t s = 0; s < log.steps(); ++s) {
    for (AgentIndex i = 0; i < n; ++i) {
      auto check = [&](double d, std::size_t j) {
        worst = std::min(worst, d);
        if (v.passed && !(d > clearance)) {
          v.passed = false;
          v.t = log.times[s];
          v.i = i + 1;
          v.j = j;
          v.detail = fmt::format("clearance {:.12g} <= {:.12g} at t = {:.12g}", d, clearance, log.times[s]);
        }
      };
      for (AgentIndex j = i + 1; j < n; ++j) check(log.pair_distance(s, i, j), j + 1);
      // Obstacles are reported with j = 0.
      for (const Vec2& o : obstacles.points) check(pairwise_distance(log.position(s, i), o), 0);
    }
  }
  if (v.passed) v.detail = fmt::format("min clearance {:.12g} > {:.12g}", worst, clearance);
  return v;
}

MonitorVerdict monitor_lyapunov(const TrajectoryLog& log, const FormationSpec& formation,
                                std::optional<double> residual_threshold, double slack, double residual_epsilon) {
  MonitorVerdict v{.name = "lyapunov"};
  const std::size_t n = log.agent_count;
  std::size_t first_checked = 0;
  if (!residual_threshold) {
    for (std::size_t s = 0; s < log.steps(); ++s) {
      if (max_formation_residual(log.positions_at(s), formation) > residual_epsilon) first_checked = s + 1;
    }
  }
  std::size_t checked = 0;
  std::size_t frozen = 0;
  auto fail = [&](std::size_t s, std::string why) {
    if (!v.passed) return;
    v.passed = false;
    v.t = log.times[s];
    v.detail = std::move(why);
  };
  for (std::size_t s = 0; s + 1 < log.steps(); ++s) {
    bool any_vf = false;
    bool hypothesis = true;
    for (AgentIndex i = 0; i < n; ++i) {
      if (!log.vf(s, i)) continue;
      any_vf = true;
      if (residual_threshold && !(log.agent_gamma(s, i) > *residual_threshold)) hypothesis = false;
    }
    if (!any_vf) {
      ++frozen;
      if (log.V[s + 1] != log.V[s]) {
        fail(s, fmt::format("V changed during an all-V_u step at t = {:.12g}", log.times[s]));
      }
      continue;
    }
    if (!residual_threshold && s < first_checked) continue;
    if (!hypothesis) continue;
    ++checked;
    if (log.V[s + 1] > log.V[s] + slack) {
      fail(s, fmt::format("V rose from {:.12g} to {:.12g} at t = {:.12g}", log.V[s], log.V[s + 1], log.times[s]));
    }
  }
  if (v.passed) {
    v.detail = fmt::format("{} decrease steps checked, {} frozen steps; V: {:.12g} -> {:.12g}", checked, frozen,
                           log.V.empty() ? 0.0 : log.V.front(), log.V.empty() ? 0.0 : log.V.back());
  }
  return v;
}

bool RunResult::all_passed() const {
  if (aborted) return false;
  return std::all_of(verdicts.begin(), verdicts.end(), [](const MonitorVerdict& v) { return v.passed; });
}

Simulator::Simulator(Scenario scenario)
    : scenario_(std::move(scenario)),
      field_(scenario_.formation, scenario_.obstacles, scenario_.params),
      schedule_(FailureSchedule::realize(scenario_.failures, scenario_.agent_count(), scenario_.integration.dt,
                                         scenario_.integration.t_final, scenario_.integration.seed)) {}

std::vector<Vec2> Simulator::velocities(std::span<const Vec2> q, const ActiveSets& active, LinkMask failed) const {
  std::vector<Vec2> u(q.size(), Vec2::Zero());
  for (AgentIndex i = 0; i < q.size(); ++i) {
    if (!active.contains_vf(i)) continue;
    try {
      u[i] = -scenario_.params.gain * field_.grad_phi_wrt(i, i, q, failed);
    } catch (const DegenerateNavigationError& e) {
      throw NumericalError(e.what());
    }
  }
  return u;
}

std::vector<Vec2> Simulator::advance(std::span<const Vec2> q, const ActiveSets& active,
                                     std::span<const Vec2> k1, LinkMask failed) const {
  const double dt = scenario_.integration.dt;
  const std::size_t n = q.size();
  std::vector<Vec2> next(q.begin(), q.end());
  if (!scenario_.integration.stage_recompute) {
    for (std::size_t i = 0; i < n; ++i) next[i] += dt * k1[i];
  } else {
    std::vector<Vec2> stage(n);
    auto offset = [&](std::span<const Vec2> k, double h) {
      for (std::size_t i = 0; i < n; ++i) stage[i] = q[i] + h * k[i];
      return std::span<const Vec2>(stage);
    };
    const auto k2 = velocities(offset(k1, 0.5 * dt), active, failed);
    const auto k3 = velocities(offset(k2, 0.5 * dt), active, failed);
    const auto k4 = velocities(offset(k3, dt), active, failed);
    for (std::size_t i = 0; i < n; ++i) {
      next[i] += (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!next[i].allFinite()) throw NumericalError(fmt::format("non-finite position for agent {}", i + 1));
  }
  return next;
}

std::vector<Vec2> Simulator::step(std::span<const Vec2> q, const SensingGraph& graph, LinkMask failed) const {
  const ActiveSets active = partition_active(graph, scenario_.formation);
  const auto k1 = velocities(q, active, failed);
  return advance(q, active, k1, failed);
}

RunResult Simulator::run(const RunOptions& options) const {
  const Scenario& sc = scenario_;
  const std::size_t n = sc.agent_count();
  const double dt = sc.integration.dt;
  const std::int64_t total = std::max<std::int64_t>(1, snap_to_step(sc.integration.t_final, dt));
  const double rs = sc.params.sensing_radius;
  const double clearance = sc.monitors.collision_clearance;

  RunResult result;
  TrajectoryLog& log = result.log;
  log.agent_count = n;
  log.dt = dt;
  const std::size_t records = static_cast<std::size_t>(total) + 1;
  log.times.reserve(records);
  log.positions.reserve(records * n);
  log.controls.reserve(records * n);
  log.in_vf.reserve(records * n);
  log.gamma.reserve(records * n);
  log.phi.reserve(records * n);
  log.V.reserve(records);

  std::vector<Vec2> q = sc.initial_positions();
  std::vector<Vec2> u(n);
  std::vector<double> gammas(n), phis(n);
  std::vector<ActiveSets> epochs_seen;

  for (std::int64_t s = 0; s <= total; ++s) {
    const SensingGraph graph = sensing_graph_at(s, q, schedule_, rs);
    const ActiveSets active = partition_active(graph, sc.formation);
    const LinkMask failed = sc.params.collision_requires_sensing ? schedule_.failed_links(s) : LinkMask{};
    double v = 0.0;
    for (AgentIndex i = 0; i < n; ++i) {
      NavigationEval e;
      try {
        e = field_.evaluate(i, q, failed);
      } catch (const DegenerateNavigationError& err) {
        throw NumericalError(fmt::format("{} at t = {:.12g}", err.what(), static_cast<double>(s) * dt));
      }
      gammas[i] = e.gamma;
      phis[i] = e.phi;
      v += e.phi;
      u[i] = control_input(i, active, e, sc.params.gain);
      if (e.formation_neighbor_out_of_range) ++log.out_of_range_evaluations;
    }
    log.append(static_cast<double>(s) * dt, q, u, active, gammas, phis, v);
    if (epochs_seen.empty() || !(epochs_seen.back() == active)) epochs_seen.push_back(active);

    if (options.on_violation == ViolationPolicy::kAbort) {
      for (const auto& [i, j] : sc.formation.pairs()) {
        if (!(pairwise_distance(q[i], q[j]) < rs)) {
          result.aborted = true;
          result.abort_reason = fmt::format("connectivity lost between agents {} and {} at t = {:.12g}", i + 1,
                                            j + 1, static_cast<double>(s) * dt);
        }
      }
      for (AgentIndex i = 0; i < n && !result.aborted; ++i) {
        for (AgentIndex j = i + 1; j < n; ++j) {
          if (!(pairwise_distance(q[i], q[j]) > clearance)) {
            result.aborted = true;
            result.abort_reason = fmt::format("agents {} and {} collided at t = {:.12g}", i + 1, j + 1,
                                              static_cast<double>(s) * dt);
            break;
          }
        }
        for (std::size_t o = 0; o < sc.obstacles.points.size() && !result.aborted; ++o) {
          if (!(pairwise_distance(q[i], sc.obstacles.points[o]) > clearance)) {
            result.aborted = true;
            result.abort_reason = fmt::format("agent {} hit obstacle {} at t = {:.12g}", i + 1, o + 1,
                                              static_cast<double>(s) * dt);
          }
        }
      }
      if (result.aborted) break;
    }
    if (s == total) break;

    try {
      q = advance(q, active, u, failed);
    } catch (const NumericalError& err) {
      throw NumericalError(fmt::format("{} at t = {:.12g}", err.what(), static_cast<double>(s + 1) * dt));
    }
  }

  result.coverage = coverage_satisfied(epochs_seen, n);
  result.neighborhood_coverage = neighborhood_coverage_satisfied(epochs_seen, sc.formation);
  result.switch_count = schedule_.switch_times().size();

  std::optional<double> threshold;
  if (sc.monitors.bounds) {
    const BoundInputs& b = *sc.monitors.bounds;
    result.bound = compute_bound(sc.params, sc.formation, b.rho1_bar, b.rho2_bar, b.beta_under);
    result.bound_from_inputs = true;
    threshold = result.bound.c_max;
  } else {
    result.bound.n_under = std::max<std::size_t>(1, sc.formation.min_degree());
    result.bound.c_max = std::numeric_limits<double>::quiet_NaN();
    result.bound.ultimate_error = std::numeric_limits<double>::quiet_NaN();
  }
  result.bound.observed_max_residual = max_formation_residual(log.positions_at(log.steps() - 1), sc.formation);

  result.verdicts.push_back(monitor_connectivity(log, sc.formation, rs));
  result.verdicts.push_back(monitor_collision(log, sc.obstacles, clearance));
  result.verdicts.push_back(monitor_lyapunov(log, sc.formation, threshold,
                                             sc.monitors.lyapunov_slack_coeff * dt * dt,
                                             sc.monitors.residual_epsilon));
  return result;
}

}  // namespace navform
