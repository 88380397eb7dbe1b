#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "navform/model.hpp"
#include "navform/navigation.hpp"
#include "navform/switching.hpp"

namespace navform {

/// Non-finite state during integration.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time-indexed record of one closed-loop run. Per-agent series are stored
/// row-major: entry [step * agent_count + i].
struct TrajectoryLog {
  std::size_t agent_count = 0;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Vec2> positions;
  std::vector<Vec2> controls;
  std::vector<std::uint8_t> in_vf;
  std::vector<double> gamma;
  std::vector<double> phi;
  std::vector<double> V;
  // Steps at which the active partition changed, with the new partition.
  std::vector<std::pair<std::size_t, ActiveSets>> active_sets;
  // Evaluations that saw a formation neighbor beyond R_s.
  std::size_t out_of_range_evaluations = 0;

  std::size_t steps() const { return times.size(); }
  const Vec2& position(std::size_t step, AgentIndex i) const { return positions[step * agent_count + i]; }
  const Vec2& control(std::size_t step, AgentIndex i) const { return controls[step * agent_count + i]; }
  bool vf(std::size_t step, AgentIndex i) const { return in_vf[step * agent_count + i] != 0; }
  double agent_gamma(std::size_t step, AgentIndex i) const { return gamma[step * agent_count + i]; }
  double pair_distance(std::size_t step, AgentIndex i, AgentIndex j) const;
  std::span<const Vec2> positions_at(std::size_t step) const;

  /// Appends one record. Every per-agent span must have agent_count entries.
  void append(double t, std::span<const Vec2> q, std::span<const Vec2> u, const ActiveSets& active,
              std::span<const double> gammas, std::span<const double> phis, double v);
};

struct BoundReport {
  double c_max = 0.0;
  std::size_t n_under = 1;
  double ultimate_error = 0.0;
  double observed_max_residual = 0.0;
};

/// Ultimate bound from user-supplied rho_1, rho_2 and beta lower bound.
/// Throws std::invalid_argument when beta_under <= 0.
BoundReport compute_bound(const Params& params, const FormationSpec& formation, double rho1_bar, double rho2_bar,
                          double beta_under);

/// V(q) = sum_i phi_i.
double lyapunov_value(std::span<const Vec2> positions, const NavigationField& field);

/// max over i, j in N_i^f of |q_i - q_j - c_ij|.
double max_formation_residual(std::span<const Vec2> positions, const FormationSpec& formation);

struct MonitorVerdict {
  std::string name;
  bool passed = true;
  std::string detail;
  // First violation, when any.
  std::optional<double> t;
  std::size_t i = 0;  // 1-based, 0 if not applicable
  std::size_t j = 0;
};

MonitorVerdict monitor_connectivity(const TrajectoryLog& log, const FormationSpec& formation, double sensing_radius);

MonitorVerdict monitor_collision(const TrajectoryLog& log, const ObstacleSet& obstacles, double clearance);

/// Decrease check on V. With `residual_threshold` (c_max) set, each step whose
/// V_f agents all have gamma_i above it must satisfy V(t+dt) <= V(t) + slack.
/// Without it, V must be nonincreasing (within slack) after the last step at
/// which any formation residual exceeds `residual_epsilon`. Steps with V_f
/// empty must keep V exactly constant in either mode.
MonitorVerdict monitor_lyapunov(const TrajectoryLog& log, const FormationSpec& formation,
                                std::optional<double> residual_threshold, double slack, double residual_epsilon);

enum class ViolationPolicy { kAbort, kFlagAndContinue };

struct RunOptions {
  ViolationPolicy on_violation = ViolationPolicy::kFlagAndContinue;
};

struct RunResult {
  TrajectoryLog log;
  BoundReport bound;
  bool bound_from_inputs = false;
  std::vector<MonitorVerdict> verdicts;
  bool aborted = false;
  std::string abort_reason;
  bool coverage = false;               // union of V_f over the run is V
  bool neighborhood_coverage = false;  // union of N_i^f ∪ {i} over V_f agents is V
  std::size_t switch_count = 0;

  bool all_passed() const;
};

/// Closed-loop integrator for one scenario.
class Simulator {
 public:
  explicit Simulator(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  const NavigationField& field() const { return field_; }
  const FailureSchedule& schedule() const { return schedule_; }

  /// Agent velocities with the partition held fixed.
  std::vector<Vec2> velocities(std::span<const Vec2> q, const ActiveSets& active, LinkMask failed = {}) const;

  /// One RK4 step of dq_i/dt = u_i(q) under `graph` and outage mask
  /// `failed`. Throws NumericalError on non-finite output.
  std::vector<Vec2> step(std::span<const Vec2> q, const SensingGraph& graph, LinkMask failed = {}) const;

  RunResult run(const RunOptions& options = {}) const;

 private:
  std::vector<Vec2> advance(std::span<const Vec2> q, const ActiveSets& active, std::span<const Vec2> k1,
                            LinkMask failed) const;

  Scenario scenario_;
  NavigationField field_;
  FailureSchedule schedule_;
};

}  // namespace navform
