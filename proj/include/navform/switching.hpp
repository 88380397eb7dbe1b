#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "navform/model.hpp"
#include "navform/navigation.hpp"

namespace navform {

/// Undirected snapshot of which agent pairs currently sense each other.
class SensingGraph {
 public:
  SensingGraph() = default;
  explicit SensingGraph(std::size_t n) : n_(n), up_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool up(AgentIndex i, AgentIndex j) const { return up_[i * n_ + j] != 0; }
  void set(AgentIndex i, AgentIndex j, bool value);
  /// N_i^s, ascending.
  std::vector<AgentIndex> neighbors(AgentIndex i) const;

  bool operator==(const SensingGraph&) const = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint8_t> up_;
};

/// One constant-graph interval [start_step, end_step) of the switching signal.
struct SwitchEpoch {
  std::int64_t start_step = 0;
  std::int64_t end_step = 0;
  // Row-major n*n, symmetric; 1 when the link is in outage.
  std::vector<std::uint8_t> failed;
};

/// A realized switching signal with switch instants snapped to the step grid.
class FailureSchedule {
 public:
  /// Realizes the failure model over [0, t_final]. Random mode draws from a
  /// stream seeded by `seed` alone, so the realization never depends on the
  /// trajectory.
  static FailureSchedule realize(const LinkFailureModel& model, std::size_t n, double dt, double t_final,
                                 std::uint64_t seed);

  std::size_t agent_count() const { return n_; }
  double dt() const { return dt_; }
  const std::vector<SwitchEpoch>& epochs() const { return epochs_; }
  /// Epoch containing `step`; steps past the horizon map to the last epoch.
  std::size_t epoch_index(std::int64_t step) const;
  bool failed(std::int64_t step, AgentIndex i, AgentIndex j) const;
  /// n*n outage mask in force at `step`; empty when nothing can fail.
  std::span<const std::uint8_t> failed_links(std::int64_t step) const;
  /// Switch instants t_k (excluding t = 0).
  std::vector<double> switch_times() const;

 private:
  std::size_t n_ = 0;
  double dt_ = 0.0;
  std::vector<SwitchEpoch> epochs_;
};

/// Rounds a time to the nearest step index.
std::int64_t snap_to_step(double t, double dt);

/// up(i, j) = d_ij < R_s and the link is not in outage at `step`.
SensingGraph sensing_graph_at(std::int64_t step, std::span<const Vec2> positions, const FailureSchedule& schedule,
                              double sensing_radius);

struct ActiveSets {
  std::vector<bool> in_vf;

  bool contains_vf(AgentIndex i) const { return in_vf[i]; }
  std::vector<AgentIndex> vf() const;
  std::vector<AgentIndex> vu() const;
  bool operator==(const ActiveSets&) const = default;
};

/// i is in V_f iff every formation neighbor is currently sensed.
ActiveSets partition_active(const SensingGraph& graph, const FormationSpec& formation);

/// -gain * grad_phi in V_f, zero in V_u.
Vec2 control_input(AgentIndex i, const ActiveSets& active, const NavigationEval& nav, double gain);

/// Union of V_f over the window equals the full agent set.
bool coverage_satisfied(std::span<const ActiveSets> window, std::size_t agent_count);

/// Union over the window of N_i^f ∪ {i} for agents i in V_f equals V.
bool neighborhood_coverage_satisfied(std::span<const ActiveSets> window, const FormationSpec& formation);

}  // namespace navform
