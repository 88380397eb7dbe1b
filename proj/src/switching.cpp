#include "navform/switching.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace navform {

void SensingGraph::set(AgentIndex i, AgentIndex j, bool value) {
  up_[i * n_ + j] = value ? 1 : 0;
  up_[j * n_ + i] = value ? 1 : 0;
}

std::vector<AgentIndex> SensingGraph::neighbors(AgentIndex i) const {
  std::vector<AgentIndex> out;
  for (AgentIndex j = 0; j < n_; ++j) {
    if (j != i && up(i, j)) out.push_back(j);
  }
  return out;
}

std::int64_t snap_to_step(double t, double dt) { return static_cast<std::int64_t>(std::llround(t / dt)); }

FailureSchedule FailureSchedule::realize(const LinkFailureModel& model, std::size_t n, double dt, double t_final,
                                         std::uint64_t seed) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  FailureSchedule s;
  s.n_ = n;
  s.dt_ = dt;
  const std::int64_t total = std::max<std::int64_t>(1, snap_to_step(t_final, dt));

  if (model.mode == LinkFailureModel::Mode::kSchedule) {
    std::vector<std::int64_t> cuts{0};
    for (const auto& o : model.outages) {
      for (double t : {o.from, o.to}) {
        const std::int64_t k = snap_to_step(t, dt);
        if (k > 0 && k < total) cuts.push_back(k);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    cuts.push_back(total);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      SwitchEpoch e{cuts[c], cuts[c + 1], std::vector<std::uint8_t>(n * n, 0)};
      for (const auto& o : model.outages) {
        if (o.i >= n || o.j >= n) continue;
        if (snap_to_step(o.from, dt) <= e.start_step && e.start_step < snap_to_step(o.to, dt)) {
          e.failed[o.i * n + o.j] = 1;
          e.failed[o.j * n + o.i] = 1;
        }
      }
      s.epochs_.push_back(std::move(e));
    }
    return s;
  }

  const RandomFailureSpec& r = model.random;
  // Admissible epoch lengths in steps: tau < len * dt < T.
  std::int64_t lo = static_cast<std::int64_t>(std::floor(r.tau / dt)) + 1;
  while (static_cast<double>(lo) * dt <= r.tau) ++lo;
  std::int64_t hi = static_cast<std::int64_t>(std::ceil(r.T / dt)) - 1;
  while (static_cast<double>(hi) * dt >= r.T) --hi;
  if (lo > hi) throw std::invalid_argument("dwell window (tau, T) admits no step-aligned epoch length");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> length(r.tau, r.T);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::int64_t start = 0;
  while (start < total) {
    const std::int64_t len = std::clamp(snap_to_step(length(rng), dt), lo, hi);
    SwitchEpoch e{start, start + len, std::vector<std::uint8_t>(n * n, 0)};
    for (AgentIndex i = 0; i < n; ++i) {
      for (AgentIndex j = i + 1; j < n; ++j) {
        if (unit(rng) < r.p_fail) {
          e.failed[i * n + j] = 1;
          e.failed[j * n + i] = 1;
        }
      }
    }
    start += len;
    s.epochs_.push_back(std::move(e));
  }
  return s;
}

std::size_t FailureSchedule::epoch_index(std::int64_t step) const {
  auto it = std::upper_bound(epochs_.begin(), epochs_.end(), step,
                             [](std::int64_t v, const SwitchEpoch& e) { return v < e.start_step; });
  if (it == epochs_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(epochs_.begin(), it) - 1);
}

bool FailureSchedule::failed(std::int64_t step, AgentIndex i, AgentIndex j) const {
  if (epochs_.empty()) return false;
  return epochs_[epoch_index(step)].failed[i * n_ + j] != 0;
}

std::span<const std::uint8_t> FailureSchedule::failed_links(std::int64_t step) const {
  if (epochs_.empty()) return {};
  return epochs_[epoch_index(step)].failed;
}

std::vector<double> FailureSchedule::switch_times() const {
  std::vector<double> out;
  for (std::size_t e = 1; e < epochs_.size(); ++e) out.push_back(static_cast<double>(epochs_[e].start_step) * dt_);
  return out;
}

SensingGraph sensing_graph_at(std::int64_t step, std::span<const Vec2> positions, const FailureSchedule& schedule,
                              double sensing_radius) {
  const std::size_t n = positions.size();
  SensingGraph g(n);
  const SwitchEpoch* epoch = schedule.epochs().empty() ? nullptr : &schedule.epochs()[schedule.epoch_index(step)];
  for (AgentIndex i = 0; i < n; ++i) {
    for (AgentIndex j = i + 1; j < n; ++j) {
      const bool in_range = pairwise_distance(positions[i], positions[j]) < sensing_radius;
      const bool outage = epoch != nullptr && epoch->failed[i * n + j] != 0;
      g.set(i, j, in_range && !outage);
    }
  }
  return g;
}

std::vector<AgentIndex> ActiveSets::vf() const {
  std::vector<AgentIndex> out;
  for (AgentIndex i = 0; i < in_vf.size(); ++i) {
    if (in_vf[i]) out.push_back(i);
  }
  return out;
}

std::vector<AgentIndex> ActiveSets::vu() const {
  std::vector<AgentIndex> out;
  for (AgentIndex i = 0; i < in_vf.size(); ++i) {
    if (!in_vf[i]) out.push_back(i);
  }
  return out;
}

ActiveSets partition_active(const SensingGraph& graph, const FormationSpec& formation) {
  ActiveSets a;
  a.in_vf.assign(graph.size(), true);
  for (AgentIndex i = 0; i < graph.size(); ++i) {
    for (AgentIndex j : formation.neighbors(i)) {
      if (!graph.up(i, j)) {
        a.in_vf[i] = false;
        break;
      }
    }
  }
  return a;
}

Vec2 control_input(AgentIndex i, const ActiveSets& active, const NavigationEval& nav, double gain) {
  if (!active.contains_vf(i)) return Vec2::Zero();
  return -gain * nav.grad_phi;
}

bool coverage_satisfied(std::span<const ActiveSets> window, std::size_t agent_count) {
  if (window.empty()) return false;
  std::vector<bool> covered(agent_count, false);
  for (const auto& a : window) {
    for (AgentIndex i = 0; i < agent_count && i < a.in_vf.size(); ++i) covered[i] = covered[i] || a.in_vf[i];
  }
  return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

bool neighborhood_coverage_satisfied(std::span<const ActiveSets> window, const FormationSpec& formation) {
  if (window.empty()) return false;
  std::vector<bool> covered(formation.agent_count(), false);
  for (const auto& a : window) {
    for (AgentIndex i = 0; i < a.in_vf.size(); ++i) {
      if (!a.in_vf[i]) continue;
      covered[i] = true;
      for (AgentIndex j : formation.neighbors(i)) covered[j] = true;
    }
  }
  return std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
}

}  // namespace navform
