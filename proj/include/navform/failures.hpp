#pragma once

#include <cstdint>
#include <vector>

#include "navform/types.hpp"

namespace navform {

/// A scheduled outage of the undirected link (i, j) over [from, to).
struct Outage {
  AgentIndex i = 0;
  AgentIndex j = 0;
  double from = 0.0;
  double to = 0.0;
};

/// Epoch lengths uniform in (tau, T); every link fails independently with
/// probability p_fail for the duration of an epoch.
struct RandomFailureSpec {
  double p_fail = 0.0;
  double tau = 0.05;
  double T = 0.5;
};

struct LinkFailureModel {
  enum class Mode { kSchedule, kRandom };

  Mode mode = Mode::kSchedule;
  std::vector<Outage> outages;  // kSchedule
  RandomFailureSpec random;     // kRandom

  static LinkFailureModel none() { return {}; }
};

}  // namespace navform
