#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "navform/model.hpp"
#include "navform/navigation.hpp"

namespace navform::verify {

/// A frozen multi-agent configuration with one agent singled out.
struct Configuration {
  std::vector<Vec2> positions;
  FormationSpec formation;
  ObstacleSet obstacles;
  Params params;
  AgentIndex agent = 0;

  NavigationField field() const { return NavigationField(formation, obstacles, params); }
};

/// Central differences, one coordinate at a time.
Vec2 finite_difference_gradient(const std::function<double(const Vec2&)>& f, const Vec2& q, double h);

/// lhs <= rhs with relative slack against |rhs| and an absolute floor of 1e-12.
bool holds_with_slack(double lhs, double rhs, double relative = 1e-9);

struct PropertyTerms {
  Vec2 A = Vec2::Zero();  // beta_i grad gamma_i
  Vec2 B = Vec2::Zero();  // gamma_i grad beta_i
  Vec2 C = Vec2::Zero();  // sum_j beta_j grad_{q_i} gamma_j
  Vec2 D = Vec2::Zero();  // sum_j gamma_j grad_{q_i} beta_j
};

PropertyTerms property_terms(const Configuration& c);

struct Inequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

Inequality property1(const Configuration& c);  // |A|^2 <= 4 beta_i^2 |N_i^f| gamma_i
Inequality property2(const Configuration& c);  // |B| <= gamma_i (|N_i^f| 2/d2 + |N_i ∪ M_i| 2/d1)
Inequality property3(const Configuration& c);  // |C|^2 <= 4 |N_i^f| gamma_i
Inequality property4(const Configuration& c);  // |D| <= (2/d2 + 2/d1) sum_j gamma_j
Inequality property5(const Configuration& c);  // gamma_i <= |N_i^f| (R_s + max_j |c_ij|)^2
Inequality gamma_gradient_bound(const Configuration& c);  // gamma_i / R_s <= |grad gamma_i|

bool check_property1(const Configuration& c);
bool check_property2(const Configuration& c);
bool check_property3(const Configuration& c);
bool check_property4(const Configuration& c);
bool check_property5(const Configuration& c);
bool gradient_norm_lower_bound(const Configuration& c);

/// Positive constants c_{1..5} defining rho_1 and rho_2.
struct RhoConstants {
  double c1 = 0.0, c2 = 0.0, c3 = 0.0, c4 = 0.0, c5 = 0.0;
};

/// Constants for which Properties 1-4 bound the Young-inequality form:
/// c1 = 8|N_i^f|, c2 = c4 = (|N_i^f| 2/d2 + |N_i ∪ M_i| 2/d1)^2, c3 = c5 = (2/d2 + 2/d1)^2.
RhoConstants property_constants(const Configuration& c);

struct DecreaseCheck {
  double hypothesis = 0.0;  // 4 beta_under |sum r|^2 - rho1/(2k) - rho2/(2k^2)
  double conclusion = 0.0;  // A.C - (|B||C| + |A||D|)/k - |B||D|/k^2
  double beta_under = 0.0;  // min over formation pairs of beta_i beta_j
  bool hypothesis_holds = false;
  bool holds = false;  // hypothesis false, or conclusion > 0
};

DecreaseCheck decrease_condition(const Configuration& c, const RhoConstants& rho, double k);
bool check_decrease_condition(const Configuration& c, const RhoConstants& rho, double k);

/// Relative gap between (grad phi_i)^T (sum_j grad_{q_i} phi_j) computed from
/// the navigation field and reassembled from the per-j A/B/C/D pieces.
double recombination_gap(const Configuration& c);

/// What a generated configuration must satisfy.
enum class Hypothesis {
  kAny,
  kConnected,  // every formation pair of the agent under test has d < R_s
  kSmooth,     // all pair distances at least `margin` from factor breakpoints; beta_i > 0
};

class ConfigurationGenerator {
 public:
  explicit ConfigurationGenerator(std::uint64_t seed) : rng_(seed) {}

  Configuration next(Hypothesis h, double margin = 1e-5);
  std::mt19937_64& rng() { return rng_; }

 private:
  Configuration draw();
  std::mt19937_64 rng_;
};

/// Single formation neighbor with residual (3, 4) and beta_i = 1.
Configuration single_neighbor_configuration();

struct SuiteLine {
  std::string name;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double worst = 0.0;  // largest error or violation margin observed
  std::string counterexample;
};

struct VerifyReport {
  std::vector<SuiteLine> lines;

  bool ok() const;
  std::string text() const;
};

VerifyReport gradient_suite(std::uint64_t seed, std::size_t trials);
VerifyReport property_suite(std::uint64_t seed, std::size_t trials);
VerifyReport bounds_suite(std::uint64_t seed, std::size_t trials);

/// suite: "all" | "gradients" | "properties" | "bounds". Throws
/// std::invalid_argument for an unknown suite.
VerifyReport run_suite(const std::string& suite, std::uint64_t seed, std::size_t trials);

/// Configuration rendered as a scenario-file snippet.
std::string configuration_snippet(const Configuration& c);

}  // namespace navform::verify
