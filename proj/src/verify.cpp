#include "navform/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "navform/scenario_io.hpp"

namespace navform::verify {

namespace {

constexpr double kFdStep = 1e-6;
constexpr double kGradientTolerance = 1e-5;
// Keeps 0/0 out of the relative error when both gradients vanish.
constexpr double kGradientFloor = 1e-8;
constexpr double kSlack = 1e-9;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_int(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Vec2 random_direction(std::mt19937_64& rng) {
  const double theta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  return {std::cos(theta), std::sin(theta)};
}

double relative_error(const Vec2& analytic, const Vec2& numeric) {
  const double scale = std::max({analytic.norm(), numeric.norm(), kGradientFloor});
  return (analytic - numeric).norm() / scale;
}

// Gradient of a function of q_i with every other position held fixed.
Vec2 fd_wrt(const std::vector<Vec2>& positions, AgentIndex i,
            const std::function<double(std::span<const Vec2>)>& f) {
  std::vector<Vec2> work = positions;
  return finite_difference_gradient(
      [&](const Vec2& q) {
        work[i] = q;
        return f(work);
      },
      positions[i], kFdStep);
}

std::vector<Vec2> residuals(const Configuration& c) {
  std::vector<Vec2> r;
  const AgentIndex i = c.agent;
  for (AgentIndex j : c.formation.neighbors(i)) {
    r.push_back(c.positions[i] - c.positions[j] - c.formation.offset(i, j));
  }
  return r;
}

std::size_t collision_set_size(const Configuration& c) {
  const auto field = c.field();
  return field.collision_agents(c.agent, c.positions).size() +
         field.collision_obstacles(c.agent, c.positions).size();
}

// Distance from d to the nearest nonsmooth point of the factors.
double breakpoint_distance(double d, const Params& p, bool formation_pair, bool obstacle_or_agent) {
  double best = std::numeric_limits<double>::infinity();
  if (formation_pair) {
    best = std::min({best, std::abs(d - (p.sensing_radius - p.delta2)), std::abs(d - p.sensing_radius)});
  }
  if (obstacle_or_agent) best = std::min({best, std::abs(d - p.delta1), d});
  return best;
}

bool smooth_enough(const Configuration& c, double margin) {
  const std::size_t n = c.positions.size();
  for (AgentIndex a = 0; a < n; ++a) {
    for (AgentIndex b = a + 1; b < n; ++b) {
      const double d = pairwise_distance(c.positions[a], c.positions[b]);
      if (breakpoint_distance(d, c.params, c.formation.are_neighbors(a, b), true) < margin) return false;
    }
    for (const Vec2& o : c.obstacles.points) {
      if (breakpoint_distance(pairwise_distance(c.positions[a], o), c.params, false, true) < margin) return false;
    }
  }
  return true;
}

SuiteLine make_line(std::string name) {
  SuiteLine l;
  l.name = std::move(name);
  return l;
}

void record(SuiteLine& line, bool ok, double worst_candidate, const std::function<std::string()>& dump) {
  ++line.trials;
  line.worst = std::max(line.worst, worst_candidate);
  if (!ok) {
    if (line.failures == 0) line.counterexample = dump();
    ++line.failures;
  }
}

// Positive part of lhs - rhs; zero when the inequality holds.
double excess(const Inequality& q) { return std::max(0.0, q.lhs - q.rhs); }

}  // namespace

Vec2 finite_difference_gradient(const std::function<double(const Vec2&)>& f, const Vec2& q, double h) {
  Vec2 g;
  for (int k = 0; k < 2; ++k) {
    Vec2 plus = q, minus = q;
    plus[k] += h;
    minus[k] -= h;
    g[k] = (f(plus) - f(minus)) / (plus[k] - minus[k]);
  }
  return g;
}

bool holds_with_slack(double lhs, double rhs, double relative) {
  return lhs <= rhs + relative * std::abs(rhs) + 1e-12;
}

PropertyTerms property_terms(const Configuration& c) {
  const NavigationField field = c.field();
  const AgentIndex i = c.agent;
  PropertyTerms t;
  const double gamma_i = field.gamma(i, c.positions);
  const BetaEval beta_i = field.beta_wrt(i, i, c.positions);
  t.A = beta_i.beta * field.grad_gamma_wrt(i, i, c.positions);
  t.B = gamma_i * beta_i.grad;
  for (AgentIndex j = 0; j < c.positions.size(); ++j) {
    if (j == i) continue;
    const BetaEval beta_j = field.beta_wrt(j, i, c.positions);
    t.C += field.beta_wrt(j, j, c.positions).beta * field.grad_gamma_wrt(j, i, c.positions);
    t.D += field.gamma(j, c.positions) * beta_j.grad;
  }
  return t;
}

Inequality property1(const Configuration& c) {
  const NavigationField field = c.field();
  const double beta = field.beta_wrt(c.agent, c.agent, c.positions).beta;
  const double gamma = field.gamma(c.agent, c.positions);
  const double n = static_cast<double>(c.formation.neighbors(c.agent).size());
  Inequality q{property_terms(c).A.squaredNorm(), 4.0 * beta * beta * n * gamma};
  q.holds = holds_with_slack(q.lhs, q.rhs, kSlack);
  return q;
}

Inequality property2(const Configuration& c) {
  const double gamma = c.field().gamma(c.agent, c.positions);
  const double nf = static_cast<double>(c.formation.neighbors(c.agent).size());
  const double nc = static_cast<double>(collision_set_size(c));
  Inequality q{property_terms(c).B.norm(), gamma * (nf * 2.0 / c.params.delta2 + nc * 2.0 / c.params.delta1)};
  q.holds = holds_with_slack(q.lhs, q.rhs, kSlack);
  return q;
}

Inequality property3(const Configuration& c) {
  const double gamma = c.field().gamma(c.agent, c.positions);
  const double n = static_cast<double>(c.formation.neighbors(c.agent).size());
  Inequality q{property_terms(c).C.squaredNorm(), 4.0 * n * gamma};
  q.holds = holds_with_slack(q.lhs, q.rhs, kSlack);
  return q;
}

Inequality property4(const Configuration& c) {
  const NavigationField field = c.field();
  double sum = 0.0;
  for (AgentIndex j = 0; j < c.positions.size(); ++j) sum += field.gamma(j, c.positions);
  Inequality q{property_terms(c).D.norm(), (2.0 / c.params.delta2 + 2.0 / c.params.delta1) * sum};
  q.holds = holds_with_slack(q.lhs, q.rhs, kSlack);
  return q;
}

Inequality property5(const Configuration& c) {
  const double n = static_cast<double>(c.formation.neighbors(c.agent).size());
  const double cbar = c.formation.max_offset_norm(c.agent);
  const double r = c.params.sensing_radius + cbar;
  Inequality q{c.field().gamma(c.agent, c.positions), n * r * r};
  q.holds = holds_with_slack(q.lhs, q.rhs, kSlack);
  return q;
}

Inequality gamma_gradient_bound(const Configuration& c) {
  const NavigationField field = c.field();
  Inequality q{field.gamma(c.agent, c.positions) / c.params.sensing_radius,
               field.grad_gamma_wrt(c.agent, c.agent, c.positions).norm()};
  q.holds = holds_with_slack(q.lhs, q.rhs, kSlack);
  return q;
}

bool check_property1(const Configuration& c) { return property1(c).holds; }
bool check_property2(const Configuration& c) { return property2(c).holds; }
bool check_property3(const Configuration& c) { return property3(c).holds; }
bool check_property4(const Configuration& c) { return property4(c).holds; }
bool check_property5(const Configuration& c) { return property5(c).holds; }
bool gradient_norm_lower_bound(const Configuration& c) { return gamma_gradient_bound(c).holds; }

RhoConstants property_constants(const Configuration& c) {
  const double nf = static_cast<double>(c.formation.neighbors(c.agent).size());
  const double nc = static_cast<double>(collision_set_size(c));
  const double b = nf * 2.0 / c.params.delta2 + nc * 2.0 / c.params.delta1;
  const double d = 2.0 / c.params.delta2 + 2.0 / c.params.delta1;
  return {8.0 * nf, b * b, d * d, b * b, d * d};
}

DecreaseCheck decrease_condition(const Configuration& c, const RhoConstants& rho, double k) {
  const NavigationField field = c.field();
  const AgentIndex i = c.agent;
  DecreaseCheck out;

  out.beta_under = std::numeric_limits<double>::infinity();
  for (const auto& [a, b] : c.formation.pairs()) {
    const double prod = field.beta_wrt(a, a, c.positions).beta * field.beta_wrt(b, b, c.positions).beta;
    out.beta_under = std::min(out.beta_under, prod);
  }
  if (c.formation.pairs().empty()) out.beta_under = 0.0;

  double gamma_sum = 0.0;
  for (AgentIndex j = 0; j < c.positions.size(); ++j) gamma_sum += field.gamma(j, c.positions);
  const double gamma_i = field.gamma(i, c.positions);
  Vec2 s = Vec2::Zero();
  for (const Vec2& r : residuals(c)) s += r;

  const double rho1 = rho.c1 * gamma_i + rho.c2 * gamma_i * gamma_i + rho.c3 * gamma_sum * gamma_sum;
  const double rho2 = rho.c4 * gamma_i * gamma_i + rho.c5 * gamma_sum * gamma_sum;
  out.hypothesis = 4.0 * out.beta_under * s.squaredNorm() - rho1 / (2.0 * k) - rho2 / (2.0 * k * k);

  const PropertyTerms t = property_terms(c);
  const double a = t.A.norm(), b = t.B.norm(), cc = t.C.norm(), d = t.D.norm();
  out.conclusion = t.A.dot(t.C) - (b * cc + a * d) / k - b * d / (k * k);

  out.hypothesis_holds = out.hypothesis > 0.0;
  out.holds = !out.hypothesis_holds || out.conclusion > 0.0;
  return out;
}

bool check_decrease_condition(const Configuration& c, const RhoConstants& rho, double k) {
  return decrease_condition(c, rho, k).holds;
}

double recombination_gap(const Configuration& c) {
  const NavigationField field = c.field();
  const AgentIndex i = c.agent;
  const double k = c.params.k;

  const Vec2 own = field.grad_phi_wrt(i, i, c.positions);
  Vec2 total = Vec2::Zero();
  for (AgentIndex j = 0; j < c.positions.size(); ++j) total += field.grad_phi_wrt(j, i, c.positions);
  const double direct = own.dot(total);

  auto denominator = [&](AgentIndex j) {
    const double g = field.gamma(j, c.positions);
    const double b = field.beta_wrt(j, j, c.positions).beta;
    return std::pow(std::pow(g, k) + b, 1.0 / k + 1.0);
  };
  const PropertyTerms t = property_terms(c);
  const Vec2 own_rebuilt = (t.A - t.B / k) / denominator(i);
  Vec2 sum_rebuilt = own_rebuilt;
  for (AgentIndex j = 0; j < c.positions.size(); ++j) {
    if (j == i) continue;
    const double beta_j = field.beta_wrt(j, j, c.positions).beta;
    const Vec2 c_j = beta_j * field.grad_gamma_wrt(j, i, c.positions);
    const Vec2 d_j = field.gamma(j, c.positions) * field.beta_wrt(j, i, c.positions).grad;
    sum_rebuilt += (c_j - d_j / k) / denominator(j);
  }
  const double rebuilt = own_rebuilt.dot(sum_rebuilt);
  const double scale = std::max(std::abs(direct), std::abs(rebuilt));
  return scale == 0.0 ? 0.0 : std::abs(direct - rebuilt) / scale;
}

Configuration ConfigurationGenerator::draw() {
  Configuration c;
  const std::size_t n = uniform_int(rng_, 2, 5);
  Params& p = c.params;
  p.sensing_radius = uniform(rng_, 10.0, 30.0);
  p.delta1 = uniform(rng_, 0.2, 0.45) * p.sensing_radius;
  p.delta2 = uniform(rng_, 0.05, 0.25) * p.sensing_radius;
  p.k = uniform(rng_, 1.0, 4.0);
  p.gain = 1.0;

  std::vector<FormationEdge> edges;
  auto add_edge = [&](AgentIndex a, AgentIndex b) {
    const double len = uniform(rng_, p.delta1, p.sensing_radius - p.delta2);
    edges.push_back({a, b, len * random_direction(rng_)});
  };
  for (AgentIndex j = 1; j < n; ++j) add_edge(uniform_int(rng_, 0, j - 1), j);
  for (AgentIndex a = 0; a < n; ++a) {
    for (AgentIndex b = a + 1; b < n; ++b) {
      const bool present = std::any_of(edges.begin(), edges.end(), [&](const FormationEdge& e) {
        return (e.i == a && e.j == b) || (e.i == b && e.j == a);
      });
      if (!present && uniform(rng_, 0.0, 1.0) < 0.2) add_edge(a, b);
    }
  }
  c.formation = FormationSpec(n, std::move(edges));

  const double box = 3.0 * p.sensing_radius;
  for (std::size_t a = 0; a < n; ++a) c.positions.emplace_back(uniform(rng_, 0.0, box), uniform(rng_, 0.0, box));
  const std::size_t m = uniform_int(rng_, 0, 3);
  for (std::size_t o = 0; o < m; ++o) c.obstacles.points.emplace_back(uniform(rng_, 0.0, box), uniform(rng_, 0.0, box));
  c.agent = uniform_int(rng_, 0, n - 1);
  return c;
}

Configuration ConfigurationGenerator::next(Hypothesis h, double margin) {
  for (;;) {
    Configuration c = draw();
    if (h == Hypothesis::kAny) return c;
    const AgentIndex i = c.agent;
    if (h == Hypothesis::kConnected) {
      const bool connected = std::all_of(c.formation.neighbors(i).begin(), c.formation.neighbors(i).end(),
                                         [&](AgentIndex j) {
                                           return pairwise_distance(c.positions[i], c.positions[j]) <
                                                  c.params.sensing_radius;
                                         });
      if (connected) return c;
      continue;
    }
    // kSmooth: away from breakpoints, constraint strictly between 0 and 1, and
    // phi_i below saturation so central differences resolve its gradient.
    if (!smooth_enough(c, margin)) continue;
    const NavigationField field = c.field();
    const double beta = field.beta_wrt(i, i, c.positions).beta;
    if (!(beta > 0.0 && beta < 1.0)) continue;
    const double gamma = field.gamma(i, c.positions);
    if (!(gamma > 0.0) || eval_phi(gamma, beta, c.params.k) > 0.99) continue;
    return c;
  }
}

Configuration single_neighbor_configuration() {
  Configuration c;
  c.params = Params{};
  c.params.sensing_radius = 20.0;
  c.params.delta1 = 8.0;
  c.params.delta2 = 2.0;
  c.params.k = 1.0;
  // q_1 - q_2 - c_12 = (3, 4); d_12 = |(3, 14)| < R_s - delta_2 and > delta_1.
  c.positions = {Vec2(3.0, 14.0), Vec2(0.0, 0.0)};
  c.formation = FormationSpec(2, {{0, 1, Vec2(0.0, 10.0)}});
  c.agent = 0;
  return c;
}

bool VerifyReport::ok() const {
  return std::all_of(lines.begin(), lines.end(), [](const SuiteLine& l) { return l.failures == 0; });
}

std::string VerifyReport::text() const {
  std::ostringstream out;
  out << fmt::format("{:<36} {:>7} {:>9} {:>14}  {}\n", "check", "trials", "failures", "worst", "verdict");
  for (const auto& l : lines) {
    out << fmt::format("{:<36} {:>7} {:>9} {:>14.6e}  {}\n", l.name, l.trials, l.failures, l.worst,
                       l.failures == 0 ? "PASS" : "FAIL");
  }
  for (const auto& l : lines) {
    if (l.failures == 0) continue;
    out << "\n# first counterexample for " << l.name << "\n" << l.counterexample;
  }
  return out.str();
}

std::string configuration_snippet(const Configuration& c) {
  Scenario s;
  s.name = fmt::format("counterexample (agent under test: {})", c.agent + 1);
  for (AgentIndex i = 0; i < c.positions.size(); ++i) s.agents.push_back({i, c.positions[i]});
  s.formation = c.formation;
  s.obstacles = c.obstacles;
  s.params = c.params;
  s.integration.t_final = 1.0;
  return dump_scenario(s);
}

VerifyReport gradient_suite(std::uint64_t seed, std::size_t trials) {
  VerifyReport report;
  ConfigurationGenerator gen(seed);
  auto& rng = gen.rng();
  const double margin = 10.0 * kFdStep;

  SuiteLine gamma_line = make_line("grad_gamma");
  for (std::size_t t = 0; t < trials; ++t) {
    const Configuration c = gen.next(Hypothesis::kAny);
    const NavigationField field = c.field();
    const Vec2 analytic = field.grad_gamma_wrt(c.agent, c.agent, c.positions);
    const Vec2 numeric = fd_wrt(c.positions, c.agent, [&](std::span<const Vec2> q) { return field.gamma(c.agent, q); });
    const double err = relative_error(analytic, numeric);
    record(gamma_line, err < kGradientTolerance, err, [&] { return configuration_snippet(c); });
  }
  report.lines.push_back(gamma_line);

  SuiteLine b_line = make_line("grad_b");
  for (std::size_t t = 0; t < trials; ++t) {
    const double rs = uniform(rng, 10.0, 30.0);
    const double d2 = uniform(rng, 0.05, 0.25) * rs;
    const double d = uniform(rng, rs - d2 + margin, rs - margin);
    const Vec2 qj(uniform(rng, -rs, rs), uniform(rng, -rs, rs));
    const Vec2 qi = qj + d * random_direction(rng);
    const Vec2 analytic = grad_b(qi, qj, rs, d2);
    const Vec2 numeric =
        finite_difference_gradient([&](const Vec2& q) { return eval_b((q - qj).norm(), rs, d2); }, qi, kFdStep);
    const double err = relative_error(analytic, numeric);
    record(b_line, err < kGradientTolerance, err,
           [&] { return fmt::format("R_s: {:.12g}\ndelta_2: {:.12g}\nd: {:.12g}\n", rs, d2, d); });
  }
  report.lines.push_back(b_line);

  SuiteLine bb_line = make_line("grad_B");
  for (std::size_t t = 0; t < trials; ++t) {
    const double d1 = uniform(rng, 2.0, 12.0);
    const double d = uniform(rng, margin, d1 - margin);
    const Vec2 qk(uniform(rng, -d1, d1), uniform(rng, -d1, d1));
    const Vec2 qi = qk + d * random_direction(rng);
    const Vec2 analytic = grad_B(qi, qk, d1);
    const Vec2 numeric =
        finite_difference_gradient([&](const Vec2& q) { return eval_B((q - qk).norm(), d1); }, qi, kFdStep);
    const double err = relative_error(analytic, numeric);
    record(bb_line, err < kGradientTolerance, err,
           [&] { return fmt::format("delta_1: {:.12g}\nd: {:.12g}\n", d1, d); });
  }
  report.lines.push_back(bb_line);

  SuiteLine beta_line = make_line("grad_beta");
  SuiteLine phi_line = make_line("grad_phi");
  SuiteLine cross_line = make_line("grad_phi_cross");
  for (std::size_t t = 0; t < trials; ++t) {
    const Configuration c = gen.next(Hypothesis::kSmooth, margin);
    const NavigationField field = c.field();
    const AgentIndex i = c.agent;
    {
      const Vec2 analytic = field.beta_wrt(i, i, c.positions).grad;
      const Vec2 numeric = fd_wrt(c.positions, i, [&](std::span<const Vec2> q) { return field.beta_wrt(i, i, q).beta; });
      const double err = relative_error(analytic, numeric);
      record(beta_line, err < kGradientTolerance, err, [&] { return configuration_snippet(c); });
    }
    {
      const Vec2 analytic = field.grad_phi_wrt(i, i, c.positions);
      const Vec2 numeric = fd_wrt(c.positions, i, [&](std::span<const Vec2> q) { return field.phi(i, q); });
      const double err = relative_error(analytic, numeric);
      record(phi_line, err < kGradientTolerance, err, [&] { return configuration_snippet(c); });
    }
    // d phi_j / d q_i for another agent j, as used by the Lyapunov sum. Same
    // non-saturation filter as for agent i.
    for (AgentIndex step = 1; step < c.positions.size(); ++step) {
      const AgentIndex j = (i + step) % c.positions.size();
      const double beta_j = field.beta_wrt(j, j, c.positions).beta;
      if (!(beta_j > 0.0) || field.phi(j, c.positions) > 0.99) continue;
      const Vec2 analytic = field.grad_phi_wrt(j, i, c.positions);
      const Vec2 numeric = fd_wrt(c.positions, i, [&](std::span<const Vec2> q) { return field.phi(j, q); });
      const double err = relative_error(analytic, numeric);
      record(cross_line, err < kGradientTolerance, err, [&] { return configuration_snippet(c); });
      break;
    }
  }
  report.lines.push_back(beta_line);
  report.lines.push_back(phi_line);
  report.lines.push_back(cross_line);
  return report;
}

VerifyReport property_suite(std::uint64_t seed, std::size_t trials) {
  VerifyReport report;
  ConfigurationGenerator gen(seed);
  using Check = Inequality (*)(const Configuration&);
  struct Item {
    const char* name;
    Check check;
    Hypothesis hypothesis;
  };
  const Item items[] = {
      {"property1", &property1, Hypothesis::kAny},
      {"property2", &property2, Hypothesis::kAny},
      {"property3", &property3, Hypothesis::kAny},
      {"property4", &property4, Hypothesis::kAny},
      {"property5", &property5, Hypothesis::kConnected},
      {"gamma_gradient_bound", &gamma_gradient_bound, Hypothesis::kConnected},
  };
  for (const Item& item : items) {
    SuiteLine line = make_line(item.name);
    for (std::size_t t = 0; t < trials; ++t) {
      const Configuration c = gen.next(item.hypothesis);
      const Inequality q = item.check(c);
      record(line, q.holds, excess(q), [&] {
        return fmt::format("# lhs = {:.12g}, rhs = {:.12g}\n", q.lhs, q.rhs) + configuration_snippet(c);
      });
    }
    report.lines.push_back(line);
  }

  // Cauchy-Schwarz is tight with a single neighbor.
  SuiteLine tight = make_line("property1_equality");
  const Configuration single = single_neighbor_configuration();
  const Inequality q = property1(single);
  const double gap = std::abs(q.lhs - q.rhs) / std::max(std::abs(q.rhs), 1e-300);
  record(tight, gap <= 1e-9, gap, [&] { return configuration_snippet(single); });
  report.lines.push_back(tight);
  return report;
}

VerifyReport bounds_suite(std::uint64_t seed, std::size_t trials) {
  VerifyReport report;
  ConfigurationGenerator gen(seed);

  SuiteLine recombination = make_line("abcd_recombination");
  for (std::size_t t = 0; t < trials; ++t) {
    const Configuration c = gen.next(Hypothesis::kSmooth, 10.0 * kFdStep);
    const double gap = recombination_gap(c);
    record(recombination, gap < 1e-9, gap, [&] { return configuration_snippet(c); });
  }
  report.lines.push_back(recombination);

  SuiteLine decrease = make_line("decrease_implication");
  std::size_t active = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    const Configuration c = gen.next(Hypothesis::kConnected);
    // Large gains make the hypothesis reachable.
    const double k = std::pow(10.0, uniform(gen.rng(), 0.0, 4.0));
    const DecreaseCheck d = decrease_condition(c, property_constants(c), k);
    if (d.hypothesis_holds) ++active;
    record(decrease, d.holds, d.hypothesis_holds ? std::max(0.0, -d.conclusion) : 0.0, [&] {
      return fmt::format("# k = {:.12g}, hypothesis = {:.12g}, conclusion = {:.12g}, beta_under = {:.12g}\n", k,
                         d.hypothesis, d.conclusion, d.beta_under) +
             configuration_snippet(c);
    });
  }
  decrease.name += fmt::format(" ({} active)", active);
  report.lines.push_back(decrease);
  return report;
}

VerifyReport run_suite(const std::string& suite, std::uint64_t seed, std::size_t trials) {
  if (suite == "gradients") return gradient_suite(seed, trials);
  if (suite == "properties") return property_suite(seed, trials);
  if (suite == "bounds") return bounds_suite(seed, trials);
  if (suite == "all") {
    VerifyReport all;
    for (auto* fn : {&gradient_suite, &property_suite, &bounds_suite}) {
      auto part = fn(seed, trials);
      all.lines.insert(all.lines.end(), part.lines.begin(), part.lines.end());
    }
    return all;
  }
  throw std::invalid_argument(fmt::format("unknown verify suite '{}'", suite));
}

}  // namespace navform::verify
