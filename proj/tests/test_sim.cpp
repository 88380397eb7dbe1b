#include <doctest.h>

#include <cmath>

#include "navform/scenario_io.hpp"
#include "navform/sim.hpp"
#include "test_support.hpp"

using namespace navform;

namespace {

Scenario triangle() {
  Scenario s;
  s.name = "triangle";
  s.agents = {{0, Vec2(0, 0)}, {1, Vec2(10, 0)}, {2, Vec2(5, 9)}};
  s.formation = FormationSpec(3, {{0, 1, Vec2(-10, 0)}, {1, 2, Vec2(5, -9)}});
  s.params.delta1 = 4;
  s.integration.t_final = 0.5;
  return s;
}

// Log with two agents at the given per-step positions.
TrajectoryLog two_agent_log(const std::vector<std::pair<Vec2, Vec2>>& steps) {
  TrajectoryLog log;
  log.agent_count = 2;
  log.dt = 0.1;
  const ActiveSets active{{true, true}};
  const std::vector<Vec2> u(2, Vec2::Zero());
  const std::vector<double> zeros(2, 0.0);
  double t = 0.0;
  for (const auto& [a, b] : steps) {
    const std::vector<Vec2> q{a, b};
    log.append(t, q, u, active, zeros, zeros, 0.0);
    t += 0.1;
  }
  return log;
}

}  // namespace

TEST_CASE("ultimate bound") {
  FormationSpec f(2, {{0, 1, Vec2(1, 0)}});
  Params p;
  const auto zero = compute_bound(p, f, 0.0, 0.0, 1.0);
  CHECK(zero.c_max == 0.0);
  CHECK(zero.ultimate_error == 0.0);
  const auto r = compute_bound(p, f, 2.0, 0.0, 1.0);
  CHECK(r.c_max == doctest::Approx(20.0));
  CHECK(r.n_under >= 1);
  CHECK(r.ultimate_error == doctest::Approx(std::sqrt(20.0 / static_cast<double>(r.n_under))));
  CHECK_THROWS_AS(compute_bound(p, f, 1.0, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("lyapunov value") {
  Scenario s = triangle();
  NavigationField field(s.formation, s.obstacles, s.params);
  const std::vector<Vec2> exact{Vec2(0, 0), Vec2(10, 0), Vec2(5, 9)};
  CHECK(lyapunov_value(exact, field) == 0.0);

  NavigationField blocked(s.formation, ObstacleSet{{Vec2(5, 9)}}, s.params);
  const std::vector<Vec2> off{Vec2(0, 1), Vec2(10, 1), Vec2(5, 9)};
  double others = 0.0;
  for (AgentIndex i = 0; i < 2; ++i) others += blocked.phi(i, off);
  CHECK(blocked.phi(2, off) == 1.0);
  CHECK(lyapunov_value(off, blocked) == doctest::Approx(others + 1.0));
}

TEST_CASE("one step dynamics") {
  Scenario s = triangle();
  Simulator sim(s);
  const std::vector<Vec2> exact{Vec2(0, 0), Vec2(10, 0), Vec2(5, 9)};

  SUBCASE("all agents in V_u stay put") {
    const std::vector<Vec2> q{Vec2(0, 1), Vec2(11, 0), Vec2(5, 8)};
    const auto next = sim.step(q, SensingGraph(3));
    for (AgentIndex i = 0; i < 3; ++i) CHECK(next[i] == q[i]);
  }
  SUBCASE("exact formation is a fixed point") {
    SensingGraph g(3);
    g.set(0, 1, true);
    g.set(1, 2, true);
    g.set(0, 2, true);
    const auto next = sim.step(exact, g);
    for (AgentIndex i = 0; i < 3; ++i) CHECK((next[i] - exact[i]).norm() == 0.0);
  }
  SUBCASE("lone mover reduces its residual") {
    // Link (2,3) is down, so agents 2 and 3 hold still while agent 1 moves.
    SensingGraph g(3);
    g.set(0, 1, true);
    g.set(0, 2, true);
    const std::vector<Vec2> q{Vec2(0.3, -0.2), Vec2(10, 0), Vec2(5, 9)};
    const auto next = sim.step(q, g);
    CHECK(next[1] == q[1]);
    CHECK(next[2] == q[2]);
    const double before = (q[0] - q[1] - Vec2(-10, 0)).norm();
    const double after = (next[0] - next[1] - Vec2(-10, 0)).norm();
    CHECK(after < before);
  }
}

TEST_CASE("fixed point over a whole run") {
  Scenario s = triangle();
  s.agents = {{0, Vec2(0, 0)}, {1, Vec2(10, 0)}, {2, Vec2(5, 9)}};
  const auto r = Simulator(s).run();
  for (std::size_t step = 0; step < r.log.steps(); ++step) {
    for (AgentIndex i = 0; i < 3; ++i) CHECK((r.log.position(step, i) - s.agents[i].q).norm() <= 1e-12);
  }
}

TEST_CASE("log is uniform in time") {
  const auto r = Simulator(triangle()).run();
  REQUIRE(r.log.steps() == 501);
  for (std::size_t k = 1; k < r.log.steps(); ++k) {
    CHECK(r.log.times[k] > r.log.times[k - 1]);
    CHECK(r.log.times[k] == doctest::Approx(static_cast<double>(k) * 1e-3));
  }
}

TEST_CASE("runs are deterministic") {
  Scenario s = triangle();
  s.failures.mode = LinkFailureModel::Mode::kRandom;
  s.failures.random = {0.4, 0.05, 0.5};
  s.integration.seed = 11;
  s.integration.t_final = 2.0;
  const auto a = Simulator(s).run();
  const auto b = Simulator(s).run();
  REQUIRE(a.log.positions.size() == b.log.positions.size());
  for (std::size_t k = 0; k < a.log.positions.size(); ++k) CHECK(a.log.positions[k] == b.log.positions[k]);
  CHECK(a.log.V == b.log.V);
}

TEST_CASE("a pair cut off from each other holds its distance") {
  const Scenario s = load_scenario_file(test_support::scenario_path("pair_outage_stasis.yaml"));
  const auto r = Simulator(s).run();
  const auto d = [&](std::size_t step) { return r.log.pair_distance(step, 0, 1); };
  const double held = d(1000);
  for (std::size_t step = 1000; step <= 2000; ++step) CHECK(std::abs(d(step) - held) <= 1e-9);
  CHECK(std::abs(d(500) - held) > 1e-6);
  CHECK(std::abs(d(2500) - held) > 1e-6);
}

TEST_CASE("everyone frozen") {
  Scenario s = triangle();
  s.agents = {{0, Vec2(0, 1)}, {1, Vec2(11, 0)}, {2, Vec2(5, 8)}};
  s.failures.outages = {{0, 1, 0.0, 1.0}, {1, 2, 0.0, 1.0}};
  const auto r = Simulator(s).run();
  for (std::size_t step = 0; step < r.log.steps(); ++step) {
    for (AgentIndex i = 0; i < 3; ++i) CHECK(r.log.position(step, i) == s.agents[i].q);
    CHECK(r.log.V[step] == r.log.V[0]);
  }
  for (const auto& v : r.verdicts) CHECK(v.passed);
}

TEST_CASE("connectivity monitor") {
  FormationSpec f(2, {{0, 1, Vec2(5, 0)}});
  const auto ok = two_agent_log({{Vec2(0, 0), Vec2(10, 0)}, {Vec2(0, 0), Vec2(19.9, 0)}});
  CHECK(monitor_connectivity(ok, f, 20.0).passed);
  const auto bad = two_agent_log({{Vec2(0, 0), Vec2(10, 0)}, {Vec2(0, 0), Vec2(20, 0)}});
  const auto v = monitor_connectivity(bad, f, 20.0);
  CHECK_FALSE(v.passed);
  REQUIRE(v.t.has_value());
  CHECK(*v.t == doctest::Approx(0.1));
  CHECK(v.i == 1);
  CHECK(v.j == 2);
}

TEST_CASE("collision monitor") {
  const double eps = 1e-3;
  const auto hit = two_agent_log({{Vec2(0, 0), Vec2(1, 0)}, {Vec2(0, 0), Vec2(0, 0)}});
  CHECK_FALSE(monitor_collision(hit, {}, eps).passed);
  const auto graze = two_agent_log({{Vec2(0, 0), Vec2(5, 0)}});
  CHECK(monitor_collision(graze, ObstacleSet{{Vec2(0, 2 * eps)}}, eps).passed);
  const auto v = monitor_collision(graze, ObstacleSet{{Vec2(0, 0.5 * eps)}}, eps);
  CHECK_FALSE(v.passed);
  CHECK(v.j == 0);
}

TEST_CASE("lyapunov monitor") {
  FormationSpec f(2, {{0, 1, Vec2(5, 0)}});
  TrajectoryLog log;
  log.agent_count = 2;
  log.dt = 0.1;
  const std::vector<Vec2> q{Vec2(0, 0), Vec2(1, 0)};
  const std::vector<Vec2> u(2, Vec2::Zero());
  const std::vector<double> g{50.0, 50.0}, phi{0.5, 0.5};
  const ActiveSets vf{{true, true}};
  const ActiveSets frozen{{false, false}};

  SUBCASE("decrease above the threshold") {
    log.append(0.0, q, u, vf, g, phi, 3.0);
    log.append(0.1, q, u, vf, g, phi, 2.0);
    log.append(0.2, q, u, vf, g, phi, 1.0);
    CHECK(monitor_lyapunov(log, f, 10.0, 1e-6, 1e-2).passed);
  }
  SUBCASE("rise above the threshold fails") {
    log.append(0.0, q, u, vf, g, phi, 1.0);
    log.append(0.1, q, u, vf, g, phi, 1.5);
    CHECK_FALSE(monitor_lyapunov(log, f, 10.0, 1e-6, 1e-2).passed);
  }
  SUBCASE("rise below the threshold is not checked") {
    log.append(0.0, q, u, vf, g, phi, 1.0);
    log.append(0.1, q, u, vf, g, phi, 1.5);
    CHECK(monitor_lyapunov(log, f, 100.0, 1e-6, 1e-2).passed);
  }
  SUBCASE("frozen steps must keep V exactly") {
    log.append(0.0, q, u, frozen, g, phi, 1.0);
    log.append(0.1, q, u, frozen, g, phi, 1.0 - 1e-15);
    CHECK_FALSE(monitor_lyapunov(log, f, 10.0, 1e-6, 1e-2).passed);
  }
}

TEST_CASE("abort policy stops at the first collision") {
  const Scenario s = load_scenario_file(test_support::scenario_path("collide.yaml"));
  RunOptions opt;
  opt.on_violation = ViolationPolicy::kAbort;
  const auto r = Simulator(s).run(opt);
  CHECK(r.aborted);
  CHECK_FALSE(r.all_passed());
  CHECK(r.log.times.back() < s.integration.t_final);

  const auto flagged = Simulator(s).run();
  CHECK_FALSE(flagged.aborted);
  CHECK_FALSE(flagged.all_passed());
  CHECK(flagged.log.times.back() == doctest::Approx(s.integration.t_final));
}
