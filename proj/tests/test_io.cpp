#include <doctest.h>

#include <cmath>
#include <sstream>

#include "navform/report.hpp"
#include "navform/scenario_io.hpp"
#include "navform/sim.hpp"
#include "test_support.hpp"

using namespace navform;

TEST_CASE("scenario round trip") {
  const Scenario a = load_scenario_file(test_support::scenario_path("reference.yaml"));
  const Scenario b = parse_scenario(dump_scenario(a));
  CHECK(dump_scenario(b) == dump_scenario(a));
  REQUIRE(b.agents.size() == a.agents.size());
  for (std::size_t i = 0; i < a.agents.size(); ++i) CHECK(b.agents[i].q == a.agents[i].q);
  CHECK(b.params.sensing_radius == a.params.sensing_radius);
  CHECK(b.failures.outages.size() == a.failures.outages.size());
}

TEST_CASE("unknown keys are rejected") {
  const std::string good = R"(
name: tiny
agents:
  - {id: 1, q: [0, 0]}
  - {id: 2, q: [5, 0]}
formation_edges:
  - {pair: [1, 2], c: [-5, 0]}
params: {R_s: 20, delta_1: 3, delta_2: 2, k: 1, Gamma: 1}
integration: {dt: 0.01, t_final: 1, seed: 0}
)";
  CHECK_NOTHROW(parse_scenario(good));
  CHECK_THROWS_AS(parse_scenario(good + "colour: red\n"), ScenarioParseError);
  std::string typo = good;
  typo.replace(typo.find("Gamma"), 5, "Gama");
  CHECK_THROWS_AS(parse_scenario(typo), ScenarioParseError);
  CHECK_THROWS_AS(parse_scenario("agents: [1, 2"), ScenarioParseError);
}

TEST_CASE("trajectory csv round trip") {
  Scenario s = load_scenario_file(test_support::scenario_path("reference.yaml"));
  s.integration.t_final = 0.5;
  const auto r = Simulator(s).run();
  std::stringstream buf;
  write_trajectory_csv(buf, r.log, 10);
  const auto rows = read_trajectory_csv(buf);
  REQUIRE(rows.size() == 51 * 5);
  for (const auto& row : rows) {
    const auto step = static_cast<std::size_t>(std::lround(row.t / r.log.dt));
    const Vec2& q = r.log.position(step, row.agent - 1);
    CHECK(std::abs(row.q.x() - q.x()) <= 1e-11 * std::max(1.0, std::abs(q.x())));
    CHECK(std::abs(row.q.y() - q.y()) <= 1e-11 * std::max(1.0, std::abs(q.y())));
    CHECK(row.in_vf == r.log.vf(step, row.agent - 1));
  }
}

TEST_CASE("plots are byte identical across runs") {
  Scenario s = load_scenario_file(test_support::scenario_path("reference.yaml"));
  s.integration.t_final = 3.0;
  const auto a = Simulator(s).run();
  const auto b = Simulator(s).run();
  CHECK(trajectory_svg(s, a.log) == trajectory_svg(s, b.log));
  CHECK(distance_svg(s, a.log) == distance_svg(s, b.log));
  CHECK(summary_report(s, a) == summary_report(s, b));
}
