#include <doctest.h>

#include <algorithm>

#include "navform/model.hpp"
#include "navform/scenario_io.hpp"
#include "test_support.hpp"

using namespace navform;

namespace {

bool has(const std::vector<Violation>& v, ViolationKind kind, std::size_t i = 0, std::size_t j = 0) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) {
    return x.kind == kind && (i == 0 || (x.i == i && x.j == j));
  });
}

}  // namespace

TEST_CASE("formation edges and offsets") {
  FormationSpec f(3, {{0, 1, Vec2(0, 5)}, {2, 1, Vec2(1, 1)}});
  CHECK(f.are_neighbors(0, 1));
  CHECK(f.are_neighbors(1, 0));
  CHECK_FALSE(f.are_neighbors(0, 2));
  CHECK(f.offset(1, 0) == Vec2(0, -5));
  CHECK(f.offset(1, 2) == Vec2(-1, -1));
  CHECK_THROWS_AS(f.offset(0, 2), std::out_of_range);
  CHECK(f.neighbors(1) == std::vector<AgentIndex>{0, 2});
  CHECK(f.pairs().size() == 2);
  CHECK(f.min_degree() == 1);
  CHECK(f.max_offset_norm(1) == doctest::Approx(5.0));
  CHECK(f.antisymmetry_conflicts().empty());
  for (AgentIndex i = 0; i < 3; ++i) {
    for (AgentIndex j : f.neighbors(i)) CHECK(f.are_neighbors(j, i));
  }
}

TEST_CASE("pairwise distance") {
  CHECK(pairwise_distance(Vec2(0, 0), Vec2(3, 4)) == 5.0);
  CHECK(pairwise_distance(Vec2(1.5, -2), Vec2(1.5, -2)) == 0.0);
}

TEST_CASE("reference scenario validates") {
  const Scenario s = load_scenario_file(test_support::scenario_path("reference.yaml"));
  CHECK(validate_scenario(s).empty());
  CHECK(s.agent_count() == 5);
  CHECK(s.obstacles.points.size() == 3);
}

TEST_CASE("validation reports each assumption") {
  const Scenario base = load_scenario_file(test_support::scenario_path("reference.yaml"));

  SUBCASE("antisymmetry") {
    Scenario s = base;
    auto edges = s.formation.declared_edges();
    edges.push_back({1, 0, Vec2(0, 5)});
    s.formation = FormationSpec(5, edges);
    CHECK(has(validate_scenario(s), ViolationKind::kAntisymmetry, 1, 2));
  }
  SUBCASE("short offset with the lower bound enforced") {
    Scenario s = base;
    s.params.enforce_min_offset = true;
    auto edges = s.formation.declared_edges();
    edges[0].offset = Vec2(0, 3);
    s.formation = FormationSpec(5, edges);
    CHECK(has(validate_scenario(s), ViolationKind::kAchievability, 1, 2));
  }
  SUBCASE("offset beyond R_s - delta_2") {
    Scenario s = base;
    auto edges = s.formation.declared_edges();
    edges[1].offset = Vec2(19, 0);
    s.formation = FormationSpec(5, edges);
    CHECK(has(validate_scenario(s), ViolationKind::kAchievability, 2, 3));
  }
  SUBCASE("initial neighbor out of range") {
    Scenario s = base;
    s.agents[0].q = Vec2(-30, 9);
    CHECK(has(validate_scenario(s), ViolationKind::kInitialContainment, 1, 2));
  }
  SUBCASE("co-linear agents and goals") {
    Scenario s;
    s.params = base.params;
    s.params.enforce_min_offset = false;
    s.agents = {{0, Vec2(0, 0)}, {1, Vec2(5, 0)}, {2, Vec2(10, 0)}};
    s.formation = FormationSpec(3, {{0, 1, Vec2(-5, 0)}, {1, 2, Vec2(-5, 0)}});
    CHECK(has(validate_scenario(s), ViolationKind::kColinear));
  }
  SUBCASE("coincident agents") {
    Scenario s = base;
    s.agents[4].q = s.agents[3].q;
    CHECK(has(validate_scenario(s), ViolationKind::kCoincidentAgents, 4, 5));
  }
  SUBCASE("workspace box") {
    Scenario s = base;
    s.workspace = Workspace{Vec2(-5, -5), Vec2(5, 5)};
    CHECK(has(validate_scenario(s), ViolationKind::kOutsideWorkspace));
  }
  SUBCASE("parameter ranges") {
    Scenario s = base;
    s.params.k = 0.5;
    s.params.delta1 = 25;
    const auto v = validate_scenario(s);
    CHECK(std::count_if(v.begin(), v.end(), [](const Violation& x) {
            return x.kind == ViolationKind::kParameterRange;
          }) >= 2);
  }
  SUBCASE("random failures with an empty dwell window") {
    Scenario s = base;
    s.failures.mode = LinkFailureModel::Mode::kRandom;
    s.failures.random = {0.2, 0.3, 0.3};
    CHECK(has(validate_scenario(s), ViolationKind::kFailureModel));
  }
  SUBCASE("pure function") {
    Scenario s = base;
    s.agents[0].q = Vec2(-30, 9);
    const auto a = validate_scenario(s);
    const auto b = validate_scenario(s);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].message == b[k].message);
  }
}
