#include <doctest.h>

#include "navform/switching.hpp"

using namespace navform;

namespace {

ActiveSets sets(std::initializer_list<bool> v) { return ActiveSets{std::vector<bool>(v)}; }

}  // namespace

TEST_CASE("sensing graph from range and outages") {
  const std::vector<Vec2> q{Vec2(0, 0), Vec2(10, 0), Vec2(0, 21)};
  LinkFailureModel none;
  const auto idle = FailureSchedule::realize(none, 3, 0.01, 1.0, 0);
  const SensingGraph g = sensing_graph_at(0, q, idle, 20.0);
  CHECK(g.up(0, 1));
  CHECK(g.up(1, 0));
  CHECK_FALSE(g.up(0, 2));  // d = 21 > R_s

  LinkFailureModel m;
  m.outages.push_back({0, 1, 0.2, 0.5});
  const auto sched = FailureSchedule::realize(m, 3, 0.01, 1.0, 0);
  CHECK(sensing_graph_at(10, q, sched, 20.0).up(0, 1));
  CHECK_FALSE(sensing_graph_at(20, q, sched, 20.0).up(0, 1));
  CHECK_FALSE(sensing_graph_at(20, q, sched, 20.0).up(1, 0));
  CHECK_FALSE(sensing_graph_at(49, q, sched, 20.0).up(0, 1));
  CHECK(sensing_graph_at(50, q, sched, 20.0).up(0, 1));
  CHECK(sched.switch_times().size() == 2);
}

TEST_CASE("all links up gives the complete graph") {
  const std::vector<Vec2> q{Vec2(0, 0), Vec2(3, 0), Vec2(0, 4), Vec2(5, 5)};
  const auto sched = FailureSchedule::realize({}, 4, 0.01, 1.0, 0);
  const SensingGraph g = sensing_graph_at(0, q, sched, 20.0);
  for (AgentIndex i = 0; i < 4; ++i) CHECK(g.neighbors(i).size() == 3);
}

TEST_CASE("switch instants snap to the step grid") {
  CHECK(snap_to_step(0.2004, 0.001) == 200);
  CHECK(snap_to_step(0.2006, 0.001) == 201);
  LinkFailureModel m;
  m.outages.push_back({0, 1, 0.1234, 0.5});
  const auto sched = FailureSchedule::realize(m, 2, 0.01, 1.0, 0);
  CHECK(sched.switch_times().front() == doctest::Approx(0.12));
}

TEST_CASE("random schedules respect the dwell window") {
  LinkFailureModel m;
  m.mode = LinkFailureModel::Mode::kRandom;
  m.random = {0.4, 0.05, 0.5};
  const double dt = 1e-3;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sched = FailureSchedule::realize(m, 5, dt, 30.0, seed);
    const auto& e = sched.epochs();
    REQUIRE(e.size() > 10);
    // the last epoch is cut by the horizon
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
      const double gap = static_cast<double>(e[k].end_step - e[k].start_step) * dt;
      CHECK(gap > 0.05);
      CHECK(gap < 0.5);
      CHECK(e[k].end_step == e[k + 1].start_step);
    }
  }
}

TEST_CASE("random schedules are reproducible per seed") {
  LinkFailureModel m;
  m.mode = LinkFailureModel::Mode::kRandom;
  m.random = {0.3, 0.05, 0.5};
  const auto a = FailureSchedule::realize(m, 4, 1e-3, 10.0, 9);
  const auto b = FailureSchedule::realize(m, 4, 1e-3, 10.0, 9);
  const auto c = FailureSchedule::realize(m, 4, 1e-3, 10.0, 10);
  REQUIRE(a.epochs().size() == b.epochs().size());
  for (std::size_t k = 0; k < a.epochs().size(); ++k) {
    CHECK(a.epochs()[k].start_step == b.epochs()[k].start_step);
    CHECK(a.epochs()[k].failed == b.epochs()[k].failed);
  }
  CHECK(a.switch_times() != c.switch_times());
}

TEST_CASE("active partition") {
  FormationSpec f(4, {{0, 1, Vec2(1, 0)}, {1, 2, Vec2(1, 0)}, {2, 3, Vec2(0, 1)}});
  SensingGraph g(4);
  for (AgentIndex i = 0; i < 4; ++i)
    for (AgentIndex j = i + 1; j < 4; ++j) g.set(i, j, true);

  SUBCASE("all up") {
    const auto a = partition_active(g, f);
    CHECK(a.vf().size() == 4);
    CHECK(a.vu().empty());
  }
  SUBCASE("failed formation link sends both ends to V_u") {
    g.set(1, 2, false);
    const auto a = partition_active(g, f);
    CHECK_FALSE(a.contains_vf(1));
    CHECK_FALSE(a.contains_vf(2));
    CHECK(a.contains_vf(0));
    CHECK(a.contains_vf(3));
    CHECK(a.vf().size() + a.vu().size() == 4);
  }
  SUBCASE("failed non-formation link changes nothing") {
    g.set(0, 3, false);
    CHECK(partition_active(g, f).vf().size() == 4);
  }
}

TEST_CASE("control input") {
  NavigationEval e;
  e.grad_phi = Vec2(0.1, -0.2);
  CHECK(control_input(0, sets({true}), e, 10.0).isApprox(Vec2(-1, 2)));
  CHECK(control_input(0, sets({false}), e, 10.0) == Vec2::Zero());
  e.grad_phi = Vec2::Zero();
  CHECK(control_input(0, sets({true}), e, 10.0) == Vec2::Zero());
}

TEST_CASE("coverage over a window") {
  const std::vector<ActiveSets> all{sets({true, true, true})};
  CHECK(coverage_satisfied(all, 3));
  const std::vector<ActiveSets> miss{sets({true, true, false}), sets({true, true, false})};
  CHECK_FALSE(coverage_satisfied(miss, 3));
  const std::vector<ActiveSets> once{sets({true, true, false}), sets({false, false, true}), sets({true, true, false})};
  CHECK(coverage_satisfied(once, 3));

  FormationSpec f(3, {{0, 1, Vec2(1, 0)}, {1, 2, Vec2(1, 0)}});
  const std::vector<ActiveSets> mid{sets({false, true, false})};
  CHECK(neighborhood_coverage_satisfied(mid, f));
  const std::vector<ActiveSets> end{sets({true, false, false})};
  CHECK_FALSE(neighborhood_coverage_satisfied(end, f));
}
