#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "navform/navigation.hpp"
#include "navform/verify.hpp"

using namespace navform;

namespace {

Vec2 fd(const std::function<double(const Vec2&)>& f, const Vec2& q) {
  return verify::finite_difference_gradient(f, q, 1e-6);
}

double rel(const Vec2& a, const Vec2& b) { return (a - b).norm() / std::max({a.norm(), b.norm(), 1e-12}); }

}  // namespace

TEST_CASE("gamma sums squared residuals") {
  const Vec2 qi(0, 0);
  SUBCASE("exact formation") {
    std::vector<NeighborTerm> n{{Vec2(1, 2), Vec2(-1, -2)}};
    CHECK(eval_gamma(qi, n) == 0.0);
    CHECK(grad_gamma(qi, n) == Vec2::Zero());
  }
  SUBCASE("residual (3,4)") {
    std::vector<NeighborTerm> n{{Vec2(0, 0), Vec2(-3, -4)}};
    CHECK(eval_gamma(qi, n) == doctest::Approx(25.0));
    CHECK(grad_gamma(qi, n).isApprox(Vec2(6, 8)));
  }
  SUBCASE("two residuals") {
    std::vector<NeighborTerm> n{{Vec2(0, 0), Vec2(-1, 0)}, {Vec2(0, 0), Vec2(0, -2)}};
    CHECK(eval_gamma(qi, n) == doctest::Approx(5.0));
  }
}

TEST_CASE("connectivity factor b") {
  const double rs = 20, d2 = 2;
  CHECK(eval_b(rs - d2, rs, d2) == 1.0);
  CHECK(eval_b(rs, rs, d2) == 0.0);
  CHECK(eval_b(rs - d2 / 2, rs, d2) == doctest::Approx(0.75));
  CHECK(eval_b(5, rs, d2) == 1.0);
  CHECK(eval_b(rs + 1, rs, d2) == 0.0);

  CHECK(grad_b(Vec2(0, 0), Vec2(10, 0), rs, d2) == Vec2::Zero());
  CHECK(grad_b(Vec2(0, 0), Vec2(rs - d2, 0), rs, d2).norm() == 0.0);

  // continuity at both breakpoints
  CHECK(std::abs(eval_b(rs - d2 - 1e-13, rs, d2) - eval_b(rs - d2 + 1e-13, rs, d2)) < 1e-12);
  CHECK(std::abs(eval_b(rs - 1e-13, rs, d2) - eval_b(rs + 1e-13, rs, d2)) < 1e-12);

  const Vec2 qj(3, -1);
  const Vec2 qi = qj + Vec2(0.6, 0.8) * (rs - 0.7);
  const Vec2 num = fd([&](const Vec2& q) { return eval_b((q - qj).norm(), rs, d2); }, qi);
  CHECK(rel(grad_b(qi, qj, rs, d2), num) < 1e-6);
}

TEST_CASE("connectivity gradient points toward the neighbor in the band") {
  // once d_ij is close to R_s, -grad phi pulls i toward j
  FormationSpec f(2, {{0, 1, Vec2(-10, 0)}});
  Params p;
  NavigationField field(f, {}, p);
  for (double eps : {0.5, 0.1, 0.01}) {
    std::vector<Vec2> q{Vec2(0, 0), Vec2(p.sensing_radius - eps, 0)};
    const Vec2 u = -field.grad_phi_wrt(0, 0, q);
    CHECK(u.dot(q[1] - q[0]) > 0.0);
  }
}

TEST_CASE("collision factor B") {
  const double d1 = 8;
  CHECK(eval_B(0, d1) == 0.0);
  CHECK(eval_B(d1, d1) == 1.0);
  CHECK(eval_B(d1 / 2, d1) == doctest::Approx(0.75));
  CHECK(eval_B(20, d1) == 1.0);
  CHECK(std::abs(eval_B(d1 - 1e-13, d1) - eval_B(d1 + 1e-13, d1)) < 1e-12);
  CHECK(grad_B(Vec2(0, 0), Vec2(9, 0), d1) == Vec2::Zero());
  CHECK(grad_B(Vec2(1, 1), Vec2(1, 1), d1) == Vec2::Zero());

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int t = 0; t < 200; ++t) {
    const Vec2 a(u(rng), u(rng)), b(u(rng), u(rng));
    CHECK(grad_B(a, b, d1).norm() <= 2.0 / d1 + 1e-15);
  }

  const Vec2 qk(1, 1), qi(1 + d1 / 2, 1);
  const Vec2 num = fd([&](const Vec2& q) { return eval_B((q - qk).norm(), d1); }, qi);
  CHECK(rel(grad_B(qi, qk, d1), num) < 1e-6);
}

TEST_CASE("factor ranges stay in [0,1]") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0, 40);
  for (int t = 0; t < 1000; ++t) {
    const double d = u(rng);
    const double b = eval_b(d, 20, 2), bb = eval_B(d, 8);
    CHECK((b >= 0.0 && b <= 1.0));
    CHECK((bb >= 0.0 && bb <= 1.0));
  }
}

TEST_CASE("phi values") {
  CHECK(eval_phi(1, 1, 1) == doctest::Approx(0.5));
  CHECK(eval_phi(3, 0, 1) == 1.0);
  CHECK(eval_phi(3, 0, 2.5) == doctest::Approx(1.0));
  CHECK(eval_phi(0, 0.4, 2) == 0.0);
  CHECK(grad_phi(0, 0.4, Vec2::Zero(), Vec2(0.3, 0.1), 2) == Vec2::Zero());
  CHECK_THROWS_AS(eval_phi(0, 0, 1), DegenerateNavigationError);
  CHECK_THROWS_AS(grad_phi(0, 0, Vec2::Zero(), Vec2::Zero(), 1), DegenerateNavigationError);
  for (double g : {0.0, 0.1, 1.0, 50.0}) {
    for (double b : {0.0, 0.3, 1.0}) {
      if (g == 0.0 && b == 0.0) continue;
      const double v = eval_phi(g, b, 1.7);
      CHECK((v >= 0.0 && v <= 1.0));
    }
  }
}

TEST_CASE("beta from a field") {
  FormationSpec f(2, {{0, 1, Vec2(-10, 0)}});
  Params p;
  SUBCASE("all factors flat") {
    NavigationField field(f, {}, p);
    std::vector<Vec2> q{Vec2(0, 0), Vec2(10, 0)};
    const auto b = field.beta_wrt(0, 0, q);
    CHECK(b.beta == 1.0);
    CHECK(b.grad == Vec2::Zero());
  }
  SUBCASE("obstacle on top of the agent") {
    NavigationField field(f, ObstacleSet{{Vec2(0, 0)}}, p);
    std::vector<Vec2> q{Vec2(0, 0), Vec2(10, 0)};
    CHECK(field.beta_wrt(0, 0, q).beta == 0.0);
  }
  SUBCASE("masked link hides an agent from the collision factors") {
    NavigationField field(f, {}, p);
    std::vector<Vec2> q{Vec2(0, 0), Vec2(3, 0)};
    CHECK(field.beta_wrt(0, 0, q).beta < 1.0);
    const std::vector<std::uint8_t> failed{0, 1, 1, 0};
    CHECK(field.beta_wrt(0, 0, q, failed).beta == 1.0);
    CHECK(field.collision_agents(0, q, failed).empty());
  }
}

TEST_CASE("field gradients against finite differences") {
  FormationSpec f(3, {{0, 1, Vec2(-6, 1)}, {1, 2, Vec2(2, -7)}});
  Params p;
  p.k = 2.0;
  NavigationField field(f, ObstacleSet{{Vec2(2, 3)}}, p);
  std::vector<Vec2> q{Vec2(0, 0), Vec2(4.5, -2.0), Vec2(3.0, 4.0)};
  for (AgentIndex j = 0; j < 3; ++j) {
    for (AgentIndex w = 0; w < 3; ++w) {
      std::vector<Vec2> work = q;
      auto at = [&](const Vec2& x) {
        work[w] = x;
        return std::span<const Vec2>(work);
      };
      const Vec2 nb = fd([&](const Vec2& x) { return field.beta_wrt(j, w, at(x)).beta; }, q[w]);
      CHECK(rel(field.beta_wrt(j, w, q).grad, nb) < 1e-5);
      const Vec2 np = fd([&](const Vec2& x) { return field.phi(j, at(x)); }, q[w]);
      CHECK(rel(field.grad_phi_wrt(j, w, q), np) < 1e-5);
    }
  }
}

TEST_CASE("evaluate counts the collision set and flags out-of-range neighbors") {
  FormationSpec f(3, {{0, 1, Vec2(-6, 0)}});
  Params p;
  NavigationField field(f, ObstacleSet{{Vec2(1, 1), Vec2(50, 50)}}, p);
  std::vector<Vec2> q{Vec2(0, 0), Vec2(25, 0), Vec2(0, 5)};
  const auto e = field.evaluate(0, q);
  CHECK(e.collision_set_size == 2);
  CHECK(e.formation_neighbor_out_of_range);
  CHECK(e.beta == 0.0);
  CHECK(e.phi == 1.0);
}
