#include "doctest.h"

#include <numbers>
#include <random>

#include "hypcurv/ctransform.hpp"
#include "random_bodies.hpp"

using namespace hypcurv;
using hypcurv::testing::random_polytope;
using hypcurv::testing::random_unit;
using std::numbers::pi;

namespace {

// psi = ln tanh r of a polytope's vertices.
PotentialVector body_potential(const HyperbolicPolytope& p) {
  return make_potential(p.dim, p.directions, p.radii.array().tanh().log().matrix());
}

PotentialVector regular(int n, double psi) {
  std::vector<Vec> dirs;
  for (int k = 0; k < n; ++k) dirs.push_back(circle_point(2 * pi * k / n));
  return make_potential(1, dirs, Vec::Constant(n, psi));
}

}  // namespace

TEST_CASE("potential validation") {
  CHECK_THROWS_AS(make_potential(1, {circle_point(0)}, Vec::Zero(1)), Error);
  CHECK_THROWS_AS(make_potential(1, {circle_point(0)}, Vec::Constant(1, NAN)), Error);
  const auto p = make_potential(1, {circle_point(0), circle_point(1)}, (Vec(2) << -1e-12, -1).finished());
  CHECK(p.clamped == std::vector<int>{0});
  CHECK(p.values(0) == -kPsiFloor);
}

TEST_CASE("c-transform examples") {
  const auto one = make_potential(1, {circle_point(0.4)}, Vec::Constant(1, -1.0));
  CHECK(c_transform(one, circle_point(0.4)).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(c_transform(one, circle_point(0.4 + pi)), Error);

  const auto hex = regular(6, -0.5);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ut(0, 2 * pi);
  for (int s = 0; s < 100; ++s) {
    const double t = ut(rng);
    const int nearest = int(std::lround(t / (pi / 3))) % 6;
    const auto v = c_transform(hex, circle_point(t));
    CHECK(v.value == doctest::Approx(cost(circle_point(t), hex.support[nearest]) + 0.5));
    CHECK(v.argmin == std::vector<int>{nearest});
  }
  CHECK(c_transform(hex, circle_point(pi / 6)).argmin.size() == 2);

  // min phi = -max psi, attained at the argmax support point.
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = body_potential(random_polytope(rng, 1 + trial % 2, 8, 0.3, 2.0));
    Eigen::Index top;
    p.values.maxCoeff(&top);
    CHECK(c_transform(p, p.support[top]).value == doctest::Approx(-p.values(top)).epsilon(1e-14));
    const auto t = transform_grid(p, default_grid(p.dim));
    CHECK(t.phi.minCoeff() >= -p.values(top) - 1e-14);
    CHECK(t.phi.minCoeff() + p.values(top) < 1e-4);
  }
}

TEST_CASE("c-transform agrees with the support function of the body") {
  std::mt19937_64 rng(5);
  for (int m = 1; m <= 2; ++m) {
    const auto body = random_polytope(rng, m, 9, 0.3, 1.5);
    const auto psi = body_potential(body);
    for (int s = 0; s < 50; ++s) {
      const Vec eta = random_unit(rng, m + 1);
      const auto v = c_transform(psi, eta);
      CHECK(v.value == doctest::Approx(-std::log(std::tanh(support_fn(body, eta)))).epsilon(1e-12));
      CHECK(v.argmin == t_map(body, eta));
    }
  }
}

TEST_CASE("admissibility and monotone shift") {
  std::mt19937_64 rng(9);
  for (int m = 1; m <= 2; ++m) {
    const auto psi = body_potential(random_polytope(rng, m, 8, 0.3, 1.5));
    const Grid& g = default_grid(m);
    const auto t = transform_grid(psi, g);
    CHECK(t.phi.minCoeff() > 0);
    std::uniform_int_distribution<Eigen::Index> node(0, g.size() - 1);
    for (int s = 0; s < 500; ++s) {
      const Eigen::Index k = node(rng);
      for (int i = 0; i < psi.size(); ++i)
        CHECK(t.phi(k) + psi.values(i) <= cost(Vec(g.node(k)), psi.support[i]) + 1e-14);
    }
    auto lowered = psi;
    lowered.values(2) -= 0.3;
    const Vec diff = transform_grid(lowered, g).phi - t.phi;
    CHECK(diff.minCoeff() >= -1e-14);
    CHECK(diff.maxCoeff() <= 0.3 + 1e-14);
    CHECK(diff.maxCoeff() > 0);
  }
}

TEST_CASE("coverage") {
  const auto cap = make_potential(1, {circle_point(0), circle_point(0.3)}, Vec::Constant(2, -1.0));
  try {
    transform_grid(cap, default_grid(1));
    FAIL("expected uncovered-direction");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::uncovered_direction);
    CHECK(e.index() >= 0);
  }
}

TEST_CASE("double convexification") {
  std::mt19937_64 rng(13);
  for (int m = 1; m <= 2; ++m) {
    const Grid& g = default_grid(m);
    double spacing = 0;
    for (const auto& [a, b] : g.edges) spacing = std::max(spacing, sphere_distance(g.node(a), g.node(b)));
    for (int trial = 0; trial < 5; ++trial) {
      const auto psi = body_potential(random_polytope(rng, m, 7, 0.3, 1.5));
      const auto cc = double_convexify(psi, g);
      CHECK(((cc.values - psi.values).array() >= 0).all());
      CHECK((cc.values - psi.values).maxCoeff() <= 2 * spacing * spacing);
    }
    // Symmetric support, one value pushed deep inside the neighbouring cells.
    std::vector<Vec> dirs;
    if (m == 1) {
      for (int k = 0; k < 6; ++k) dirs.push_back(circle_point(2 * pi * k / 6));
    } else {
      const Grid ico = build_grid(2, 0);
      for (Eigen::Index k = 0; k < ico.size(); ++k) dirs.push_back(ico.node(k));
    }
    auto pushed = make_potential(m, dirs, Vec::Constant(Eigen::Index(dirs.size()), -0.5));
    pushed.values(0) -= 10;
    const auto back = double_convexify(pushed, g);
    CHECK(back.values(0) > pushed.values(0) + 9);
    CHECK((back.values.tail(dirs.size() - 1).array() == -0.5).all());
  }
}

TEST_CASE("conjugacy diagnostics") {
  std::mt19937_64 rng(17);
  for (int m = 1; m <= 2; ++m) {
    for (int trial = 0; trial < 3; ++trial) {
      const auto psi = body_potential(random_polytope(rng, m, 8, 0.3, 1.5));
      const auto d = conjugacy_diagnostics(psi, default_grid(m));
      CHECK(std::fabs(d.max_phi_plus_min_psi) <= 1e-4);
      CHECK(std::fabs(d.min_phi_plus_max_psi) <= 1e-4);
      CHECK(std::isfinite(d.lipschitz_estimate));
      CHECK(d.lipschitz_estimate <= d.lipschitz_bound);
    }
  }
}
