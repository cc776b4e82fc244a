#include "doctest.h"

#include <numbers>
#include <random>

#include "hypcurv/solver.hpp"
#include "random_bodies.hpp"

using namespace hypcurv;
using hypcurv::testing::random_polytope;
using std::numbers::pi;

namespace {

HyperbolicPolytope regular_polygon(int n, double r) {
  std::vector<Vec> dirs;
  for (int k = 0; k < n; ++k) dirs.push_back(circle_point(2 * pi * k / n));
  return from_vertices(1, dirs, Vec::Constant(n, r));
}

double max_relative(const Vec& a, const Vec& b) {
  return ((a - b).array() / b.array()).abs().maxCoeff();
}

}  // namespace

TEST_CASE("extract_body") {
  const Vec dirs_r = Vec::Constant(4, std::log(std::tanh(1.0)));
  std::vector<Vec> dirs;
  for (int k = 0; k < 4; ++k) dirs.push_back(circle_point(pi / 2 * k));
  const auto mu = make_measure(1, dirs, Vec::Ones(4));
  const auto body = extract_body(make_potential(mu, dirs_r), mu);
  for (int i = 0; i < 4; ++i) CHECK(body.radii(i) == doctest::Approx(1.0).epsilon(1e-14));
  // psi close to 0 still maps to a finite radius.
  const auto far = extract_body(make_potential(mu, Vec::Constant(4, -1e-9)), mu);
  CHECK(far.radii.maxCoeff() == doctest::Approx(-0.5 * std::log(std::tanh(0.5e-9))).epsilon(1e-14));
  CHECK(std::isfinite(far.radii.maxCoeff()));
  CHECK_THROWS_AS(extract_body(make_potential(mu, Vec::Constant(4, -1e-12)), mu), Error);
}

TEST_CASE("square round trip") {
  const auto square = regular_polygon(4, 1.0);
  const auto mu = curvature_measure_integral(square, default_grid(1));
  const auto rep = solve(mu);
  REQUIRE(rep.converged);
  REQUIRE(rep.body);
  CHECK((rep.body->radii.array() - 1.0).abs().maxCoeff() <= 1e-4);
  CHECK(rep.body->radii.maxCoeff() - rep.body->radii.minCoeff() <= 1e-10);
  CHECK(rep.grad_history.back() <= rep.config.grad_tolerance(1));
  CHECK(rep.el_residuals.maxCoeff() <= rep.config.tol_el);
  for (size_t k = 1; k < rep.K_history.size(); ++k) CHECK(rep.K_history[k] >= rep.K_history[k - 1]);
}

TEST_CASE("larger balls give larger radii") {
  double last = 0;
  for (double r : {0.5, 1.0, 2.0}) {
    const auto mu = curvature_measure_integral(ball_polytope(1, 12, r), default_grid(1));
    const auto rep = solve(mu);
    REQUIRE(rep.converged);
    const double got = rep.body->radii.mean();
    CHECK(got > last);
    CHECK(got == doctest::Approx(r).epsilon(1e-6));
    last = got;
  }
}

TEST_CASE("random round trips") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 4; ++trial) {
    const auto body = random_polytope(rng, 1, 3 + trial, 0.3, 2.0);
    const auto rep = solve(curvature_measure_integral(body, default_grid(1)));
    CHECK(rep.converged);
    REQUIRE(rep.body);
    CHECK(max_relative(rep.body->radii, body.radii) <= 1e-4);
  }
  const auto body = random_polytope(rng, 2, 6, 0.3, 1.5);
  const auto rep = solve(curvature_measure_angles(body));
  CHECK(rep.converged);
  REQUIRE(rep.body);
  CHECK(max_relative(rep.body->radii, body.radii) <= 1e-6);
}

TEST_CASE("boosted bodies are recovered, not the original") {
  const auto sq = regular_polygon(5, 1.0);
  const auto moved = apply_isometry(sq, circle_point(0.4), 0.3);
  const auto rep = solve(curvature_measure_integral(moved, default_grid(1)));
  REQUIRE(rep.converged);
  CHECK(max_relative(rep.body->radii, moved.radii) <= 1e-4);
  CHECK(max_relative(rep.body->radii, sq.radii) > 1e-2);
}

TEST_CASE("preconditions") {
  // One atom carries more than half the circle's length.
  std::vector<Vec> pts{circle_point(0), circle_point(2.1), circle_point(4.2)};
  const auto mu = make_measure(1, pts, (Vec(3) << 3.3, 2.0, 2.0).finished());
  try {
    solve(mu);
    FAIL("expected precondition failure");
  } catch (const PreconditionError& e) {
    CHECK(e.kind() == ErrorKind::precondition_failed);
    CHECK(!e.report().vertex_ok);
  }
  SolverConfig forced;
  forced.force = true;
  forced.max_iter = 50;
  forced.restarts = 0;
  const auto rep = solve(mu, forced);
  CHECK(!rep.converged);
  CHECK(!rep.warnings.empty());

  SolverConfig bad;
  bad.backtrack = 1.5;
  CHECK_THROWS_AS(solve(curvature_measure_angles(regular_polygon(4, 1.0)), bad), Error);
}

TEST_CASE("solver output is c-conjugate") {
  std::mt19937_64 rng(43);
  for (int m = 1; m <= 2; ++m) {
    const auto body = random_polytope(rng, m, m == 1 ? 6 : 8, 0.3, 1.5);
    const auto rep = solve(curvature_measure_angles(body));
    REQUIRE(rep.converged);
    const Grid& g = default_grid(m);
    const auto d = conjugacy_diagnostics(rep.psi, g);
    CHECK(std::fabs(d.max_phi_plus_min_psi) <= 1e-4);
    CHECK(std::fabs(d.min_phi_plus_max_psi) <= 1e-4);
    const auto cc = double_convexify(rep.psi, g);
    CHECK((cc.values - rep.psi.values).cwiseAbs().maxCoeff() <= 1e-4);
    // The extension of psi is smallest at the argmax eta_0 of phi, where it
    // equals -phi(eta_0); then 0 <= psi(xi) - psi(eta_0) <= c(eta_0, xi).
    const auto t = transform_grid(rep.psi, g);
    Eigen::Index k0;
    const double phi_max = t.phi.maxCoeff(&k0);
    for (int i = 0; i < rep.psi.size(); ++i) {
      const double c = cost(Vec(g.node(k0)), rep.psi.support[i]);
      const double diff = rep.psi.values(i) + phi_max;
      CHECK(diff >= 0);
      if (std::isfinite(c)) CHECK(diff <= c + 1e-12);
    }
  }
}
