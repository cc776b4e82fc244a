#include "doctest.h"

#include <numbers>

#include "hypcurv/quadrature.hpp"

using namespace hypcurv;
using std::numbers::pi;

TEST_CASE("grid sizes and normalization") {
  const Grid c0 = build_grid(1, 0);
  CHECK(c0.size() == 64);
  for (Eigen::Index i = 0; i < c0.size(); ++i) CHECK(c0.weights(i) == doctest::Approx(2 * pi / 64));
  CHECK(default_grid(1).size() == 4096);

  for (int level = 0; level <= 5; ++level) {
    const Grid g = build_grid(2, level);
    CHECK(g.size() == 10 * (Eigen::Index(1) << (2 * level)) + 2);
    CHECK(std::fabs(g.weights.sum() - 4 * pi) < 1e-9);
    CHECK(g.weights.minCoeff() > 0);
    CHECK(g.triangles.size() == size_t(20) << (2 * level));
    for (Eigen::Index i = 0; i < g.size(); ++i) CHECK(std::fabs(g.node(i).norm() - 1) < 1e-12);
  }
  CHECK_THROWS_AS(build_grid(3, 0), Error);
}

TEST_CASE("integration examples") {
  const Grid g5 = build_grid(2, 5);
  CHECK(std::fabs(integrate([](auto) { return 1.0; }, g5) - 4 * pi) < 1e-9);
  CHECK(std::fabs(integrate([](auto e) { return e(0) * e(0); }, g5) - 4 * pi / 3) < 1e-4);
  const double c3 = std::pow(std::cosh(1.0), 3);
  CHECK(std::fabs(integrate([&](auto) { return c3; }, g5) - 4 * pi * c3) < 1e-9);
}

TEST_CASE("refinement differences decrease") {
  // Independent value: integral of exp(x) over S^2 is 4 pi sinh 1.
  std::vector<double> vals;
  for (int level = 2; level <= 7; ++level)
    vals.push_back(integrate([](auto e) { return std::exp(e(0)); }, build_grid(2, level)));
  double prev = 1e300;
  for (size_t k = 0; k + 1 < vals.size(); ++k) {
    const double d = std::fabs(vals[k + 1] - vals[k]);
    CHECK(d < prev);
    prev = d;
  }
  CHECK(std::fabs(vals.back() - 4 * pi * std::sinh(1.0)) < 1e-4);
}

TEST_CASE("linearity") {
  const Grid g = build_grid(2, 4);
  auto f = [](auto e) { return std::exp(e(1)) + e(2); };
  auto h = [](auto e) { return e(0) * e(1) - 0.25; };
  const double lhs = integrate([&](auto e) { return 2.5 * f(e) - 1.5 * h(e); }, g);
  CHECK(std::fabs(lhs - (2.5 * integrate(f, g) - 1.5 * integrate(h, g))) < 1e-12);
}

TEST_CASE("non-finite integrand names the node") {
  const Grid g = build_grid(1, 0);
  try {
    integrate([](auto e) { return e(1) > 0.999 ? std::nan("") : 1.0; }, g);
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::integration_failure);
    CHECK(e.index() == 16);
  }
}

TEST_CASE("gauss legendre") {
  for (int n : {2, 4, 6, 8}) {
    // exact for polynomials of degree 2n-1
    const double v = gauss_integral([n](double x) { return std::pow(x, 2 * n - 2); }, -1.0, 1.0, n);
    CHECK(v == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-14));
  }
  CHECK(gauss_integral([](double x) { return std::cos(x); }, 0.0, 1.0, 8) ==
        doctest::Approx(std::sin(1.0)).epsilon(1e-15));
}

TEST_CASE("spherical triangle rule") {
  const Eigen::Vector3d x(1, 0, 0), y(0, 1, 0), z(0, 0, 1);
  CHECK(spherical_triangle_area(x, y, z) == doctest::Approx(pi / 2).epsilon(1e-15));
  PointRule r;
  append_spherical_triangle_rule(x, y, z, r);
  double area = 0, second = 0;
  for (size_t k = 0; k < r.points.size(); ++k) {
    area += r.weights[k];
    second += r.weights[k] * r.points[k](0) * r.points[k](0);
  }
  CHECK(std::fabs(area - pi / 2) < 1e-13);
  // By symmetry each coordinate square integrates to a third of the octant area.
  CHECK(std::fabs(second - pi / 6) < 1e-13);
}

TEST_CASE("circle cell arcs") {
  const Grid g = build_grid(1, 0);
  // Cells split at 0.5 and 0.5 + 1e-3 (inside one panel) and at 4.0.
  auto cell = [](double t) {
    t = std::remainder(t - pi, 2 * pi) + pi;
    return t < 0.5 ? 0 : (t < 0.501 ? 1 : (t < 4.0 ? 2 : 0));
  };
  const auto arcs = circle_cell_arcs(g, cell);
  double len[3] = {0, 0, 0};
  for (const auto& a : arcs) len[a.cell] += a.b - a.a;
  CHECK(len[1] == doctest::Approx(1e-3).epsilon(1e-10));
  CHECK(len[2] == doctest::Approx(3.499).epsilon(1e-12));
  CHECK(len[0] + len[1] + len[2] == doctest::Approx(2 * pi));
}
