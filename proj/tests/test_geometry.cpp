#include "doctest.h"

#include <random>

#include "hypcurv/minkowski.hpp"

using namespace hypcurv;

namespace {

Vec random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = nd(rng);
  return v.normalized();
}

}  // namespace

TEST_CASE("lorentz product conventions") {
  const Vec o = origin_point<double>(2);
  CHECK(lorentz_dot(o, o) == -1.0);

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ut(0.0, 4.0), us(-4.0, 4.0);
  for (int m : {1, 2}) {
    for (int k = 0; k < 100; ++k) {
      const Vec xi = random_unit(rng, m + 1);
      const double t = ut(rng);
      const Vec x = hyperbolic_point(xi, t);
      CHECK(lorentz_dot(x, x) == doctest::Approx(-1.0).epsilon(1e-12 * std::cosh(2 * t)));
      CHECK(x(0) > 0);
      const Vec y = desitter_point(xi, us(rng));
      CHECK(lorentz_dot(y, y) == doctest::Approx(1.0).epsilon(1e-12 * std::cosh(2 * t)));
    }
  }
}

TEST_CASE("hyperbolic points") {
  Vec xi(3);
  xi << 0, 1, 0;
  const Vec o = origin_point<double>(2);
  CHECK((hyperbolic_point(xi, 0.0) - o).norm() == 0.0);
  CHECK(hyperbolic_point(xi, 1.0)(0) == doctest::Approx(1.5430806348152437));
  const Vec k = klein_point(hyperbolic_point(xi, 0.8));
  CHECK((k - std::tanh(0.8) * xi).norm() < 1e-15);
}

TEST_CASE("klein round trip") {
  std::mt19937_64 rng(11);
  for (double t = 1e-3; t <= 10.0; t *= 1.37) {
    const Vec xi = random_unit(rng, 3);
    // tanh t rounds to within e^{-2t} of 1, so double only carries the
    // round trip to 1e-10 up to t ~ 7; long double covers the full range.
    const VecX<long double> xl = hyperbolic_point(VecX<long double>(xi.cast<long double>().normalized()), (long double)t);
    const long double back = radius_from_klein(klein_point(xl).norm());
    CHECK(std::fabs(double(back) - t) <= 1e-10);
    if (t <= 7.0) {
      const Vec x = hyperbolic_point(xi, t);
      CHECK(std::fabs(radius_from_klein(klein_point(x).norm()) - t) <= 1e-10);
    }
    CHECK(std::fabs(hyperbolic_coords(hyperbolic_point(xi, t)).t - t) <= 1e-10 * std::max(1.0, t));
  }
  CHECK_THROWS_AS(radius_from_klein(1.0), Error);
}

TEST_CASE("cost values") {
  const Vec e = circle_point(0.3);
  CHECK(cost(e, e) == doctest::Approx(0.0));
  CHECK(cost(e, circle_point(0.3 + std::numbers::pi / 3)) == doctest::Approx(std::log(2.0)));
  CHECK(cost(e, circle_point(0.3 + std::numbers::pi / 2)) == kInfiniteCost);
  CHECK(cost(e, circle_point(0.3 + 2.0)) == kInfiniteCost);

  std::mt19937_64 rng(3);
  for (int k = 0; k < 200; ++k) {
    const Vec a = random_unit(rng, 3), b = random_unit(rng, 3);
    CHECK(cost(a, b) == cost(b, a));
    const double c = cost(a, b);
    if (c < kInfiniteCost) {
      CHECK(c >= 0.0);
      CHECK(sphere_distance(a, b) < std::numbers::pi / 2);
      CHECK(c == doctest::Approx(cost_profile(sphere_distance(a, b))).epsilon(1e-9));
    } else {
      CHECK(sphere_distance(a, b) >= std::numbers::pi / 2 - 1e-9);
    }
  }
}

TEST_CASE("cost profile is convex") {
  const double h = std::numbers::pi / 2 / 60;
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j) {
      const double r1 = i * h, r2 = j * h;
      CHECK(cost_profile(r1) + cost_profile(r2) >= 2 * cost_profile(0.5 * (r1 + r2)) - 1e-14);
    }
}

TEST_CASE("dimension validation") {
  CHECK_THROWS_AS(check_dim(3), Error);
  CHECK_THROWS_AS(sphere_measure(0), Error);
  try {
    check_dim(4);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::unsupported_dimension);
  }
}

TEST_CASE("boosts preserve the form") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const Vec u = random_unit(rng, 3);
    const Mat b = boost_matrix(u, 0.7);
    const Vec x = hyperbolic_point(random_unit(rng, 3), 1.3);
    const Vec y = hyperbolic_point(random_unit(rng, 3), 0.4);
    CHECK(lorentz_dot(Vec(b * x), Vec(b * y)) == doctest::Approx(lorentz_dot(x, y)));
    const Vec o = origin_point<double>(2);
    CHECK(hyperbolic_distance(o, Vec(b * o)) == doctest::Approx(0.7));
  }
}
