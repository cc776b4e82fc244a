#include "doctest.h"

#include <chrono>
#include <numbers>
#include <random>

#include "hypcurv/crofton.hpp"
#include "random_bodies.hpp"

using namespace hypcurv;
using hypcurv::testing::random_polytope;
using hypcurv::testing::random_unit;
using std::numbers::pi;

namespace {

// Klein scaling by lambda < 1 gives a body inside p.
HyperbolicPolytope shrink(const HyperbolicPolytope& p, double lambda) {
  Vec r = p.radii;
  for (Eigen::Index i = 0; i < r.size(); ++i) r(i) = std::atanh(lambda * std::tanh(r(i)));
  return from_vertices(p.dim, p.directions, r);
}

bool inside_klein(const HyperbolicPolytope& p, const Vec& x) {
  const Vec k = klein_point(x);
  for (const auto& f : p.facets)
    if (f.normal.dot(k) > f.h) return false;
  return true;
}

// Whether the Klein line k + lambda dir meets p.
bool line_meets(const HyperbolicPolytope& p, const Vec& k, const Vec& dir) {
  double lo = -1e300, hi = 1e300;
  for (const auto& f : p.facets) {
    const double a = f.normal.dot(dir), b = f.h - f.normal.dot(k);
    if (a > 0) hi = std::min(hi, b / a);
    else if (a < 0) lo = std::max(lo, b / a);
    else if (b < 0) return false;
  }
  return lo <= hi;
}

}  // namespace

TEST_CASE("geodesic sampling") {
  for (int m : {1, 2}) {
    const double cap = 2.0;
    const int n = 20000;
    const double t0 = 1.0;
    const double p0 = (std::cosh(t0) - 1) / (std::cosh(cap) - 1);
    int below = 0;
    for (const auto& g : sample_geodesics(m, n, cap, 7)) {
      CHECK(g.h_a <= cap);
      if (g.h_a < t0) ++below;
      CHECK(std::fabs(g.xi_a.norm() - 1) < 1e-14);
      CHECK(std::fabs(g.xi_a.dot(g.xi_b)) < 1e-14);
      if (m == 2) {
        CHECK(std::fabs(g.normal.dot(g.xi_a)) < 1e-14);
        CHECK(std::fabs(g.normal.dot(g.xi_b)) < 1e-14);
      }
      for (double s : {0.0, 0.3, 2.0, 4.5}) {
        const Vec x = g.point(s);
        // The geodesic lies in de Sitter space.
        CHECK(std::fabs(lorentz_dot(x, x) - 1.0) < 1e-12);
      }
      CHECK((g.point(0) - desitter_point(g.xi_a, g.h_a)).norm() < 1e-14);
    }
    const double sd = std::sqrt(p0 * (1 - p0) / n);
    CHECK(std::fabs(double(below) / n - p0) < 4 * sd);
  }
  // Same seed and index give the same geodesic.
  const auto a = sample_geodesic(2, 1.0, 3, 11), b = sample_geodesic(2, 1.0, 3, 11);
  CHECK(a.xi_a == b.xi_a);
  CHECK(a.h_a == b.h_a);
}

TEST_CASE("support function matches brute force") {
  std::mt19937_64 rng(5);
  for (int m : {1, 2}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto p = random_polytope(rng, m, 5 + trial, 1.0, 1.5);
      const SupportFunction h(p);
      for (int k = 0; k < 200; ++k) {
        const Vec eta = random_unit(rng, m + 1);
        CHECK(h(eta) == doctest::Approx(support_fn(p, eta)).epsilon(1e-13));
        CHECK(h(eta) >= h.min_value() - 1e-13);
        CHECK(h(eta) <= h.max_value() + 1e-13);
      }
    }
  }
}

TEST_CASE("intersection counts agree with inside test") {
  std::mt19937_64 rng(9);
  for (int m : {1, 2}) {
    const auto p = random_polytope(rng, m, 8, 0.5, 1.5);
    const SupportFunction h(p);
    int hits = 0;
    for (int k = 0; k < 400; ++k) {
      const auto g = sample_geodesic(m, 2.5, 21, k);
      const auto c = count_intersections(g, h);
      CHECK_FALSE(c.unstable);
      // m = 1: the de Sitter geodesic is polar to p and crosses the boundary
      // exactly when p lies outside. m = 2: it is polar to the line through p
      // along the normal, and crosses when that line misses the body.
      const Vec kp = klein_point(hyperbolic_point(g.xi_a, g.h_a));
      const bool inside = m == 1 ? inside_klein(p, hyperbolic_point(g.xi_a, g.h_a))
                                 : line_meets(p, kp, g.normal);
      CAPTURE(m);
      CAPTURE(k);
      CAPTURE(g.h_a);
      CHECK(c.count == (inside ? 0 : 2));
      for (double root : c.roots) {
        const auto pc = desitter_coords(g.point(root));
        CHECK(pc.t == doctest::Approx(h(pc.direction)).epsilon(1e-9));
      }
      if (!inside) ++hits;
    }
    CHECK(hits > 50);
  }
  // p = o: the geodesic is an equator of the polar sphere and misses the body.
  GeodesicSample g = sample_geodesic(1, 1.0, 1, 0);
  g.h_a = 0;
  g.p = origin_point<double>(3);
  const auto sq = ball_polytope(1, 4, 1.0);
  CHECK(count_intersections(g, SupportFunction(sq)).count == 0);
  // Far from both bodies: two crossings each.
  const auto big = ball_polytope(1, 16, 2.0);
  const auto far = sample_geodesic(1, 8.0, 2, 0);
  if (far.h_a > 3.0) {
    CHECK(count_intersections(far, SupportFunction(sq)).count == 2);
    CHECK(count_intersections(far, SupportFunction(big)).count == 2);
  }
}

TEST_CASE("sampled root count agrees with the exact count") {
  std::mt19937_64 rng(23);
  for (int m : {1, 2}) {
    const auto p = random_polytope(rng, m, 7, 0.5, 1.5);
    const SupportFunction h(p);
    const std::function<double(const Vec&)> hf = [&](const Vec& eta) { return h(eta); };
    const std::function<bool(const Vec&)> half = [](const Vec& eta) { return eta(0) > 0; };
    for (int k = 0; k < 100; ++k) {
      const auto g = sample_geodesic(m, 2.0, 5, k);
      for (const auto& region : {std::function<bool(const Vec&)>{}, half}) {
        const auto exact = count_intersections(g, h, region);
        const auto sampled = count_intersections_sampled(g, hf, h.min_value(), region);
        CHECK(sampled.count == exact.count);
        for (std::size_t i = 0; i < exact.roots.size() && sampled.count == exact.count; ++i) {
          const double diff = std::remainder(exact.roots[i] - sampled.roots[i], 2 * pi);
          const double alt = exact.roots.size() == 2
                                 ? std::remainder(exact.roots[i] - sampled.roots[1 - i], 2 * pi)
                                 : diff;
          CHECK(std::min(std::fabs(diff), std::fabs(alt)) < 1e-8);
        }
      }
    }
  }
}

TEST_CASE("identical bodies") {
  const auto p = ball_polytope(1, 12, 1.0);
  CroftonConfig cfg;
  cfg.samples = 2000;
  const auto r = crofton_compare(p, p, default_grid(1), cfg);
  CHECK(r.lhs == 0.0);
  CHECK(r.rhs == 0.0);
  CHECK(r.agree);
}

TEST_CASE("ball pair") {
  const auto p1 = ball_polytope(1, 256, 0.5), p2 = ball_polytope(1, 256, 1.0);
  const double exact = 2 * pi * (std::cosh(1.0) - std::cosh(0.5));
  CroftonConfig cfg;
  cfg.samples = 100000;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = crofton_compare(p1, p2, default_grid(1), cfg);
  MESSAGE("ball pair rhs ", r.rhs, " +- ", r.stderr_, " lhs ", r.lhs, " in ",
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), " s");
  CHECK(r.lhs == doctest::Approx(exact).epsilon(1e-3));
  CHECK(r.agree);
  CHECK(r.differences_valid);
  CHECK(r.unstable == 0);
}

TEST_CASE("nested pairs") {
  std::mt19937_64 rng(17);
  const auto& grid = default_grid(1);
  CroftonConfig cfg;
  cfg.samples = 4000;
  for (int trial = 0; trial < 20; ++trial) {
    const auto p2 = random_polytope(rng, 1, 5 + trial % 4, 0.6, 1.6);
    const auto p1 = shrink(p2, 0.5 + 0.02 * trial);
    cfg.seed = trial + 1;
    const auto r = crofton_compare(p1, p2, grid, cfg);
    CHECK(r.lhs > 0);
    CHECK(r.rhs > 0);
    CHECK(r.rhs_nonnegative);
    CHECK(r.differences_valid);
    CHECK(r.lhs == doctest::Approx(polar_boundary_area(p2, grid) - polar_boundary_area(p1, grid))
                       .epsilon(1e-12));
    CHECK(std::fabs(r.lhs - r.rhs) <= 4 * r.stderr_ + 1e-3);
  }
}

TEST_CASE("standard error scales with samples") {
  const auto p1 = ball_polytope(1, 32, 0.4), p2 = ball_polytope(1, 32, 1.2);
  CroftonConfig cfg;
  cfg.samples = 20000;
  const auto a = crofton_compare(p1, p2, default_grid(1), cfg);
  cfg.samples = 80000;
  const auto b = crofton_compare(p1, p2, default_grid(1), cfg);
  CHECK(a.stderr_ / b.stderr_ == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("m = 2 comparison") {
  const auto p1 = ball_polytope(2, 3, 0.5), p2 = ball_polytope(2, 3, 1.0);
  CroftonConfig cfg;
  cfg.samples = 20000;
  CHECK_THROWS_AS(crofton_compare(p1, p2, default_grid(2), cfg), Error);
  cfg.experimental = true;
  const auto r = crofton_compare(p1, p2, default_grid(2), cfg);
  const double ball = 4 * pi * (std::pow(std::sinh(1.0), 2) - std::pow(std::sinh(0.5), 2));
  MESSAGE("m = 2 rhs ", r.rhs, " +- ", r.stderr_, " lhs ", r.lhs, " ball ", ball);
  CHECK(r.lhs == doctest::Approx(ball).epsilon(0.02));
  CHECK(r.differences_valid);
  CHECK(r.agree);
}
