#pragma once

// Fixed quadrature grids on S^1 and S^2 and the integration rules built on them.

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hypcurv/errors.hpp"
#include "hypcurv/minkowski.hpp"

namespace hypcurv {

struct Grid {
  int dim = 0;
  int level = 0;
  Mat nodes;    // (m+1) x n, unit columns
  Vec weights;  // sums to |S^m|
  // m = 2: icosphere triangles; m = 1: empty (panel k joins nodes k and k+1).
  std::vector<std::array<int, 3>> triangles;
  // Node pairs used for difference quotients.
  std::vector<std::pair<int, int>> edges;

  Eigen::Index size() const { return weights.size(); }
  auto node(Eigen::Index i) const { return nodes.col(i); }
  // Node angle for m = 1.
  double angle(Eigen::Index i) const;
};

inline constexpr int kDefaultGridLevel = 6;

// m = 1: 2^(level+6) equally spaced nodes. m = 2: icosahedron subdivided
// `level` times, 10*4^level + 2 nodes, vertex weights from a third of the
// incident spherical triangle areas.
Grid build_grid(int m, int level);
// Grids are built once per (m, level) and kept for the life of the process.
const Grid& cached_grid(int m, int level);
inline const Grid& default_grid(int m) { return cached_grid(m, kDefaultGridLevel); }

// Neumaier-compensated sum in index order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x))
      c_ += (sum_ - t) + x;
    else
      c_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + c_; }

 private:
  double sum_ = 0.0, c_ = 0.0;
};

// Weighted sum of per-node values; throws integration_failure on a non-finite value.
double integrate(const Vec& values, const Grid& grid);

template <class F>
double integrate(F&& f, const Grid& grid) {
  CompensatedSum s;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double v = f(grid.node(i));
    if (!std::isfinite(v))
      fail(ErrorKind::integration_failure, "non-finite integrand at node " + std::to_string(i), i);
    s.add(grid.weights(i) * v);
  }
  return s.value();
}

// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> x, w;
};
const GaussRule& gauss_legendre(int n);

// Integral of f over [a, b] with an n-point Gauss-Legendre rule.
template <class F>
double gauss_integral(F&& f, double a, double b, int n = 6) {
  const GaussRule& r = gauss_legendre(n);
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (size_t k = 0; k < r.x.size(); ++k) s += r.w[k] * f(c + h * r.x[k]);
  return h * s;
}

// Arc [a, b] of S^1 (angles, a < b) on which `cell` is constant.
struct CellArc {
  double a, b;
  int cell;
};

// Cuts every panel of a circle grid at the angles where the cell label
// changes, located by bisection to machine precision. Labels are assumed to
// occupy connected arcs.
std::vector<CellArc> circle_cell_arcs(const Grid& grid, const std::function<int(double)>& cell);

// Quadrature points and weights for a spherical triangle with unit vertices
// a, b, c: gnomonic pullback of the flat triangle, subdivided until each
// piece spans at most max_edge radians, with a collapsed n x n Gauss rule.
struct PointRule {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
};
void append_spherical_triangle_rule(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                    const Eigen::Vector3d& c, PointRule& rule,
                                    double max_edge = 0.3, int n = 6);

// Same with a caller-supplied test on unit vertices: true splits the piece in
// four (up to 40 levels deep).
using TriangleRefine = std::function<bool(const Eigen::Vector3d&, const Eigen::Vector3d&,
                                          const Eigen::Vector3d&)>;
void append_spherical_triangle_rule(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                    const Eigen::Vector3d& c, PointRule& rule,
                                    const TriangleRefine& refine, int n = 6);

// Largest great-circle distance between two of a, b, c (unit vectors).
double max_edge_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c);

// Area of the spherical triangle with unit vertices a, b, c.
double spherical_triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                               const Eigen::Vector3d& c);

}  // namespace hypcurv
