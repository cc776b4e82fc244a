#pragma once

// Hyperbolic convex polytopes containing the basepoint o, given by vertex
// directions and radii. Facets live in the Klein model.

#include <Eigen/Core>

#include <vector>

#include "hypcurv/measures.hpp"
#include "hypcurv/minkowski.hpp"
#include "hypcurv/quadrature.hpp"

namespace hypcurv {

inline constexpr double kTieEps = 1e-9;
inline constexpr double kMinFacetSupport = 1e-6;

struct KleinFacet {
  Vec normal;    // outward Euclidean unit normal eta_k
  double h = 0;  // Euclidean support h_{E,k}
  std::vector<int> vertices;
};

struct HyperbolicPolytope {
  int dim = 0;
  std::vector<Vec> directions;
  Vec radii;
  std::vector<KleinFacet> facets;
  // Incident facets of each vertex in cyclic order. For m = 1: {edge before, edge after}.
  std::vector<std::vector<int>> vertex_facets;
  // m = 1: vertices in counterclockwise order.
  std::vector<int> cyclic_order;
  Mat klein;  // row i is tanh(r_i) xi_i

  int size() const { return static_cast<int>(directions.size()); }
  Vec vertex(int i) const { return hyperbolic_point(directions[i], radii(i)); }
};

HyperbolicPolytope from_vertices(int m, std::vector<Vec> directions, Vec radii);

// Regular polygon (m = 1, n vertices) or icosphere directions (m = 2, n = level).
HyperbolicPolytope ball_polytope(int m, int n, double radius);

double support_fn(const HyperbolicPolytope& p, const Vec& eta);
double radial_fn(const HyperbolicPolytope& p, const Vec& xi);
std::vector<int> t_map(const HyperbolicPolytope& p, const Vec& eta, double tie_eps = kTieEps);

// Push-forward of cosh^{m+1}(h) sigma under T, divided by cosh r. For m = 1
// each grid panel is cut where T changes and integrated with Gauss-Legendre;
// for m = 2 grid triangles inside one cell use the vertex rule and triangles
// meeting several cells are subdivided near the cell boundaries.
DiscreteMeasure curvature_measure_integral(const HyperbolicPolytope& p, const Grid& grid);

// Exterior angles at the vertices computed in the tangent space of H^{m+1}.
DiscreteMeasure curvature_measure_angles(const HyperbolicPolytope& p);

// |boundary of the polar body| = integral of cosh^{m+1}(h) / cosh(r o T).
double polar_boundary_area(const HyperbolicPolytope& p, const Grid& grid);

HyperbolicPolytope apply_isometry(const HyperbolicPolytope& p, const Vec& direction,
                                  double length);

double polygon_area_m1(const HyperbolicPolytope& p);

}  // namespace hypcurv
