#pragma once

// Discrete measures on S^m and the three conditions of the existence theorem:
// total mass, Alexandrov, vertex.

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "hypcurv/minkowski.hpp"

namespace hypcurv {

inline constexpr double kMinPointSeparation = 1e-9;

struct DiscreteMeasure {
  int dim = 0;
  std::vector<Vec> points;  // unit vectors in R^{m+1}
  Vec weights;

  int size() const { return static_cast<int>(points.size()); }
  double total() const { return weights.sum(); }
};

// Validates dimension, unit length, pairwise separation and positive weights.
DiscreteMeasure make_measure(int m, std::vector<Vec> points, Vec weights);

enum class HullKind { point, arc, polygon, non_pointed, full_sphere };

// Spherical convex hull of finitely many unit vectors: the cone hull of the
// rays through them intersected with the sphere.
struct SphericalConvexSet {
  int dim = 0;
  HullKind kind = HullKind::point;
  // Extreme rays; counterclockwise seen from outside for polygons, the two
  // endpoints for arcs, one ray for a point.
  std::vector<Vec> rays;
  // m = 2 polygons: inward unit normal of the edge from rays[k] to rays[k+1].
  // m = 2 arcs: unit normal of the supporting great circle.
  std::vector<Vec> normals;
  double length = 0.0;  // arc length for arcs

  // Membership with absolute tolerance; meaningless for non_pointed sets,
  // where it returns false, and true for full_sphere.
  bool contains(const Vec& p, double tol = 1e-12) const;
};

SphericalConvexSet spherical_hull(const std::vector<Vec>& points);

// sigma of the polar set (points at distance >= pi/2 from the set).
double polar_sigma_area(const SphericalConvexSet& omega);

// Area of a convex spherical polygon by angle excess; vertices in cyclic order.
double spherical_polygon_area(const std::vector<Eigen::Vector3d>& vertices);

struct CheckMode {
  bool exhaustive = true;
  int n_subsets = 0;
  std::uint64_t seed = 0;

  static CheckMode sampled(int n, std::uint64_t seed) { return {false, n, seed}; }
};

inline constexpr int kMaxExhaustive = 20;

struct ConditionReport {
  bool total_mass_ok = false;
  double total_mass_excess = 0.0;  // mu(S^m) - sigma(S^m)
  bool vertex_ok = false;
  double max_weight = 0.0;
  int max_weight_index = -1;  // lowest index attaining max_weight
  bool alexandrov_ok = false;
  double alexandrov_slack = 0.0;   // min over tested omega of mu(S^m \ omega) - sigma(omega*)
  std::vector<int> worst_witness;  // support indices spanning the minimizing omega
  bool exhaustive = true;
  long tested_sets = 0;

  bool all_ok() const { return total_mass_ok && vertex_ok && alexandrov_ok; }
};

// Margin a condition must clear to pass; ties count as failures.
double condition_eps(int m);

ConditionReport check_conditions(const DiscreteMeasure& mu, CheckMode mode = {});

// Minimum-norm point of the convex hull of pts (Wolfe's algorithm).
Eigen::Vector3d min_norm_point(const std::vector<Eigen::Vector3d>& pts);

}  // namespace hypcurv
