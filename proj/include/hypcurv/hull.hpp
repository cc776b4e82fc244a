#pragma once

// Euclidean convex hulls of point sets in R^2 and R^3 (Klein-model polytopes).

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <vector>

namespace hypcurv {

// Indices of the strictly extreme points in counterclockwise order. Fewer than
// three entries means the set is degenerate (collinear or repeated).
std::vector<int> convex_hull_2d(const std::vector<Eigen::Vector2d>& pts);

struct Hull3 {
  // Triangles oriented counterclockwise seen from outside.
  std::vector<std::array<int, 3>> faces;
  // Per input point: lies on a face of the hull.
  std::vector<char> on_hull;
  // Per input point: is a vertex of the hull in the strict sense (at least
  // three distinct supporting planes meet there).
  std::vector<char> extreme;
  // Per input point: incident faces in cyclic order (empty off the hull).
  std::vector<std::vector<int>> vertex_faces;
};

// Throws degenerate_hull when all points are coplanar.
Hull3 convex_hull_3d(const std::vector<Eigen::Vector3d>& pts);

}  // namespace hypcurv
