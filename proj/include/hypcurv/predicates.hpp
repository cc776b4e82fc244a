#pragma once

// Orientation predicates with a floating-point filter and an exact
// expansion-arithmetic fallback.

#include <Eigen/Core>

namespace hypcurv {

// Sign of det[b - a, c - a].
int orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c);

// Sign of det[b - a, c - a, d - a]; positive when d lies on the side of (b-a)x(c-a).
int orient3d(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
             const Eigen::Vector3d& d);

bool collinear3d(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c);

}  // namespace hypcurv
