#pragma once

// c-transforms for the cost c(eta, xi) = -ln(eta . xi) with potentials stored
// on a finite support. phi(eta) = min_i c(eta, xi_i) - psi_i
//                              = -ln max_i e^{psi_i} (xi_i . eta).

#include <Eigen/Core>

#include <vector>

#include "hypcurv/measures.hpp"
#include "hypcurv/minkowski.hpp"
#include "hypcurv/polytope.hpp"
#include "hypcurv/quadrature.hpp"

namespace hypcurv {

inline constexpr double kPsiFloor = 1e-10;
// Support points must come within pi/2 - kDensityMargin of every direction.
inline constexpr double kDensityMargin = 1e-6;

struct PotentialVector {
  int dim = 0;
  std::vector<Vec> support;
  Vec values;               // psi_i < 0
  std::vector<int> clamped;  // indices raised from [-floor, 0) to -floor

  int size() const { return static_cast<int>(support.size()); }
  // Row i is e^{psi_i} xi_i.
  Mat scaled_support() const;
};

// Rejects psi_i >= 0 and non-finite values; clamps values in [-floor, 0).
PotentialVector make_potential(int m, std::vector<Vec> support, Vec values,
                               double psi_floor = kPsiFloor);
PotentialVector make_potential(const DiscreteMeasure& mu, Vec values,
                               double psi_floor = kPsiFloor);

struct CTransformValue {
  double value = 0.0;
  std::vector<int> argmin;
};

CTransformValue c_transform(const PotentialVector& psi, const Vec& eta, double tie_eps = kTieEps);

// phi and the argmin sets at every grid node. argmin sets are stored
// compressed: node k owns cells[offsets[k] .. offsets[k+1]).
struct GridTransform {
  Vec phi;
  std::vector<int> offsets;
  std::vector<int> cells;

  int ties(Eigen::Index k) const { return offsets[k + 1] - offsets[k]; }
};

// Throws uncovered-direction naming the first node farther than
// pi/2 - kDensityMargin from every support point.
GridTransform transform_grid(const PotentialVector& psi, const Grid& grid,
                             double tie_eps = kTieEps);

// psi''_i = min over grid nodes of c(eta, xi_i) - phi(eta), never below psi_i.
PotentialVector double_convexify(const PotentialVector& psi, const Grid& grid);

struct ConjugacyReport {
  double max_phi_plus_min_psi = 0.0;
  double min_phi_plus_max_psi = 0.0;
  double lipschitz_estimate = 0.0;  // max difference quotient over grid edges
  double max_argmin_distance = 0.0;  // max over nodes of distance to the argmin point
  double lipschitz_bound = 0.0;     // tan(max_argmin_distance + longest edge)
};

// min psi is taken over the extension of psi by the c-transform of the grid
// phi, evaluated at grid nodes and support points; max psi over the support.
ConjugacyReport conjugacy_diagnostics(const PotentialVector& psi, const Grid& grid);

}  // namespace hypcurv
