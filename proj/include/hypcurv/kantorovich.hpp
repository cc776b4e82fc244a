#pragma once

// The nonlinear Kantorovich functional
//   K(psi) = int F(phi) dsigma + sum_i a_i G(psi_i),   phi = psi^c,
// its gradient and the per-cell Euler-Lagrange balance.

#include <Eigen/Core>

#include <vector>

#include "hypcurv/ctransform.hpp"
#include "hypcurv/measures.hpp"
#include "hypcurv/quadrature.hpp"

namespace hypcurv {

// F(u) = int_1^u (1 - e^{-2s})^{-(m+1)/2} ds, u > 0.
double F_fn(double u, int m);
// f = F'
double f_fn(double u, int m);
// G(v) = v - ln(1 + sqrt(1 - e^{2v})), v < 0.
double G_fn(double v);
// g = G' = (1 - e^{2v})^{-1/2}
double g_fn(double v);

// Grid discretization: phi at nodes, nodes assigned to their argmin cells
// with ties split equally.
double functional_K(const PotentialVector& psi, const DiscreteMeasure& mu, const Grid& grid);
// a_i g(psi_i) - sum over nodes of cell i of weight f(phi)
Vec gradient_K(const PotentialVector& psi, const DiscreteMeasure& mu, const Grid& grid);
// |cell mass_i - a_i g(psi_i)| / (a_i g(psi_i))
Vec el_residual(const PotentialVector& psi, const DiscreteMeasure& mu, const Grid& grid);

enum class CellMethod { exact, grid };

struct Evaluation {
  double K = 0.0;
  Vec cell_mass;  // int over V_i of f(phi)
  Vec gradient;
  Vec el_residual;
};

// CellMethod::exact integrates over the true cells V_i, which are the normal
// cones of the Euclidean hull of the points e^{psi_i} xi_i: closed-form cell
// masses for m = 1, subdivided spherical-triangle rules for m = 2. The grid
// only sets the m = 1 panel width for the F integral. Non-extreme points have
// empty cells.
Evaluation evaluate(const PotentialVector& psi, const DiscreteMeasure& mu, const Grid& grid,
                    CellMethod method = CellMethod::exact);

}  // namespace hypcurv
