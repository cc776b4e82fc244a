#pragma once

// Maximizes the Kantorovich functional over potentials on the support of a
// discrete measure and rebuilds the polytope with that curvature measure.

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypcurv/ctransform.hpp"
#include "hypcurv/kantorovich.hpp"
#include "hypcurv/measures.hpp"
#include "hypcurv/polytope.hpp"

namespace hypcurv {

struct SolverConfig {
  int grid_level = kDefaultGridLevel;
  double tol_grad = 0.0;  // <= 0 selects 1e-8 * |S^m|
  double tol_el = 1e-6;
  int max_iter = 5000;
  double armijo_c1 = 1e-4;
  double backtrack = 0.5;
  double initial_step = 1.0;
  double psi_floor = kPsiFloor;
  std::uint64_t seed = 1;
  int restarts = 3;
  bool force = false;  // solve even when the conditions fail
  CellMethod cells = CellMethod::exact;

  double grad_tolerance(int m) const { return tol_grad > 0 ? tol_grad : 1e-8 * sphere_measure(m); }
};

struct SolveReport {
  PotentialVector psi;
  std::vector<double> K_history;
  std::vector<double> grad_history;  // sup norm
  Vec el_residuals;
  std::optional<HyperbolicPolytope> body;
  bool converged = false;
  int iterations = 0;   // of the reported run
  int restarts_used = 0;
  std::string stop_reason;
  ConditionReport conditions;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;
  SolverConfig config;
};

class PreconditionError : public Error {
 public:
  PreconditionError(const std::string& what, ConditionReport report)
      : Error(ErrorKind::precondition_failed, what), report_(std::move(report)) {}
  const ConditionReport& report() const { return report_; }

 private:
  ConditionReport report_;
};

// r_0 = arccosh((mu(S^m) / |S^m|)^{1/m}), the radius of the ball with the same total curvature.
double ball_radius_guess(const DiscreteMeasure& mu);

// Throws PreconditionError when the conditions fail and config.force is off.
SolveReport solve(const DiscreteMeasure& mu, const SolverConfig& config = {});

// r_i = artanh(e^{psi_i}); throws non-extreme-vertex when a point is not a hull vertex.
HyperbolicPolytope extract_body(const PotentialVector& psi, const DiscreteMeasure& mu);

}  // namespace hypcurv
