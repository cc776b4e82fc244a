#include "hypcurv/solver.hpp"

#include <algorithm>
#include <chrono>
#include <random>
#include <string>

namespace hypcurv {

namespace {

void check_config(const SolverConfig& c) {
  auto bad = [](const std::string& what) { fail(ErrorKind::invalid_argument, what); };
  if (!(c.tol_el > 0)) bad("tol_el must be positive");
  if (c.max_iter <= 0) bad("max_iter must be positive");
  if (!(c.armijo_c1 > 0 && c.armijo_c1 < 1)) bad("armijo c1 must lie in (0, 1)");
  if (!(c.backtrack > 0 && c.backtrack < 1)) bad("backtrack factor must lie in (0, 1)");
  if (!(c.initial_step > 0)) bad("initial step must be positive");
  if (!(c.psi_floor > 0)) bad("psi_floor must be positive");
  if (c.restarts < 0) bad("restarts must be nonnegative");
}

struct Run {
  PotentialVector psi;
  Evaluation eval;
  std::vector<double> K, grad;
  int iterations = 0;
  int clamp_steps = 0;
  bool converged = false;
  std::string stop_reason;
};

constexpr int kMaxBacktracks = 60;

Run ascend(const DiscreteMeasure& mu, const Vec& start, const Grid& grid, const SolverConfig& c) {
  const double tol_g = c.grad_tolerance(mu.dim);
  Run run;
  run.psi = make_potential(mu, start, c.psi_floor);
  run.eval = evaluate(run.psi, mu, grid, c.cells);
  Vec prev_psi, prev_grad;
  for (;;) {
    const double gnorm = run.eval.gradient.cwiseAbs().maxCoeff();
    run.K.push_back(run.eval.K);
    run.grad.push_back(gnorm);
    if (gnorm <= tol_g && run.eval.el_residual.maxCoeff() <= c.tol_el) {
      run.converged = true;
      run.stop_reason = "converged";
      return run;
    }
    if (run.iterations >= c.max_iter) {
      run.stop_reason = "iteration limit";
      return run;
    }
    const Vec g = run.eval.gradient;
    // Barzilai-Borwein trial step from the last accepted move; the Armijo
    // test below keeps the ascent monotone.
    double step = c.initial_step;
    if (run.iterations > 0) {
      const Vec dpsi = run.psi.values - prev_psi, dg = g - prev_grad;
      const double curv = std::fabs(dpsi.dot(dg));
      if (curv > 0) step = std::clamp(dpsi.squaredNorm() / curv, 1e-8, 1e8);
    }
    prev_psi = run.psi.values;
    prev_grad = g;
    bool accepted = false;
    for (int b = 0; b < kMaxBacktracks && !accepted; ++b, step *= c.backtrack) {
      PotentialVector trial = run.psi;
      trial.values = (run.psi.values + step * g).cwiseMin(-c.psi_floor);
      const bool clamped = (trial.values.array() == -c.psi_floor).any();
      Evaluation ev;
      try {
        ev = evaluate(trial, mu, grid, c.cells);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::uncovered_direction) throw;
        continue;
      }
      if (ev.K >= run.eval.K + c.armijo_c1 * g.dot(trial.values - run.psi.values)) {
        run.psi = std::move(trial);
        run.eval = std::move(ev);
        run.clamp_steps += clamped;
        accepted = true;
      }
    }
    if (!accepted) {
      run.stop_reason = "line search made no progress";
      return run;
    }
    ++run.iterations;
  }
}

}  // namespace

double ball_radius_guess(const DiscreteMeasure& mu) {
  const double ratio = mu.total() / sphere_measure(mu.dim);
  return std::acosh(std::pow(ratio, 1.0 / mu.dim));
}

SolveReport solve(const DiscreteMeasure& mu, const SolverConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  check_dim(mu.dim);
  check_config(config);
  SolveReport report;
  report.config = config;
  const CheckMode mode =
      mu.size() <= kMaxExhaustive ? CheckMode{} : CheckMode::sampled(4096, config.seed);
  report.conditions = check_conditions(mu, mode);
  if (!report.conditions.all_ok()) {
    if (!config.force)
      throw PreconditionError("precondition-failed: the measure violates the existence conditions",
                              report.conditions);
    report.warnings.push_back("existence conditions fail; solving anyway");
  }
  const Grid& grid = cached_grid(mu.dim, config.grid_level);

  double r0 = ball_radius_guess(mu);
  if (!(r0 > 0) || !std::isfinite(r0)) {
    report.warnings.push_back("total mass does not exceed |S^m|; starting from r = 0.5");
    r0 = 0.5;
  }
  const Vec psi0 = Vec::Constant(mu.size(), std::log(std::tanh(r0)));

  std::optional<Run> best;
  for (int k = 0; k <= config.restarts; ++k) {
    Vec start = psi0;
    if (k > 0) {
      std::mt19937_64 rng(config.seed + std::uint64_t(k));
      std::uniform_real_distribution<double> u(-0.2, 0.2);
      for (Eigen::Index i = 0; i < start.size(); ++i) start(i) *= 1.0 + u(rng);
    }
    Run run = ascend(mu, start, grid, config);
    report.restarts_used = k;
    const bool better = !best || (run.converged && !best->converged) ||
                        (run.converged == best->converged && run.eval.K > best->eval.K);
    if (better) best = std::move(run);
    if (best->converged) break;
  }

  report.psi = best->psi;
  report.K_history = std::move(best->K);
  report.grad_history = std::move(best->grad);
  report.el_residuals = best->eval.el_residual;
  report.iterations = best->iterations;
  report.converged = best->converged;
  report.stop_reason = best->stop_reason;
  if (best->clamp_steps > 0)
    report.warnings.push_back(std::to_string(best->clamp_steps) +
                              " steps hit psi_floor; some radii are very large");
  if (!report.psi.clamped.empty()) report.warnings.push_back("initial potential was clamped");
  try {
    report.body = extract_body(report.psi, mu);
  } catch (const Error& e) {
    report.warnings.push_back(std::string("no body: ") + e.what());
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

HyperbolicPolytope extract_body(const PotentialVector& psi, const DiscreteMeasure& mu) {
  if (psi.size() != mu.size()) fail(ErrorKind::invalid_argument, "potential and measure sizes differ");
  Vec r(psi.size());
  for (int i = 0; i < psi.size(); ++i) {
    const double v = psi.values(i);
    if (!(v < -kPsiFloor))
      fail(ErrorKind::domain_error, "psi_" + std::to_string(i) + " is not below -psi_floor", i);
    // artanh(e^v) without cancellation near v = 0
    r(i) = 0.5 * (std::log1p(std::exp(v)) - std::log(-std::expm1(v)));
  }
  return from_vertices(mu.dim, mu.points, r);
}

}  // namespace hypcurv
