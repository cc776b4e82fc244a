#include "hypcurv/ctransform.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace hypcurv {

namespace {

Mat support_matrix(const std::vector<Vec>& support, int m) {
  Mat s(support.size(), m + 1);
  for (size_t i = 0; i < support.size(); ++i) s.row(Eigen::Index(i)) = support[i].transpose();
  return s;
}

std::string describe(const Vec& v) {
  std::string s = "(";
  for (Eigen::Index k = 0; k < v.size(); ++k) s += (k ? ", " : "") + std::to_string(v(k));
  return s + ")";
}

}  // namespace

Mat PotentialVector::scaled_support() const {
  return values.array().exp().matrix().asDiagonal() * support_matrix(support, dim);
}

PotentialVector make_potential(int m, std::vector<Vec> support, Vec values, double psi_floor) {
  check_dim(m);
  if (Eigen::Index(support.size()) != values.size())
    fail(ErrorKind::invalid_argument, "support and potential sizes differ");
  if (support.empty()) fail(ErrorKind::invalid_argument, "empty support");
  PotentialVector p{m, std::move(support), std::move(values), {}};
  for (int i = 0; i < p.size(); ++i) {
    if (p.support[i].size() != m + 1)
      fail(ErrorKind::invalid_argument, "support point " + std::to_string(i) + " has wrong length",
           i);
    const double v = p.values(i);
    if (!std::isfinite(v) || v >= 0.0)
      fail(ErrorKind::domain_error, "psi_" + std::to_string(i) + " = " + std::to_string(v) +
                                        " is not negative", i);
    if (v > -psi_floor) {
      p.values(i) = -psi_floor;
      p.clamped.push_back(i);
    }
  }
  return p;
}

PotentialVector make_potential(const DiscreteMeasure& mu, Vec values, double psi_floor) {
  return make_potential(mu.dim, mu.points, std::move(values), psi_floor);
}

CTransformValue c_transform(const PotentialVector& psi, const Vec& eta, double tie_eps) {
  const Vec dots = support_matrix(psi.support, psi.dim) * eta;
  const Vec vals = psi.values.array().exp() * dots.array();
  double mx = -1.0;
  for (int i = 0; i < psi.size(); ++i)
    if (dots(i) > kDotFloor) mx = std::max(mx, vals(i));
  if (!(mx > 0.0)) fail(ErrorKind::uncovered_direction, "no support point within pi/2 of " +
                                                            describe(eta));
  CTransformValue out{-std::log(mx), {}};
  // Round down until phi + psi_i <= c(eta, xi_i) holds in floating point.
  for (int i = 0; i < psi.size(); ++i) {
    if (!(dots(i) > kDotFloor)) continue;
    const double c = cost(eta, psi.support[i]);
    while (std::isfinite(c) && out.value + psi.values(i) > c) out.value = std::nextafter(out.value, -INFINITY);
    if (vals(i) >= mx - tie_eps * mx) out.argmin.push_back(i);
  }
  return out;
}

GridTransform transform_grid(const PotentialVector& psi, const Grid& grid, double tie_eps) {
  if (grid.dim != psi.dim) fail(ErrorKind::invalid_argument, "grid dimension mismatch");
  const Mat x = support_matrix(psi.support, psi.dim);
  const Vec scale = psi.values.array().exp();
  const double dense = std::sin(kDensityMargin);
  const int n = psi.size();
  GridTransform out;
  out.phi.resize(grid.size());
  out.offsets.reserve(grid.size() + 1);
  out.offsets.push_back(0);
  out.cells.reserve(grid.size());
  const Eigen::Index block = 1024;
  for (Eigen::Index start = 0; start < grid.size(); start += block) {
    const Eigen::Index len = std::min(block, grid.size() - start);
    const Mat dots = x * grid.nodes.middleCols(start, len);
    for (Eigen::Index c = 0; c < len; ++c) {
      double mx = -1.0, best_dot = -1.0;
      for (int i = 0; i < n; ++i) {
        const double d = dots(i, c);
        best_dot = std::max(best_dot, d);
        if (d > kDotFloor) mx = std::max(mx, scale(i) * d);
      }
      if (!(best_dot > dense))
        fail(ErrorKind::uncovered_direction,
             "grid node " + std::to_string(start + c) + " " + describe(grid.node(start + c)) +
                 " is not covered by the support",
             long(start + c));
      out.phi(start + c) = -std::log(mx);
      for (int i = 0; i < n; ++i)
        if (dots(i, c) > kDotFloor && scale(i) * dots(i, c) >= mx - tie_eps * mx)
          out.cells.push_back(i);
      out.offsets.push_back(int(out.cells.size()));
    }
  }
  return out;
}

namespace {

// min over grid nodes of c(eta, xi) - phi(eta)
double grid_conjugate(const Grid& grid, const Vec& phi, const Vec& xi) {
  const Vec dots = grid.nodes.transpose() * xi;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < dots.size(); ++k)
    if (dots(k) > kDotFloor) best = std::min(best, -std::log(dots(k)) - phi(k));
  return best;
}

}  // namespace

PotentialVector double_convexify(const PotentialVector& psi, const Grid& grid) {
  const GridTransform t = transform_grid(psi, grid);
  PotentialVector out = psi;
  for (int i = 0; i < psi.size(); ++i)
    // max() only absorbs rounding: psi'' >= psi holds exactly in exact arithmetic.
    out.values(i) = std::max(psi.values(i), grid_conjugate(grid, t.phi, psi.support[i]));
  return out;
}

ConjugacyReport conjugacy_diagnostics(const PotentialVector& psi, const Grid& grid) {
  const GridTransform t = transform_grid(psi, grid);
  ConjugacyReport r;

  // Minimum of the extension over grid nodes and support points. Since
  // psi_ext(xi) >= -phi(xi), points are visited by decreasing phi and the scan
  // stops once -phi(xi) cannot beat the best value found.
  std::vector<std::pair<double, Vec>> eval;
  eval.reserve(grid.size() + psi.size());
  for (Eigen::Index k = 0; k < grid.size(); ++k) eval.emplace_back(t.phi(k), grid.node(k));
  for (const Vec& xi : psi.support) eval.emplace_back(c_transform(psi, xi).value, xi);
  std::sort(eval.begin(), eval.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  double min_ext = std::numeric_limits<double>::infinity();
  for (const auto& [phi_xi, xi] : eval) {
    if (-phi_xi >= min_ext) break;
    min_ext = std::min(min_ext, grid_conjugate(grid, t.phi, xi));
  }
  r.max_phi_plus_min_psi = t.phi.maxCoeff() + min_ext;
  r.min_phi_plus_max_psi = t.phi.minCoeff() + psi.values.maxCoeff();

  double longest = 0.0;
  for (const auto& [a, b] : grid.edges) {
    const double d = sphere_distance(grid.node(a), grid.node(b));
    longest = std::max(longest, d);
    r.lipschitz_estimate = std::max(r.lipschitz_estimate, std::fabs(t.phi(a) - t.phi(b)) / d);
  }
  for (Eigen::Index k = 0; k < grid.size(); ++k)
    r.max_argmin_distance = std::max(
        r.max_argmin_distance, sphere_distance(grid.node(k), psi.support[t.cells[t.offsets[k]]]));
  const double reach = r.max_argmin_distance + longest;
  r.lipschitz_bound =
      reach < std::numbers::pi / 2 ? std::tan(reach) : std::numeric_limits<double>::infinity();
  return r;
}

}  // namespace hypcurv
