#include "hypcurv/kantorovich.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <string>

#include "hypcurv/hull.hpp"

namespace hypcurv {

using std::numbers::pi;

namespace {

void check_u(double u) {
  if (!(u > 0.0) || std::isnan(u)) fail(ErrorKind::domain_error, "F, f need u > 0, got " + std::to_string(u));
}

void check_v(double v) {
  if (!(v < 0.0)) fail(ErrorKind::domain_error, "G, g need v < 0, got " + std::to_string(v));
}

// Antiderivatives without the constant. For m = 2, artanh(w) = u + ln(1 + w)
// avoids cancellation as w -> 1.
double F_raw(double u, int m) {
  if (m == 1) return u + 0.5 * std::log(-std::expm1(-2.0 * u));
  const double w = std::sqrt(-std::expm1(-2.0 * u));
  return u + std::log1p(w) - 1.0 / w;
}

const double kC1 = -F_raw(1.0, 1);
const double kC2 = -F_raw(1.0, 2);

void check_pair(const PotentialVector& psi, const DiscreteMeasure& mu) {
  if (psi.dim != mu.dim || psi.size() != mu.size())
    fail(ErrorKind::invalid_argument, "potential and measure supports differ");
}

Eigen::Vector2d unit_normal(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d d = b - a;
  return Eigen::Vector2d(d.y(), -d.x()).normalized();
}

constexpr double kMinPiece = 1e-4;

[[noreturn]] void uncovered(const std::string& what) {
  fail(ErrorKind::uncovered_direction, what + ": support does not surround the origin");
}

// Returns the F integral; fills cell masses.
double exact_m1(const PotentialVector& psi, const Grid& grid, Vec& mass) {
  const int n = psi.size();
  const Mat k = psi.scaled_support();
  std::vector<Eigen::Vector2d> q(n);
  for (int i = 0; i < n; ++i) q[i] = k.row(i).transpose();
  const std::vector<int> h = convex_hull_2d(q);
  const int nh = int(h.size());
  if (nh < 3) uncovered("hull is degenerate");
  std::vector<double> theta(nh);
  for (int e = 0; e < nh; ++e) {
    const Eigen::Vector2d nrm = unit_normal(q[h[e]], q[h[(e + 1) % nh]]);
    if (!(nrm.dot(q[h[e]]) > kDotFloor)) uncovered("edge normal at angle " + std::to_string(std::atan2(nrm.y(), nrm.x())));
    theta[e] = std::atan2(nrm.y(), nrm.x());
  }
  const double panel = 2.0 * pi / double(grid.size());
  CompensatedSum total;
  for (int e = 0; e < nh; ++e) {
    const int i = h[e];
    const double t1 = theta[(e + nh - 1) % nh];
    double len = theta[e] - t1;
    if (len <= 0.0) len += 2.0 * pi;
    const double ti = std::atan2(psi.support[i](1), psi.support[i](0));
    const double u1 = std::remainder(t1 - ti, 2.0 * pi), u2 = u1 + len;
    const double c = g_fn(psi.values(i));
    mass(i) = c * (std::atan(c * std::tan(u2)) - std::atan(c * std::tan(u1)));
    const int pieces = std::max(1, int(std::ceil(len / panel)));
    const double step = len / pieces;
    const double p = psi.values(i);
    for (int j = 0; j < pieces; ++j)
      total.add(gauss_integral([&](double u) { return F_fn(-p - std::log(std::cos(u)), 1); },
                               u1 + j * step, u1 + (j + 1) * step));
  }
  return total.value();
}

double exact_m2(const PotentialVector& psi, Vec& mass) {
  const int n = psi.size();
  const Mat k = psi.scaled_support();
  std::vector<Eigen::Vector3d> q(n);
  for (int i = 0; i < n; ++i) q[i] = k.row(i).transpose();
  Hull3 hull;
  try {
    hull = convex_hull_3d(q);
  } catch (const Error&) {
    uncovered("hull is degenerate");
  }
  std::vector<Eigen::Vector3d> normal(hull.faces.size());
  for (size_t t = 0; t < hull.faces.size(); ++t) {
    const auto& f = hull.faces[t];
    normal[t] = (q[f[1]] - q[f[0]]).cross(q[f[2]] - q[f[0]]).normalized();
    if (!(normal[t].dot(q[f[0]]) > kDotFloor)) uncovered("facet " + std::to_string(t));
  }
  CompensatedSum total;
  PointRule rule;
  for (int i = 0; i < n; ++i) {
    if (!hull.extreme[i]) continue;
    const auto& ring = hull.vertex_faces[i];
    Eigen::Vector3d centre = Eigen::Vector3d::Zero();
    for (int t : ring) centre += normal[t];
    centre.normalize();
    const Eigen::Vector3d xi = psi.support[i];
    const double p = psi.values(i);
    // F(phi) is singular where phi = 0, at complex distance rho =
    // acosh(e^{-psi}) from xi, and where xi . eta = 0, which the cell
    // approaches when o is close to a facet. Pieces are kept at half the
    // distance to either, but not below kMinPiece so the rule stays bounded
    // for nearly degenerate hulls.
    const double rho = std::acosh(std::exp(-p));
    const TriangleRefine refine = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                      const Eigen::Vector3d& c) {
      const double size = max_edge_angle(a, b, c);
      const double gap = std::asin(std::min({xi.dot(a), xi.dot(b), xi.dot(c), 1.0}));
      const double d = std::max(
          0.0, std::min({sphere_distance(xi, a), sphere_distance(xi, b), sphere_distance(xi, c)}) -
                   size);
      const double reach = std::min({0.3, 0.5 * std::hypot(d, rho), 0.5 * gap});
      return size > std::max(kMinPiece, reach);
    };
    rule.points.clear();
    rule.weights.clear();
    for (size_t s = 0; s < ring.size(); ++s)
      append_spherical_triangle_rule(centre, normal[ring[s]], normal[ring[(s + 1) % ring.size()]],
                                     rule, refine);
    CompensatedSum cell_f;
    for (size_t j = 0; j < rule.points.size(); ++j) {
      const double u = -p - std::log(xi.dot(rule.points[j]));
      total.add(rule.weights[j] * F_fn(u, 2));
      cell_f.add(rule.weights[j] * f_fn(u, 2));
    }
    mass(i) = cell_f.value();
  }
  return total.value();
}

double F_integral_grid(const PotentialVector& psi, const Grid& grid, Vec& mass) {
  const GridTransform t = transform_grid(psi, grid);
  CompensatedSum total;
  std::vector<CompensatedSum> cells(psi.size());
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const double w = grid.weights(j);
    total.add(w * F_fn(t.phi(j), psi.dim));
    const double share = w * f_fn(t.phi(j), psi.dim) / t.ties(j);
    for (int c = t.offsets[j]; c < t.offsets[j + 1]; ++c) cells[t.cells[c]].add(share);
  }
  for (int i = 0; i < psi.size(); ++i) mass(i) = cells[i].value();
  return total.value();
}

}  // namespace

double F_fn(double u, int m) {
  check_dim(m);
  check_u(u);
  return F_raw(u, m) + (m == 1 ? kC1 : kC2);
}

double f_fn(double u, int m) {
  check_dim(m);
  check_u(u);
  const double s = -std::expm1(-2.0 * u);
  return m == 1 ? 1.0 / s : 1.0 / (s * std::sqrt(s));
}

double G_fn(double v) {
  check_v(v);
  return v - std::log1p(std::sqrt(-std::expm1(2.0 * v)));
}

double g_fn(double v) {
  check_v(v);
  return 1.0 / std::sqrt(-std::expm1(2.0 * v));
}

Evaluation evaluate(const PotentialVector& psi, const DiscreteMeasure& mu, const Grid& grid,
                    CellMethod method) {
  check_pair(psi, mu);
  if (grid.dim != psi.dim) fail(ErrorKind::invalid_argument, "grid dimension mismatch");
  const int n = psi.size();
  Evaluation ev;
  ev.cell_mass = Vec::Zero(n);
  double fint;
  if (method == CellMethod::grid)
    fint = F_integral_grid(psi, grid, ev.cell_mass);
  else if (psi.dim == 1)
    fint = exact_m1(psi, grid, ev.cell_mass);
  else
    fint = exact_m2(psi, ev.cell_mass);

  CompensatedSum k;
  k.add(fint);
  ev.gradient.resize(n);
  ev.el_residual.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v = psi.values(i);
    k.add(mu.weights(i) * G_fn(v));
    const double target = mu.weights(i) * g_fn(v);
    ev.gradient(i) = target - ev.cell_mass(i);
    ev.el_residual(i) = std::fabs(ev.gradient(i)) / target;
  }
  ev.K = k.value();
  return ev;
}

double functional_K(const PotentialVector& psi, const DiscreteMeasure& mu, const Grid& grid) {
  return evaluate(psi, mu, grid, CellMethod::grid).K;
}

Vec gradient_K(const PotentialVector& psi, const DiscreteMeasure& mu, const Grid& grid) {
  return evaluate(psi, mu, grid, CellMethod::grid).gradient;
}

Vec el_residual(const PotentialVector& psi, const DiscreteMeasure& mu, const Grid& grid) {
  return evaluate(psi, mu, grid, CellMethod::grid).el_residual;
}

}  // namespace hypcurv
