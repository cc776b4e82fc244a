#include "hypcurv/quadrature.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace hypcurv {

double Grid::angle(Eigen::Index i) const { return std::atan2(nodes(1, i), nodes(0, i)); }

namespace {

Grid circle_grid(int level) {
  const Eigen::Index n = Eigen::Index(1) << (level + 6);
  Grid g;
  g.dim = 1;
  g.level = level;
  g.nodes.resize(2, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * double(k) / double(n);
    g.nodes(0, k) = std::cos(t);
    g.nodes(1, k) = std::sin(t);
    g.edges.emplace_back(int(k), int((k + 1) % n));
  }
  g.weights = Vec::Constant(n, 2.0 * std::numbers::pi / double(n));
  return g;
}

Grid icosphere_grid(int level) {
  const double phi = 0.5 * (1.0 + std::sqrt(5.0));
  std::vector<Eigen::Vector3d> v;
  for (double a : {-1.0, 1.0})
    for (double b : {-phi, phi}) {
      v.emplace_back(0, a, b);
      v.emplace_back(a, b, 0);
      v.emplace_back(b, 0, a);
    }
  std::vector<std::array<int, 3>> tri;
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      for (int k = j + 1; k < 12; ++k) {
        if (std::fabs((v[i] - v[j]).norm() - 2) > 1e-9) continue;
        if (std::fabs((v[j] - v[k]).norm() - 2) > 1e-9) continue;
        if (std::fabs((v[i] - v[k]).norm() - 2) > 1e-9) continue;
        if ((v[j] - v[i]).cross(v[k] - v[i]).dot(v[i]) > 0)
          tri.push_back({i, j, k});
        else
          tri.push_back({i, k, j});
      }
  for (auto& p : v) p.normalize();

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = int(v.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(tri.size() * 4);
    for (const auto& t : tri) {
      const int ab = midpoint(t[0], t[1]), bc = midpoint(t[1], t[2]), ca = midpoint(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tri.swap(next);
  }

  Grid g;
  g.dim = 2;
  g.level = level;
  const Eigen::Index n = Eigen::Index(v.size());
  g.nodes.resize(3, n);
  for (Eigen::Index i = 0; i < n; ++i) g.nodes.col(i) = v[i];
  g.weights = Vec::Zero(n);
  std::map<std::pair<int, int>, int> edges;
  for (const auto& t : tri) {
    const double a = spherical_triangle_area(v[t[0]], v[t[1]], v[t[2]]) / 3.0;
    for (int k = 0; k < 3; ++k) {
      g.weights(t[k]) += a;
      edges.emplace(std::minmax(t[k], t[(k + 1) % 3]), 0);
    }
  }
  g.weights *= 4.0 * std::numbers::pi / g.weights.sum();
  for (const auto& e : edges) g.edges.push_back(e.first);
  g.triangles = std::move(tri);
  return g;
}

}  // namespace

Grid build_grid(int m, int level) {
  check_dim(m);
  if (level < 0 || level > (m == 1 ? 16 : 9))
    fail(ErrorKind::invalid_argument, "grid level " + std::to_string(level) + " out of range");
  return m == 1 ? circle_grid(level) : icosphere_grid(level);
}

double integrate(const Vec& values, const Grid& grid) {
  if (values.size() != grid.size())
    fail(ErrorKind::invalid_argument, "value count does not match grid");
  CompensatedSum s;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(values(i)))
      fail(ErrorKind::integration_failure, "non-finite integrand at node " + std::to_string(i), i);
    s.add(grid.weights(i) * values(i));
  }
  return s.value();
}

const GaussRule& gauss_legendre(int n) {
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

std::vector<CellArc> circle_cell_arcs(const Grid& grid, const std::function<int(double)>& cell) {
  if (grid.dim != 1) fail(ErrorKind::invalid_argument, "circle_cell_arcs needs m = 1");
  const Eigen::Index n = grid.size();
  const double step = 2.0 * std::numbers::pi / double(n);
  std::vector<CellArc> arcs;
  arcs.reserve(n + 16);
  int cl = cell(0.0);
  for (Eigen::Index k = 0; k < n; ++k) {
    double pos = step * double(k);
    const double r = step * double(k + 1);
    const int cr = cell(r);
    while (cl != cr) {
      double lo = pos, hi = r;
      while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (cell(mid) == cl)
          lo = mid;
        else
          hi = mid;
      }
      arcs.push_back({pos, hi, cl});
      pos = hi;
      cl = cell(hi);
    }
    if (r > pos) arcs.push_back({pos, r, cr});
    cl = cr;
  }
  return arcs;
}

const Grid& cached_grid(int m, int level) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<Grid>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{m, level}];
  if (!slot) slot = std::make_unique<Grid>(build_grid(m, level));
  return *slot;
}

double spherical_triangle_area(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                               const Eigen::Vector3d& c) {
  const double det = std::fabs(a.dot(b.cross(c)));
  return 2.0 * std::atan2(det, 1.0 + a.dot(b) + b.dot(c) + c.dot(a));
}

namespace {

double max_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d an = a.normalized(), bn = b.normalized(), cn = c.normalized();
  return std::max({sphere_distance(an, bn), sphere_distance(bn, cn), sphere_distance(cn, an)});
}

void flat_triangle_rule(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                        const Eigen::Vector3d& c, PointRule& rule, const TriangleRefine& refine,
                        int n, int depth) {
  if (depth < 40 && refine(a.normalized(), b.normalized(), c.normalized())) {
    const Eigen::Vector3d ab = 0.5 * (a + b), bc = 0.5 * (b + c), ca = 0.5 * (c + a);
    flat_triangle_rule(a, ab, ca, rule, refine, n, depth + 1);
    flat_triangle_rule(b, bc, ab, rule, refine, n, depth + 1);
    flat_triangle_rule(c, ca, bc, rule, refine, n, depth + 1);
    flat_triangle_rule(ab, bc, ca, rule, refine, n, depth + 1);
    return;
  }
  const GaussRule& g = gauss_legendre(n);
  const double det = std::fabs(a.dot(b.cross(c)));
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (g.x[i] + 1.0);
    for (int j = 0; j < n; ++j) {
      const double t = 0.5 * (g.x[j] + 1.0);
      const Eigen::Vector3d p = a + s * (b - a) + (1.0 - s) * t * (c - a);
      const double len = p.norm();
      rule.points.push_back(p / len);
      rule.weights.push_back(0.25 * g.w[i] * g.w[j] * (1.0 - s) * det / (len * len * len));
    }
  }
}

}  // namespace

void append_spherical_triangle_rule(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                    const Eigen::Vector3d& c, PointRule& rule, double max_edge,
                                    int n) {
  flat_triangle_rule(
      a, b, c, rule,
      [max_edge](const Eigen::Vector3d& p, const Eigen::Vector3d& q, const Eigen::Vector3d& r) {
        return max_angle(p, q, r) > max_edge;
      },
      n, 0);
}

void append_spherical_triangle_rule(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                    const Eigen::Vector3d& c, PointRule& rule,
                                    const TriangleRefine& refine, int n) {
  flat_triangle_rule(a, b, c, rule, refine, n, 0);
}

double max_edge_angle(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  return max_angle(a, b, c);
}

}  // namespace hypcurv
