#include "hypcurv/polytope.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <numbers>
#include <string>

#include "hypcurv/hull.hpp"

namespace hypcurv {

using std::numbers::pi;

namespace {

void build_m1(HyperbolicPolytope& p) {
  const int n = p.size();
  std::vector<Eigen::Vector2d> q(n);
  for (int i = 0; i < n; ++i) q[i] = p.klein.row(i).transpose();
  const std::vector<int> h = convex_hull_2d(q);
  if (h.size() < 3) fail(ErrorKind::degenerate_hull, "Klein points are collinear");
  std::vector<char> on(n, 0);
  for (int i : h) on[i] = 1;
  for (int i = 0; i < n; ++i)
    if (!on[i]) fail(ErrorKind::non_extreme_vertex, "vertex " + std::to_string(i), i);

  p.cyclic_order = h;
  p.vertex_facets.assign(n, {});
  const int k = static_cast<int>(h.size());
  for (int e = 0; e < k; ++e) {
    const int a = h[e], b = h[(e + 1) % k];
    const Eigen::Vector2d d = q[b] - q[a];
    KleinFacet f;
    f.normal = Eigen::Vector2d(d.y(), -d.x()).normalized();
    f.h = f.normal.dot(Vec(q[a]));
    f.vertices = {a, b};
    if (f.h < kMinFacetSupport)
      fail(ErrorKind::origin_not_interior, "edge " + std::to_string(e) + " passes within " +
                                               std::to_string(f.h) + " of o");
    p.facets.push_back(std::move(f));
  }
  for (int e = 0; e < k; ++e) p.vertex_facets[h[e]] = {(e + k - 1) % k, e};
}

void build_m2(HyperbolicPolytope& p) {
  const int n = p.size();
  std::vector<Eigen::Vector3d> q(n);
  for (int i = 0; i < n; ++i) q[i] = p.klein.row(i).transpose();
  const Hull3 h = convex_hull_3d(q);
  for (int i = 0; i < n; ++i)
    if (!h.extreme[i]) fail(ErrorKind::non_extreme_vertex, "vertex " + std::to_string(i), i);

  // Coplanar triangles form one facet.
  std::vector<int> facet_of(h.faces.size(), -1);
  for (size_t t = 0; t < h.faces.size(); ++t) {
    const auto& f = h.faces[t];
    const Eigen::Vector3d nrm = (q[f[1]] - q[f[0]]).cross(q[f[2]] - q[f[0]]).normalized();
    const double hs = nrm.dot(q[f[0]]);
    if (hs < kMinFacetSupport)
      fail(ErrorKind::origin_not_interior, "facet plane passes within " + std::to_string(hs) +
                                               " of o");
    int id = -1;
    for (size_t k = 0; k < p.facets.size(); ++k)
      if ((p.facets[k].normal - Vec(nrm)).norm() < 1e-12 && std::fabs(p.facets[k].h - hs) < 1e-12) {
        id = int(k);
        break;
      }
    if (id < 0) {
      p.facets.push_back({Vec(nrm), hs, {}});
      id = int(p.facets.size()) - 1;
    }
    facet_of[t] = id;
    for (int v : f) {
      auto& vs = p.facets[id].vertices;
      if (std::find(vs.begin(), vs.end(), v) == vs.end()) vs.push_back(v);
    }
  }
  p.vertex_facets.assign(n, {});
  for (int v = 0; v < n; ++v) {
    auto& ring = p.vertex_facets[v];
    for (int t : h.vertex_faces[v])
      if (ring.empty() || ring.back() != facet_of[t]) ring.push_back(facet_of[t]);
    while (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
  }
}

// Orthonormal basis of T_x H^{m+1} at x = c_xi(r): the radial direction then
// spatial vectors orthogonal to xi.
std::vector<Vec> tangent_basis(const Vec& xi, double r) {
  const int n = int(xi.size());
  std::vector<Vec> b{desitter_point(xi, r)};
  Mat proj = Mat::Identity(n, n) - xi * xi.transpose();
  for (int k = 0; k < n && int(b.size()) < n; ++k) {
    Vec v = proj.col(k);
    for (size_t j = 1; j < b.size(); ++j) v -= v.dot(b[j].tail(n)) * b[j].tail(n);
    if (v.norm() < 0.5) continue;
    Vec e = Vec::Zero(n + 1);
    e.tail(n) = v.normalized();
    b.push_back(e);
  }
  return b;
}

Vec tangent_coords(const std::vector<Vec>& basis, const Vec& v) {
  Vec c(basis.size());
  for (size_t k = 0; k < basis.size(); ++k) c(Eigen::Index(k)) = lorentz_dot(v, basis[k]);
  return c;
}

// Unit tangent at x of the geodesic towards y, in the given basis.
Vec direction_to(const std::vector<Vec>& basis, const Vec& x, const Vec& y) {
  const Vec u = y + lorentz_dot(x, y) * x;
  return tangent_coords(basis, u).normalized();
}

double angle2(const Vec& a, const Vec& b) {
  return std::atan2(std::fabs(a(0) * b(1) - a(1) * b(0)), a.dot(b));
}

struct IntegralRoute {
  Vec alpha;
  double polar_area = 0.0;
};

int argmax_cell(const HyperbolicPolytope& p, const Vec& eta) {
  Eigen::Index i;
  (p.klein * eta).maxCoeff(&i);
  return int(i);
}

IntegralRoute integral_route(const HyperbolicPolytope& p, const Grid& grid) {
  if (grid.dim != p.dim) fail(ErrorKind::invalid_argument, "grid dimension mismatch");
  const int m = p.dim;
  const int n = p.size();
  IntegralRoute out;
  out.alpha = Vec::Zero(n);
  Vec cosh_r = p.radii.array().cosh();

  if (m == 1) {
    const auto arcs =
        circle_cell_arcs(grid, [&](double t) { return argmax_cell(p, circle_point(t)); });
    CompensatedSum total;
    std::vector<CompensatedSum> acc(n);
    for (const auto& a : arcs) {
      const Vec k = p.klein.row(a.cell).transpose();
      const double v = gauss_integral(
          [&](double t) {
            const double s = k.dot(circle_point(t));
            return 1.0 / ((1.0 - s) * (1.0 + s));
          },
          a.a, a.b);
      acc[a.cell].add(v / cosh_r(a.cell));
      total.add(v / cosh_r(a.cell));
    }
    for (int i = 0; i < n; ++i) out.alpha(i) = acc[i].value();
    out.polar_area = total.value();
    return out;
  }

  // Each cell is a convex spherical polygon, so a grid triangle whose corners
  // share a cell lies inside it and takes the vertex rule. Triangles with
  // mixed corners are subdivided until the pieces agree or reach kMinCut and
  // integrated with a Gauss rule, each point assigned to its cell.
  constexpr double kMinCut = 2e-4;
  std::vector<int> node_cell(grid.size());
  const Eigen::Index block = 1024;
  for (Eigen::Index start = 0; start < grid.size(); start += block) {
    const Eigen::Index len = std::min(block, grid.size() - start);
    const Mat vals = p.klein * grid.nodes.middleCols(start, len);
    for (Eigen::Index c = 0; c < len; ++c) {
      Eigen::Index i;
      vals.col(c).maxCoeff(&i);
      node_cell[start + c] = int(i);
    }
  }
  // argmax_i k_i . eta by ascent on the vertex graph from a hint; a linear
  // function on a convex polytope has no other local maxima.
  std::vector<std::vector<int>> nb(n);
  for (const auto& f : p.facets)
    for (int u : f.vertices)
      for (int v : f.vertices)
        if (u != v) nb[u].push_back(v);
  for (auto& l : nb) {
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
  }
  int hint = 0;
  auto cell_of = [&](const Eigen::Vector3d& eta, double& best) {
    int i = hint;
    best = p.klein.row(i).dot(eta);
    for (bool moved = true; moved;) {
      moved = false;
      for (int j : nb[i]) {
        const double v = p.klein.row(j).dot(eta);
        if (v > best) {
          best = v;
          i = j;
          moved = true;
        }
      }
    }
    return i;
  };
  auto density = [&](const Eigen::Vector3d& eta, int& cell) {
    double mx;
    cell = cell_of(eta, mx);
    const double ch = 1.0 / ((1.0 - mx) * (1.0 + mx));  // cosh^2 h
    return ch * std::sqrt(ch) / cosh_r(cell);            // cosh^3 h / cosh r
  };
  const TriangleRefine refine = [&](const Eigen::Vector3d& a, const Eigen::Vector3d& b,
                                    const Eigen::Vector3d& c) {
    double unused;
    const int ca = cell_of(a, unused);
    return (cell_of(b, unused) != ca || cell_of(c, unused) != ca) &&
           max_edge_angle(a, b, c) > kMinCut;
  };
  std::vector<CompensatedSum> acc(n);
  CompensatedSum total;
  PointRule rule;
  for (const auto& t : grid.triangles) {
    const Eigen::Vector3d a = grid.node(t[0]), b = grid.node(t[1]), c = grid.node(t[2]);
    hint = node_cell[t[0]];
    if (node_cell[t[0]] == node_cell[t[1]] && node_cell[t[0]] == node_cell[t[2]]) {
      const double third = spherical_triangle_area(a, b, c) / 3.0;
      int cell;
      const double v = third * (density(a, cell) + density(b, cell) + density(c, cell));
      acc[cell].add(v);
      total.add(v);
      continue;
    }
    rule.points.clear();
    rule.weights.clear();
    append_spherical_triangle_rule(a, b, c, rule, refine, 3);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      int cell;
      const double v = rule.weights[q] * density(rule.points[q], cell);
      acc[cell].add(v);
      total.add(v);
    }
  }
  for (int i = 0; i < n; ++i) out.alpha(i) = acc[i].value();
  out.polar_area = total.value();
  return out;
}

}  // namespace

HyperbolicPolytope from_vertices(int m, std::vector<Vec> directions, Vec radii) {
  check_dim(m);
  const int n = static_cast<int>(directions.size());
  if (radii.size() != n) fail(ErrorKind::invalid_argument, "direction and radius counts differ");
  if (n < m + 2)
    fail(ErrorKind::invalid_argument,
         "need at least " + std::to_string(m + 2) + " vertices, got " + std::to_string(n));
  HyperbolicPolytope p;
  p.dim = m;
  p.klein.resize(n, m + 1);
  for (int i = 0; i < n; ++i) {
    if (directions[i].size() != m + 1)
      fail(ErrorKind::invalid_argument, "direction " + std::to_string(i) + " has wrong length", i);
    if (std::fabs(directions[i].norm() - 1.0) > 1e-9)
      fail(ErrorKind::invalid_argument, "direction " + std::to_string(i) + " is not unit", i);
    directions[i].normalize();
    if (!(radii(i) > 0.0) || !std::isfinite(radii(i)))
      fail(ErrorKind::invalid_argument, "radius " + std::to_string(i) + " is not positive", i);
    const double k = std::tanh(radii(i));
    if (!(k < 1.0))
      fail(ErrorKind::invalid_argument, "radius " + std::to_string(i) + " is too large", i);
    p.klein.row(i) = k * directions[i].transpose();
  }
  p.directions = std::move(directions);
  p.radii = std::move(radii);
  if (m == 1)
    build_m1(p);
  else
    build_m2(p);
  return p;
}

HyperbolicPolytope ball_polytope(int m, int n, double radius) {
  check_dim(m);
  std::vector<Vec> dirs;
  if (m == 1) {
    for (int k = 0; k < n; ++k) dirs.push_back(circle_point(2.0 * pi * k / n));
  } else {
    const Grid g = build_grid(2, n);
    for (Eigen::Index i = 0; i < g.size(); ++i) dirs.push_back(g.node(i));
  }
  const Eigen::Index count = Eigen::Index(dirs.size());
  return from_vertices(m, std::move(dirs), Vec::Constant(count, radius));
}

double support_fn(const HyperbolicPolytope& p, const Vec& eta) {
  return std::atanh((p.klein * eta).maxCoeff());
}

double radial_fn(const HyperbolicPolytope& p, const Vec& xi) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& f : p.facets) {
    const double d = xi.dot(f.normal);
    if (d > 0.0) best = std::min(best, f.h / d);
  }
  return std::atanh(best);
}

std::vector<int> t_map(const HyperbolicPolytope& p, const Vec& eta, double tie_eps) {
  const Vec v = p.klein * eta;
  const double mx = v.maxCoeff();
  std::vector<int> out;
  for (int i = 0; i < p.size(); ++i)
    if (v(i) >= mx - tie_eps * std::fabs(mx)) out.push_back(i);
  return out;
}

DiscreteMeasure curvature_measure_integral(const HyperbolicPolytope& p, const Grid& grid) {
  IntegralRoute r = integral_route(p, grid);
  return DiscreteMeasure{p.dim, p.directions, std::move(r.alpha)};
}

double polar_boundary_area(const HyperbolicPolytope& p, const Grid& grid) {
  return integral_route(p, grid).polar_area;
}

DiscreteMeasure curvature_measure_angles(const HyperbolicPolytope& p) {
  const int n = p.size();
  Vec alpha(n);
  if (p.dim == 1) {
    const auto& ord = p.cyclic_order;
    const int k = int(ord.size());
    for (int e = 0; e < k; ++e) {
      const int i = ord[e], prev = ord[(e + k - 1) % k], next = ord[(e + 1) % k];
      const Vec x = p.vertex(i);
      const auto basis = tangent_basis(p.directions[i], p.radii(i));
      const double interior =
          angle2(direction_to(basis, x, p.vertex(prev)), direction_to(basis, x, p.vertex(next)));
      alpha(i) = pi - interior;
    }
  } else {
    for (int i = 0; i < n; ++i) {
      const auto basis = tangent_basis(p.directions[i], p.radii(i));
      std::vector<Eigen::Vector3d> cone;
      for (int f : p.vertex_facets[i]) {
        const KleinFacet& fa = p.facets[f];
        Vec nrm(4);
        nrm(0) = fa.h;
        nrm.tail(3) = fa.normal;
        nrm /= std::sqrt((1.0 - fa.h) * (1.0 + fa.h));
        const Vec c = tangent_coords(basis, nrm);
        const Eigen::Vector3d u = Eigen::Vector3d(c(0), c(1), c(2)).normalized();
        if (cone.empty() || sphere_distance(u, cone.back()) >= 1e-9) cone.push_back(u);
      }
      while (cone.size() > 1 && sphere_distance(cone.front(), cone.back()) < 1e-9) cone.pop_back();
      if (cone.size() < 3)
        fail(ErrorKind::degenerate_vertex, "vertex " + std::to_string(i) + " has " +
                                               std::to_string(cone.size()) + " facet normals", i);
      alpha(i) = spherical_polygon_area(cone);
    }
  }
  return DiscreteMeasure{p.dim, p.directions, alpha};
}

HyperbolicPolytope apply_isometry(const HyperbolicPolytope& p, const Vec& direction,
                                  double length) {
  if (direction.size() != p.dim + 1)
    fail(ErrorKind::invalid_argument, "boost direction has wrong length");
  const Mat b = boost_matrix(Vec(direction.normalized()), length);
  std::vector<Vec> dirs;
  Vec radii(p.size());
  for (int i = 0; i < p.size(); ++i) {
    const Vec y = b * p.vertex(i);
    const auto pc = hyperbolic_coords(y);
    dirs.push_back(pc.direction);
    radii(i) = pc.t;
  }
  return from_vertices(p.dim, std::move(dirs), std::move(radii));
}

double polygon_area_m1(const HyperbolicPolytope& p) {
  if (p.dim != 1) fail(ErrorKind::invalid_argument, "polygon_area_m1 needs m = 1");
  const auto& ord = p.cyclic_order;
  const int k = int(ord.size());
  const Vec o = origin_point<double>(1);
  CompensatedSum area;
  for (int e = 0; e < k; ++e) {
    const int a = ord[e], b = ord[(e + 1) % k];
    const Vec xa = p.vertex(a), xb = p.vertex(b);
    const double at_o = sphere_distance(p.directions[a], p.directions[b]);
    const auto ba = tangent_basis(p.directions[a], p.radii(a));
    const auto bb = tangent_basis(p.directions[b], p.radii(b));
    const double at_a = angle2(direction_to(ba, xa, o), direction_to(ba, xa, xb));
    const double at_b = angle2(direction_to(bb, xb, o), direction_to(bb, xb, xa));
    area.add(pi - at_o - at_a - at_b);
  }
  return area.value();
}

}  // namespace hypcurv
