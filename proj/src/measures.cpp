#include "hypcurv/measures.hpp"

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include <algorithm>
#include <numbers>
#include <numeric>
#include <random>
#include <string>

#include "hypcurv/hull.hpp"

namespace hypcurv {

using std::numbers::pi;

DiscreteMeasure make_measure(int m, std::vector<Vec> points, Vec weights) {
  check_dim(m);
  if (points.empty()) fail(ErrorKind::invalid_argument, "measure has no points");
  if (Eigen::Index(points.size()) != weights.size())
    fail(ErrorKind::invalid_argument, "point and weight counts differ");
  for (size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != m + 1)
      fail(ErrorKind::invalid_argument, "point " + std::to_string(i) + " has wrong length", long(i));
    if (std::fabs(points[i].norm() - 1.0) > 1e-12)
      fail(ErrorKind::invalid_argument, "point " + std::to_string(i) + " is not a unit vector",
           long(i));
    if (!(weights(Eigen::Index(i)) > 0.0) || !std::isfinite(weights(Eigen::Index(i))))
      fail(ErrorKind::invalid_argument, "weight " + std::to_string(i) + " is not positive",
           long(i));
    for (size_t j = 0; j < i; ++j)
      if (sphere_distance(points[i], points[j]) <= kMinPointSeparation)
        fail(ErrorKind::invalid_argument,
             "points " + std::to_string(j) + " and " + std::to_string(i) + " coincide", long(i));
  }
  return DiscreteMeasure{m, std::move(points), std::move(weights)};
}

// ---------------------------------------------------------------- hulls

Eigen::Vector3d min_norm_point(const std::vector<Eigen::Vector3d>& pts) {
  const int n = static_cast<int>(pts.size());
  double scale = 0.0;
  int j0 = 0;
  for (int k = 0; k < n; ++k) {
    scale = std::max(scale, pts[k].squaredNorm());
    if (pts[k].squaredNorm() < pts[j0].squaredNorm()) j0 = k;
  }
  std::vector<int> corral{j0};
  std::vector<double> lam{1.0};
  Eigen::Vector3d x = pts[j0];
  auto recompute = [&] {
    x.setZero();
    for (size_t i = 0; i < corral.size(); ++i) x += lam[i] * pts[corral[i]];
  };

  for (int major = 0; major < 50 * (n + 1); ++major) {
    if (x.squaredNorm() <= 1e-26 * scale) return Eigen::Vector3d::Zero();
    int j = 0;
    for (int k = 1; k < n; ++k)
      if (x.dot(pts[k]) < x.dot(pts[j])) j = k;
    if (x.dot(x) - x.dot(pts[j]) <= 1e-14 * scale) return x;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) return x;
    corral.push_back(j);
    lam.push_back(0.0);

    for (int minor = 0; minor < 10 * (n + 1); ++minor) {
      const int k = static_cast<int>(corral.size());
      Eigen::MatrixXd a(k + 1, k + 1);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);
      b(k) = 1.0;
      for (int i = 0; i < k; ++i) {
        for (int l = 0; l < k; ++l) a(i, l) = pts[corral[i]].dot(pts[corral[l]]);
        a(i, k) = a(k, i) = 1.0;
      }
      a(k, k) = 0.0;
      const Eigen::VectorXd alpha = a.fullPivLu().solve(b).head(k);
      if (alpha.minCoeff() > 1e-14) {
        lam.assign(alpha.data(), alpha.data() + k);
        recompute();
        break;
      }
      double theta = 1.0;
      for (int i = 0; i < k; ++i)
        if (alpha(i) <= 1e-14) theta = std::min(theta, lam[i] / (lam[i] - alpha(i)));
      for (int i = 0; i < k; ++i) lam[i] = (1.0 - theta) * lam[i] + theta * alpha(i);
      std::vector<int> c2;
      std::vector<double> l2;
      for (int i = 0; i < k; ++i)
        if (lam[i] > 1e-14) {
          c2.push_back(corral[i]);
          l2.push_back(lam[i]);
        }
      if (c2.empty()) {
        c2.push_back(corral.back());
        l2.push_back(1.0);
      }
      const double s = std::accumulate(l2.begin(), l2.end(), 0.0);
      for (double& v : l2) v /= s;
      corral.swap(c2);
      lam.swap(l2);
      recompute();
    }
  }
  return x;
}

namespace {

double wrap_2pi(double t) {
  t = std::fmod(t, 2.0 * pi);
  return t < 0 ? t + 2.0 * pi : t;
}

SphericalConvexSet hull_circle(const std::vector<Vec>& pts) {
  SphericalConvexSet s;
  s.dim = 1;
  std::vector<std::pair<double, int>> th;
  for (size_t i = 0; i < pts.size(); ++i)
    th.emplace_back(wrap_2pi(std::atan2(pts[i](1), pts[i](0))), int(i));
  std::sort(th.begin(), th.end());
  const size_t n = th.size();
  size_t k = n - 1;
  double gap = th[0].first + 2.0 * pi - th[n - 1].first;
  for (size_t i = 0; i + 1 < n; ++i) {
    const double g = th[i + 1].first - th[i].first;
    if (g > gap) {
      gap = g;
      k = i;
    }
  }
  const double len = 2.0 * pi - gap;
  const int first = th[(k + 1) % n].second, last = th[k].second;
  if (len <= 1e-15) {
    s.kind = HullKind::point;
    s.rays = {pts[first]};
  } else if (gap > pi + 1e-12) {
    s.kind = HullKind::arc;
    s.rays = {pts[first], pts[last]};
    s.length = len;
  } else if (gap >= pi - 1e-12) {
    s.kind = HullKind::non_pointed;
  } else {
    s.kind = HullKind::full_sphere;
  }
  return s;
}

Eigen::Vector3d v3(const Vec& v) { return Eigen::Vector3d(v(0), v(1), v(2)); }

SphericalConvexSet hull_sphere(const std::vector<Vec>& pts) {
  SphericalConvexSet s;
  s.dim = 2;
  std::vector<Eigen::Vector3d> p;
  p.reserve(pts.size());
  for (const auto& v : pts) p.push_back(v3(v));

  const Eigen::Vector3d y = min_norm_point(p);
  if (y.norm() <= 1e-10) {
    bool any_pair = false;
    for (size_t i = 0; i < p.size(); ++i)
      for (size_t j = i + 1; j < p.size(); ++j) {
        Eigen::Vector3d c = p[i].cross(p[j]);
        if (c.norm() <= 1e-12) continue;
        any_pair = true;
        c.normalize();
        bool pos = true, neg = true;
        for (const auto& q : p) {
          const double d = q.dot(c);
          pos = pos && d >= -1e-12;
          neg = neg && d <= 1e-12;
        }
        if (pos || neg) {
          s.kind = HullKind::non_pointed;
          return s;
        }
      }
    s.kind = any_pair ? HullKind::full_sphere : HullKind::non_pointed;
    return s;
  }

  const Eigen::Vector3d w = y.normalized();
  Eigen::Vector3d u = w.unitOrthogonal();
  const Eigen::Vector3d v = w.cross(u);
  std::vector<Eigen::Vector2d> q;
  for (const auto& x : p) {
    const double d = w.dot(x);
    q.emplace_back(u.dot(x) / d, v.dot(x) / d);
  }
  std::vector<int> h = convex_hull_2d(q);
  std::vector<int> merged;
  for (int i : h)
    if (merged.empty() || sphere_distance(p[i], p[merged.back()]) >= 1e-9) merged.push_back(i);
  while (merged.size() > 1 && sphere_distance(p[merged.front()], p[merged.back()]) < 1e-9)
    merged.pop_back();

  if (merged.size() == 1) {
    s.kind = HullKind::point;
    s.rays = {pts[merged[0]]};
  } else if (merged.size() == 2) {
    s.kind = HullKind::arc;
    s.rays = {pts[merged[0]], pts[merged[1]]};
    s.normals = {Vec(p[merged[0]].cross(p[merged[1]]).normalized())};
    s.length = sphere_distance(p[merged[0]], p[merged[1]]);
  } else {
    s.kind = HullKind::polygon;
    for (size_t k = 0; k < merged.size(); ++k) {
      const int a = merged[k], b = merged[(k + 1) % merged.size()];
      s.rays.push_back(pts[a]);
      s.normals.push_back(Vec(p[a].cross(p[b]).normalized()));
    }
  }
  return s;
}

}  // namespace

bool SphericalConvexSet::contains(const Vec& x, double tol) const {
  switch (kind) {
    case HullKind::full_sphere: return true;
    case HullKind::non_pointed: return false;
    case HullKind::point: return (x - rays[0]).norm() <= tol;
    case HullKind::arc: {
      if (dim == 1) {
        const double a = std::atan2(rays[0](1), rays[0](0));
        const double d = wrap_2pi(std::atan2(x(1), x(0)) - a);
        return d <= length + tol || d >= 2.0 * pi - tol;
      }
      const Eigen::Vector3d p = v3(x), a = v3(rays[0]), b = v3(rays[1]), n = v3(normals[0]);
      return std::fabs(n.dot(p)) <= tol && a.cross(p).dot(n) >= -tol &&
             p.cross(b).dot(n) >= -tol && p.dot(a + b) > 0.0;
    }
    case HullKind::polygon:
      for (const auto& n : normals)
        if (n.dot(x) < -tol) return false;
      return true;
  }
  return false;
}

SphericalConvexSet spherical_hull(const std::vector<Vec>& points) {
  if (points.empty()) fail(ErrorKind::invalid_argument, "spherical hull of an empty set");
  const int m = check_dim(int(points[0].size()) - 1);
  return m == 1 ? hull_circle(points) : hull_sphere(points);
}

double spherical_polygon_area(const std::vector<Eigen::Vector3d>& vertices) {
  std::vector<Eigen::Vector3d> v;
  for (const auto& x : vertices)
    if (v.empty() || sphere_distance(x, v.back()) >= 1e-9) v.push_back(x);
  while (v.size() > 1 && sphere_distance(v.front(), v.back()) < 1e-9) v.pop_back();
  const size_t k = v.size();
  if (k < 3) return 0.0;
  double sum = 0.0;
  for (size_t j = 0; j < k; ++j) {
    const Eigen::Vector3d& c = v[j];
    const Eigen::Vector3d& a = v[(j + k - 1) % k];
    const Eigen::Vector3d& b = v[(j + 1) % k];
    const Eigen::Vector3d ta = a - a.dot(c) * c, tb = b - b.dot(c) * c;
    sum += std::atan2(ta.cross(tb).norm(), ta.dot(tb));
  }
  return sum - double(k - 2) * pi;
}

double polar_sigma_area(const SphericalConvexSet& omega) {
  switch (omega.kind) {
    case HullKind::full_sphere:
      fail(ErrorKind::invalid_argument, "polar of the full sphere is empty");
    case HullKind::non_pointed: return 0.0;
    case HullKind::point: return omega.dim == 1 ? pi : 2.0 * pi;
    case HullKind::arc:
      return omega.dim == 1 ? std::max(0.0, pi - omega.length) : 2.0 * (pi - omega.length);
    case HullKind::polygon: {
      std::vector<Eigen::Vector3d> polar;
      for (const auto& n : omega.normals) polar.push_back(-v3(n));
      return spherical_polygon_area(polar);
    }
  }
  return 0.0;
}

// ----------------------------------------------------------- conditions

double condition_eps(int m) { return 1e-9 * sphere_measure(m); }

namespace {

struct Worst {
  double slack = std::numeric_limits<double>::infinity();
  std::vector<int> witness;
  long tested = 0;

  void offer(double s, std::vector<int> w) {
    ++tested;
    std::sort(w.begin(), w.end());
    const double tie = 1e-12 * std::max(1.0, std::fabs(s));
    if (witness.empty() || s < slack - tie || (s <= slack + tie && w < witness)) {
      slack = s;
      witness = std::move(w);
    }
  }
};

void alexandrov_circle(const DiscreteMeasure& mu, Worst& worst) {
  const int n = mu.size();
  const double total = mu.total();
  std::vector<std::pair<double, int>> th;
  for (int i = 0; i < n; ++i)
    th.emplace_back(wrap_2pi(std::atan2(mu.points[i](1), mu.points[i](0))), i);
  std::sort(th.begin(), th.end());

  // Arcs from one support point counterclockwise to another.
  for (int s = 0; s < n; ++s) {
    double inside = 0.0;
    std::vector<int> w;
    for (int k = 0; k < n; ++k) {
      const auto& e = th[(s + k) % n];
      const double len = wrap_2pi(e.first - th[s].first);
      if (k > 0 && len >= pi) break;
      inside += mu.weights(e.second);
      w.push_back(e.second);
      worst.offer(total - inside - (pi - len), w);
    }
  }
  // Closed half circles: polar has measure zero.
  for (int s = 0; s < n; ++s) {
    for (int dir : {1, -1}) {
      double inside = 0.0;
      std::vector<int> w;
      for (int i = 0; i < n; ++i) {
        const double d = wrap_2pi(dir * (th[i].first - th[s].first));
        if (d <= pi + 1e-12 || d >= 2.0 * pi - 1e-12) {
          inside += mu.weights(th[i].second);
          w.push_back(th[i].second);
        }
      }
      worst.offer(total - inside, w);
    }
  }
}

void offer_subset(const DiscreteMeasure& mu, const std::vector<int>& subset, Worst& worst) {
  std::vector<Vec> pts;
  for (int i : subset) pts.push_back(mu.points[i]);
  const SphericalConvexSet omega = spherical_hull(pts);
  if (omega.kind == HullKind::full_sphere || omega.kind == HullKind::non_pointed) return;
  double inside = 0.0;
  std::vector<int> w;
  for (int i = 0; i < mu.size(); ++i)
    if (omega.contains(mu.points[i], 1e-12)) {
      inside += mu.weights(i);
      w.push_back(i);
    }
  worst.offer(mu.total() - inside - polar_sigma_area(omega), w);
}

// Closed hemispheres stand in for every non-pointed hull: each such set lies
// in a closed hemisphere whose polar has measure zero. The extremal ones have
// two support points on the boundary circle.
void offer_hemispheres(const DiscreteMeasure& mu, Worst& worst) {
  const int n = mu.size();
  std::vector<Eigen::Vector3d> cands;
  for (int i = 0; i < n; ++i) {
    cands.push_back(v3(mu.points[i]));
    for (int j = i + 1; j < n; ++j) {
      const Eigen::Vector3d c = v3(mu.points[i]).cross(v3(mu.points[j]));
      if (c.norm() > 1e-12) cands.push_back(c.normalized());
    }
  }
  for (const auto& c : cands)
    for (double sgn : {1.0, -1.0}) {
      double inside = 0.0;
      std::vector<int> w;
      for (int i = 0; i < n; ++i)
        if (sgn * c.dot(v3(mu.points[i])) >= -1e-12) {
          inside += mu.weights(i);
          w.push_back(i);
        }
      worst.offer(mu.total() - inside, w);
    }
}

}  // namespace

ConditionReport check_conditions(const DiscreteMeasure& mu, CheckMode mode) {
  const int m = check_dim(mu.dim);
  const int n = mu.size();
  if (mode.exhaustive && n > kMaxExhaustive)
    fail(ErrorKind::invalid_argument, "exhaustive check refused for N = " + std::to_string(n) +
                                          " > " + std::to_string(kMaxExhaustive) +
                                          "; use sampled mode");
  const double eps = condition_eps(m);
  const double sm = sphere_measure(m);

  ConditionReport r;
  r.total_mass_excess = mu.total() - sm;
  r.total_mass_ok = r.total_mass_excess > eps;
  Eigen::Index heaviest;
  r.max_weight = mu.weights.maxCoeff(&heaviest);
  r.max_weight_index = int(heaviest);
  r.vertex_ok = 0.5 * sm - r.max_weight > eps;

  Worst worst;
  if (m == 1) {
    alexandrov_circle(mu, worst);
    r.exhaustive = true;
  } else {
    offer_hemispheres(mu, worst);
    std::vector<int> subset;
    if (mode.exhaustive) {
      for (std::uint32_t mask = 1; mask < (std::uint32_t(1) << n); ++mask) {
        subset.clear();
        for (int i = 0; i < n; ++i)
          if (mask >> i & 1u) subset.push_back(i);
        offer_subset(mu, subset, worst);
      }
      r.exhaustive = true;
    } else {
      for (int i = 0; i < n; ++i) {
        offer_subset(mu, {i}, worst);
        subset.clear();
        for (int j = 0; j < n; ++j)
          if (j != i) subset.push_back(j);
        offer_subset(mu, subset, worst);
      }
      std::mt19937_64 rng(mode.seed);
      std::vector<int> all(n);
      std::iota(all.begin(), all.end(), 0);
      for (int s = 0; s < mode.n_subsets; ++s) {
        std::shuffle(all.begin(), all.end(), rng);
        const int k = std::uniform_int_distribution<int>(1, n)(rng);
        subset.assign(all.begin(), all.begin() + k);
        offer_subset(mu, subset, worst);
      }
      r.exhaustive = false;
    }
  }
  r.alexandrov_slack = worst.slack;
  r.worst_witness = worst.witness;
  r.alexandrov_ok = worst.slack > eps;
  r.tested_sets = worst.tested;
  return r;
}

}  // namespace hypcurv
