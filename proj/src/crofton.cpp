#include "hypcurv/crofton.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <numbers>

namespace hypcurv {

using std::numbers::pi;

SplitMix64::result_type SplitMix64::operator()() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SupportFunction::SupportFunction(const HyperbolicPolytope& p) : p_(&p) {
  double hmin = 1.0;
  for (const auto& f : p.facets) hmin = std::min(hmin, f.h);
  min_ = std::atanh(hmin);
  max_ = p.radii.maxCoeff();
  vertices_.resize(p.size(), p.dim + 2);
  for (int i = 0; i < p.size(); ++i) vertices_.row(i) = p.vertex(i).transpose();
  if (p.dim != 1) return;
  const int k = int(p.facets.size());
  std::vector<std::pair<double, int>> arcs;
  for (int e = 0; e < k; ++e) {
    const Vec& n = p.facets[e].normal;
    arcs.emplace_back(std::atan2(n(1), n(0)), p.facets[e].vertices[1]);
  }
  std::sort(arcs.begin(), arcs.end());
  for (const auto& [a, v] : arcs) {
    edge_angle_.push_back(a);
    owner_.push_back(v);
  }
}

double SupportFunction::operator()(const Vec& eta) const {
  const Mat& k = p_->klein;
  if (p_->dim == 1) {
    const double theta = std::atan2(eta(1), eta(0));
    auto it = std::upper_bound(edge_angle_.begin(), edge_angle_.end(), theta);
    const int slot = it == edge_angle_.begin() ? int(owner_.size()) - 1
                                               : int(it - edge_angle_.begin()) - 1;
    const int i = owner_[slot];
    return std::atanh(k(i, 0) * eta(0) + k(i, 1) * eta(1));
  }
  double best = -1.0;
  for (Eigen::Index i = 0; i < k.rows(); ++i)
    best = std::max(best, k(i, 0) * eta(0) + k(i, 1) * eta(1) + k(i, 2) * eta(2));
  return std::atanh(best);
}

Vec GeodesicSample::point(double s) const {
  Vec x(dim + 2);
  x(0) = std::cos(s) * std::sinh(h_a);
  x.tail(dim + 1) = std::cos(s) * std::cosh(h_a) * xi_a + std::sin(s) * xi_b;
  return x;
}

GeodesicSample sample_geodesic(int m, double h_cap, std::uint64_t seed, std::uint64_t index) {
  check_dim(m);
  if (!(h_cap > 0)) fail(ErrorKind::invalid_argument, "h_cap must be positive");
  SplitMix64 rng(seed, index);
  GeodesicSample g;
  g.dim = m;
  // Radial CDF (cosh t - 1) / (cosh h_cap - 1), inverted via cosh t - 1 = 2 sinh^2(t/2).
  g.h_a = 2.0 * std::asinh(std::sqrt(rng.uniform()) * std::sinh(0.5 * h_cap));
  if (m == 1) {
    const double a = 2.0 * pi * rng.uniform();
    g.xi_a = circle_point(a);
    g.xi_b = circle_point(a + pi / 2);
  } else {
    const double z = 2.0 * rng.uniform() - 1.0, az = 2.0 * pi * rng.uniform();
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Eigen::Vector3d nu(rho * std::cos(az), rho * std::sin(az), z);
    const Eigen::Vector3d e1 = nu.unitOrthogonal(), e2 = nu.cross(e1);
    const double b = 2.0 * pi * rng.uniform();
    g.normal = nu;
    g.xi_a = std::cos(b) * e1 + std::sin(b) * e2;
    g.xi_b = -std::sin(b) * e1 + std::cos(b) * e2;
    // Lines of H^3 parameterized by their foot p on the plane through o
    // perpendicular to them carry the density cosh d(o, p).
    g.weight = std::cosh(g.h_a);
  }
  g.p = hyperbolic_point(g.xi_a, g.h_a);
  return g;
}

std::vector<GeodesicSample> sample_geodesics(int m, int n, double h_cap, std::uint64_t seed) {
  if (n <= 0) fail(ErrorKind::invalid_argument, "sample count must be positive");
  std::vector<GeodesicSample> out;
  out.reserve(n);
  for (int k = 0; k < n; ++k) out.push_back(sample_geodesic(m, h_cap, seed, std::uint64_t(k)));
  return out;
}

IntersectionCount count_intersections(const GeodesicSample& g, const SupportFunction& h,
                                      const std::function<bool(const Vec&)>& region) {
  if (g.dim != h.dim()) fail(ErrorKind::invalid_argument, "geodesic and body dimensions differ");
  IntersectionCount out;
  const Mat& v = h.vertices();
  const Eigen::Index n = v.rows();
  const auto spatial = v.rightCols(g.dim + 1);
  const Vec wa = std::cosh(g.h_a) * (spatial * g.xi_a) - std::sinh(g.h_a) * v.col(0);
  const Vec wb = spatial * g.xi_b;
  std::vector<double> angle(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::hypot(wa(i), wb(i)) < kTangentArc) {
      out.unstable = true;
      return out;
    }
    angle[i] = std::atan2(wb(i), wa(i));
  }
  std::sort(angle.begin(), angle.end());
  // The vectors fit in an open half-plane iff some angular gap exceeds pi.
  double gap = angle.front() + 2.0 * pi - angle.back();
  Eigen::Index after = 0;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (angle[i] - angle[i - 1] > gap) {
      gap = angle[i] - angle[i - 1];
      after = i;
    }
  }
  const double excess = gap - pi;
  if (std::fabs(excess) < kTangentArc) out.unstable = true;
  if (excess <= 0) return out;
  const double lo = angle[after], hi = lo + 2.0 * pi - gap;
  Vec eta(g.dim + 1);
  for (double s : {hi + pi / 2, lo + 3 * pi / 2}) {
    s = std::remainder(s, 2.0 * pi);
    eta = std::cos(s) * std::cosh(g.h_a) * g.xi_a + std::sin(s) * g.xi_b;
    if (!region || region(eta.normalized())) {
      out.roots.push_back(s);
      ++out.count;
    }
  }
  return out;
}

IntersectionCount count_intersections_sampled(const GeodesicSample& g,
                                              const std::function<double(const Vec&)>& h,
                                              double h_min,
                                              const std::function<bool(const Vec&)>& region) {
  IntersectionCount out;
  const double c0 = std::sinh(h_min) / std::sinh(g.h_a);
  if (!(c0 < 1.0)) return out;
  const double ds = 2.0 * pi / kCrossingSamples;
  const int half = std::min(kCrossingSamples / 2, int(std::floor(std::acos(c0) / ds)) + 1);
  const double sh = std::sinh(g.h_a), ch = std::cosh(g.h_a);
  Vec eta(g.dim + 1);
  auto diff = [&](double s) {
    eta = std::cos(s) * ch * g.xi_a + std::sin(s) * g.xi_b;
    eta.normalize();
    return std::asinh(std::cos(s) * sh) - h(eta);
  };
  // Samples j = -half .. half; a full circle drops the duplicate endpoint.
  const bool full = half == kCrossingSamples / 2;
  const int count = full ? kCrossingSamples + 1 : 2 * half + 1;
  std::vector<double> d(count);
  for (int j = 0; j < count; ++j) d[j] = full && j == count - 1 ? d[0] : diff((j - half) * ds);
  for (int j = 0; j + 1 < count; ++j) {
    if ((d[j] > 0) == (d[j + 1] > 0)) {
      if (j > 0 && std::fabs(d[j]) < kTangentArc && (d[j - 1] > 0) == (d[j] > 0))
        out.unstable = true;
      continue;
    }
    double a = (j - half) * ds, b = a + ds;
    const bool rising = d[j + 1] > 0;
    while (b - a > 1e-10) {
      const double mid = 0.5 * (a + b);
      if ((diff(mid) > 0) == rising)
        b = mid;
      else
        a = mid;
    }
    const double root = 0.5 * (a + b);
    diff(root);
    if (!region || region(eta)) {
      out.roots.push_back(std::remainder(root, 2.0 * pi));
      ++out.count;
    }
  }
  return out;
}

double polar_area_on(const HyperbolicPolytope& p, const Grid& grid,
                     const std::function<bool(const Vec&)>& region) {
  if (grid.dim != p.dim) fail(ErrorKind::invalid_argument, "grid dimension mismatch");
  const Vec cosh_r = p.radii.array().cosh();
  auto cell = [&](const Vec& eta) {
    Eigen::Index i;
    (p.klein * eta).maxCoeff(&i);
    return int(i);
  };
  CompensatedSum total;
  if (p.dim == 1) {
    const auto arcs = circle_cell_arcs(grid, [&](double t) {
      const Vec eta = circle_point(t);
      return 2 * cell(eta) + (!region || region(eta) ? 1 : 0);
    });
    for (const auto& a : arcs) {
      if (a.cell % 2 == 0) continue;
      const int i = a.cell / 2;
      const Vec k = p.klein.row(i).transpose();
      total.add(gauss_integral(
                    [&](double t) {
                      const double s = k.dot(circle_point(t));
                      return 1.0 / ((1.0 - s) * (1.0 + s));
                    },
                    a.a, a.b) /
                cosh_r(i));
    }
    return total.value();
  }
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    const Vec eta = grid.node(j);
    if (region && !region(eta)) continue;
    const int i = cell(eta);
    const double s = p.klein.row(i).dot(eta);
    const double ch2 = 1.0 / ((1.0 - s) * (1.0 + s));
    total.add(grid.weights(j) * ch2 * std::sqrt(ch2) / cosh_r(i));
  }
  return total.value();
}

CroftonReport crofton_compare(const HyperbolicPolytope& p1, const HyperbolicPolytope& p2,
                              const Grid& grid, const CroftonConfig& config) {
  if (p1.dim != p2.dim) fail(ErrorKind::invalid_argument, "bodies have different dimensions");
  const int m = p1.dim;
  if (m == 2 && !config.experimental)
    fail(ErrorKind::invalid_argument, "m = 2 Crofton comparison is experimental; enable it explicitly");
  if (config.samples <= 0) fail(ErrorKind::invalid_argument, "sample count must be positive");
  const SupportFunction h1(p1), h2(p2);
  CroftonReport r;
  r.dim = m;
  r.h_cap = config.h_cap > 0 ? config.h_cap : std::max(h1.max_value(), h2.max_value()) + 0.5;
  const std::function<bool(const Vec&)> omega = [&](const Vec& eta) { return h1(eta) < h2(eta); };
  r.lhs = polar_area_on(p2, grid, omega) - polar_area_on(p1, grid, omega);

  const double disk = 2.0 * pi * (std::cosh(r.h_cap) - 1.0);
  r.kinematic_volume = m == 1 ? disk : 2.0 * pi * disk;
  const double factor = m == 1 ? 0.5 : 1.0 / pi;
  r.difference_histogram.assign(9, 0);
  CompensatedSum sum, sum_sq;
  for (int k = 0; k < config.samples; ++k) {
    const GeodesicSample g = sample_geodesic(m, r.h_cap, config.seed, std::uint64_t(k));
    const auto c1 = count_intersections(g, h1, omega);
    const auto c2 = count_intersections(g, h2, omega);
    if (c1.unstable || c2.unstable) {
      ++r.unstable;
      continue;
    }
    const int diff = c1.count - c2.count;
    r.difference_histogram[std::clamp(diff, -4, 4) + 4]++;
    if (diff != 0 && diff != 2) r.differences_valid = false;
    const double x = factor * r.kinematic_volume * g.weight * diff;
    sum.add(x);
    sum_sq.add(x * x);
    ++r.samples;
  }
  const double n = r.samples;
  const double mean = n > 0 ? sum.value() / n : 0.0;
  const double var = n > 1 ? std::max(0.0, (sum_sq.value() - n * mean * mean) / (n - 1)) : 0.0;
  r.rhs = mean;
  r.stderr_ = std::sqrt(var / std::max(1.0, n));
  r.rhs_nonnegative = mean >= 0;
  r.agree = std::fabs(r.lhs - r.rhs) <= 3.0 * r.stderr_ + config.quadrature_tol;
  return r;
}

}  // namespace hypcurv
