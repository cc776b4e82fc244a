#include "hypcurv/predicates.hpp"

#include <cmath>
#include <vector>

namespace hypcurv {
namespace {

struct Pair {
  double hi, lo;
};

Pair two_sum(double a, double b) {
  const double x = a + b;
  const double bv = x - a;
  const double av = x - bv;
  return {x, (a - av) + (b - bv)};
}

Pair two_prod(double a, double b) {
  const double x = a * b;
  return {x, std::fma(a, b, -x)};
}

// Nonoverlapping expansion, components in increasing magnitude, zeros removed.
class Expansion {
 public:
  Expansion() = default;
  explicit Expansion(double x) {
    if (x != 0.0) c_.push_back(x);
  }

  static Expansion diff(double a, double b) {
    Expansion e(a);
    e.grow(-b);
    return e;
  }

  void grow(double b) {
    std::vector<double> h;
    h.reserve(c_.size() + 1);
    double q = b;
    for (double e : c_) {
      const Pair s = two_sum(q, e);
      if (s.lo != 0.0) h.push_back(s.lo);
      q = s.hi;
    }
    if (q != 0.0) h.push_back(q);
    c_.swap(h);
  }

  Expansion operator+(const Expansion& o) const {
    Expansion r = *this;
    for (double x : o.c_) r.grow(x);
    return r;
  }

  Expansion operator-() const {
    Expansion r = *this;
    for (double& x : r.c_) x = -x;
    return r;
  }

  Expansion operator-(const Expansion& o) const { return *this + (-o); }

  Expansion operator*(const Expansion& o) const {
    Expansion r;
    for (double a : c_) {
      for (double b : o.c_) {
        const Pair p = two_prod(a, b);
        if (p.lo != 0.0) r.grow(p.lo);
        r.grow(p.hi);
      }
    }
    return r;
  }

  int sign() const {
    if (c_.empty()) return 0;
    return c_.back() > 0 ? 1 : -1;
  }

 private:
  std::vector<double> c_;
};

constexpr double kEps = 1.1102230246251565e-16;  // 2^-53
constexpr double kO2dBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kO3dBound = (7.0 + 56.0 * kEps) * kEps;

int sgn(double x) { return (x > 0) - (x < 0); }

}  // namespace

int orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c) {
  const double l = (b.x() - a.x()) * (c.y() - a.y());
  const double r = (b.y() - a.y()) * (c.x() - a.x());
  const double det = l - r;
  if (std::fabs(det) > kO2dBound * (std::fabs(l) + std::fabs(r))) return sgn(det);

  const Expansion bx = Expansion::diff(b.x(), a.x()), by = Expansion::diff(b.y(), a.y());
  const Expansion cx = Expansion::diff(c.x(), a.x()), cy = Expansion::diff(c.y(), a.y());
  return (bx * cy - by * cx).sign();
}

int orient3d(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c,
             const Eigen::Vector3d& d) {
  const Eigen::Vector3d u = b - a, v = c - a, w = d - a;
  const double m0 = v.y() * w.z() - v.z() * w.y();
  const double m1 = v.z() * w.x() - v.x() * w.z();
  const double m2 = v.x() * w.y() - v.y() * w.x();
  const double det = u.x() * m0 + u.y() * m1 + u.z() * m2;
  const double perm = std::fabs(u.x()) * (std::fabs(v.y() * w.z()) + std::fabs(v.z() * w.y())) +
                      std::fabs(u.y()) * (std::fabs(v.z() * w.x()) + std::fabs(v.x() * w.z())) +
                      std::fabs(u.z()) * (std::fabs(v.x() * w.y()) + std::fabs(v.y() * w.x()));
  if (std::fabs(det) > kO3dBound * perm) return sgn(det);

  Expansion ue[3], ve[3], we[3];
  for (int k = 0; k < 3; ++k) {
    ue[k] = Expansion::diff(b(k), a(k));
    ve[k] = Expansion::diff(c(k), a(k));
    we[k] = Expansion::diff(d(k), a(k));
  }
  const Expansion e0 = ve[1] * we[2] - ve[2] * we[1];
  const Expansion e1 = ve[2] * we[0] - ve[0] * we[2];
  const Expansion e2 = ve[0] * we[1] - ve[1] * we[0];
  return (ue[0] * e0 + ue[1] * e1 + ue[2] * e2).sign();
}

bool collinear3d(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  // Collinear iff every coordinate-plane projection is degenerate.
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    if (orient2d({a(i), a(j)}, {b(i), b(j)}, {c(i), c(j)}) != 0) return false;
  }
  return true;
}

}  // namespace hypcurv
