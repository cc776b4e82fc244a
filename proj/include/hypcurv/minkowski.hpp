#pragma once

// Minkowski space R^{1,m+1}, the hyperboloid H^{m+1}, de Sitter space and the
// cost on the sphere. Points carry m+2 coordinates, the time coordinate first.

#include <Eigen/Core>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "hypcurv/errors.hpp"

namespace hypcurv {

template <class Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using MatX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = VecX<double>;
using Mat = MatX<double>;

inline constexpr double kDotFloor = 1e-12;
inline constexpr double kInfiniteCost = std::numeric_limits<double>::infinity();

inline int check_dim(int m) {
  if (m != 1 && m != 2) fail(ErrorKind::unsupported_dimension, "m = " + std::to_string(m));
  return m;
}

// |S^m|
inline double sphere_measure(int m) {
  check_dim(m);
  return m == 1 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
}

template <class DA, class DB>
typename DA::Scalar lorentz_dot(const Eigen::MatrixBase<DA>& x, const Eigen::MatrixBase<DB>& y) {
  const Eigen::Index n = x.size() - 1;
  return -x(0) * y(0) + x.tail(n).dot(y.tail(n));
}

template <class Scalar>
VecX<Scalar> origin_point(int m) {
  VecX<Scalar> o = VecX<Scalar>::Zero(m + 2);
  o(0) = Scalar(1);
  return o;
}

// c_xi(t) = cosh t o + sinh t xi
template <class D>
VecX<typename D::Scalar> hyperbolic_point(const Eigen::MatrixBase<D>& xi, typename D::Scalar t) {
  using std::cosh;
  using std::sinh;
  VecX<typename D::Scalar> x(xi.size() + 1);
  x(0) = cosh(t);
  x.tail(xi.size()) = sinh(t) * xi;
  return x;
}

// c'_eta(t) = sinh t o + cosh t eta
template <class D>
VecX<typename D::Scalar> desitter_point(const Eigen::MatrixBase<D>& eta, typename D::Scalar t) {
  using std::cosh;
  using std::sinh;
  VecX<typename D::Scalar> x(eta.size() + 1);
  x(0) = sinh(t);
  x.tail(eta.size()) = cosh(t) * eta;
  return x;
}

template <class Scalar>
struct PolarCoords {
  VecX<Scalar> direction;
  Scalar t;
};

// Inverse of hyperbolic_point. At the origin the direction is e_1.
template <class D>
PolarCoords<typename D::Scalar> hyperbolic_coords(const Eigen::MatrixBase<D>& x) {
  using Scalar = typename D::Scalar;
  using std::asinh;
  const Eigen::Index n = x.size() - 1;
  VecX<Scalar> s = x.tail(n);
  const Scalar len = s.norm();
  PolarCoords<Scalar> pc{VecX<Scalar>::Zero(n), asinh(len)};
  if (len > Scalar(0)) {
    pc.direction = s / len;
  } else {
    pc.direction(0) = Scalar(1);
  }
  return pc;
}

// Inverse of desitter_point.
template <class D>
PolarCoords<typename D::Scalar> desitter_coords(const Eigen::MatrixBase<D>& x) {
  using Scalar = typename D::Scalar;
  using std::asinh;
  const Eigen::Index n = x.size() - 1;
  VecX<Scalar> s = x.tail(n);
  return {s / s.norm(), asinh(x(0))};
}

// Klein model coordinate of c_xi(t) is tanh(t) xi.
template <class D>
VecX<typename D::Scalar> klein_point(const Eigen::MatrixBase<D>& x) {
  return x.tail(x.size() - 1) / x(0);
}

template <class Scalar>
Scalar klein_radius(Scalar t) {
  using std::tanh;
  return tanh(t);
}

template <class Scalar>
Scalar radius_from_klein(Scalar r_e) {
  using std::atanh;
  if (!(r_e >= Scalar(0) && r_e < Scalar(1)))
    fail(ErrorKind::domain_error, "Klein radius outside [0,1)");
  return atanh(r_e);
}

// c(eta, xi) = -ln <eta, xi>, infinite when the dot product is at most dot_floor.
template <class DA, class DB>
typename DA::Scalar cost(const Eigen::MatrixBase<DA>& eta, const Eigen::MatrixBase<DB>& xi,
                         double dot_floor = kDotFloor) {
  using std::log;
  const auto d = eta.dot(xi);
  if (!(d > dot_floor)) return std::numeric_limits<typename DA::Scalar>::infinity();
  return -log(d);
}

// Lambda(d) = -ln cos d, the cost as a function of spherical distance.
template <class Scalar>
Scalar cost_profile(Scalar d) {
  using std::cos;
  using std::log;
  if (!(d >= Scalar(0) && d < Scalar(std::numbers::pi / 2)))
    fail(ErrorKind::domain_error, "cost profile needs d in [0, pi/2)");
  return -log(cos(d));
}

// Lambda'(d) = tan d
template <class Scalar>
Scalar cost_profile_slope(Scalar d) {
  using std::tan;
  return tan(d);
}

template <class DA, class DB>
typename DA::Scalar sphere_distance(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  using std::atan2;
  return 2 * atan2((a - b).norm(), (a + b).norm());
}

template <class DA, class DB>
typename DA::Scalar hyperbolic_distance(const Eigen::MatrixBase<DA>& x,
                                        const Eigen::MatrixBase<DB>& y) {
  using std::acosh;
  using std::max;
  return acosh(max(typename DA::Scalar(1), -lorentz_dot(x, y)));
}

// Lorentz boost of rapidity d along the unit spatial direction u.
template <class D>
MatX<typename D::Scalar> boost_matrix(const Eigen::MatrixBase<D>& u, typename D::Scalar d) {
  using Scalar = typename D::Scalar;
  using std::cosh;
  using std::sinh;
  const Eigen::Index n = u.size();
  MatX<Scalar> b = MatX<Scalar>::Identity(n + 1, n + 1);
  b(0, 0) = cosh(d);
  b.block(0, 1, 1, n) = sinh(d) * u.transpose();
  b.block(1, 0, n, 1) = sinh(d) * u;
  b.block(1, 1, n, n) += (cosh(d) - Scalar(1)) * u * u.transpose();
  return b;
}

// Unit vector at angle theta (m = 1).
inline Vec circle_point(double theta) {
  Vec v(2);
  v << std::cos(theta), std::sin(theta);
  return v;
}

}  // namespace hypcurv
