#pragma once

// Monte Carlo check of the Crofton formula for polar boundaries:
//   |Sigma_2| - |Sigma_1| = m / |S^{m-1}| * int (#(g ∩ Sigma_1) - #(g ∩ Sigma_2)) dl
// where g runs over space-like geodesics of de Sitter space, sampled as duals
// of totally geodesic submanifolds of H^{m+1}.

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <vector>

#include "hypcurv/polytope.hpp"
#include "hypcurv/quadrature.hpp"

namespace hypcurv {

// Counter-based generator: stream k of a seed is independent of every other.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  SplitMix64(std::uint64_t seed, std::uint64_t stream)
      : state_(seed ^ (stream * 0xd1342543de82ef95ULL + 0x9e3779b97f4a7c15ULL)) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type(0); }
  result_type operator()();
  double uniform() { return double((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// h(eta) with an O(log n) cell lookup for m = 1.
class SupportFunction {
 public:
  explicit SupportFunction(const HyperbolicPolytope& p);
  double operator()(const Vec& eta) const;
  double min_value() const { return min_; }
  double max_value() const { return max_; }
  int dim() const { return p_->dim; }
  const HyperbolicPolytope& polytope() const { return *p_; }
  // Row i is the vertex v_i in Minkowski coordinates.
  const Mat& vertices() const { return vertices_; }

 private:
  const HyperbolicPolytope* p_;
  Mat vertices_;
  std::vector<double> edge_angle_;  // m = 1: edge normal angles, increasing
  std::vector<int> owner_;          // vertex owning [edge_angle_[k], edge_angle_[k+1])
  double min_ = 0, max_ = 0;
};

struct GeodesicSample {
  int dim = 1;
  Vec p;       // point of H^{m+1}, c_{xi_a}(h_a)
  Vec xi_a, xi_b;
  Vec normal;  // m = 2: unit normal of the tangent plane M at o
  double h_a = 0;
  double weight = 1;  // density of the line measure relative to the sampler

  // g(s) = cos s c'_{xi_a}(h_a) + sin s xi_b
  Vec point(double s) const;
};

std::vector<GeodesicSample> sample_geodesics(int m, int n, double h_cap, std::uint64_t seed);
GeodesicSample sample_geodesic(int m, double h_cap, std::uint64_t seed, std::uint64_t index);

// Arcs of the geodesic shorter than this above the graph of h are tangencies.
inline constexpr double kTangentArc = 1e-9;

struct IntersectionCount {
  int count = 0;
  bool unstable = false;
  std::vector<double> roots;
};

// Solutions s of t(s) = h(eta(s)) with eta(s) in the region (whole sphere when
// region is empty), where g(s) = c'_{eta(s)}(t(s)). t > h at x exactly when
// <x, v_i> < 0 for every vertex v_i, so with x(s) = cos s a + sin s b the set
// {t > h} is the polar arc of the planar vectors (<a, v_i>, <b, v_i>).
IntersectionCount count_intersections(const GeodesicSample& g, const SupportFunction& h,
                                      const std::function<bool(const Vec&)>& region = {});

inline constexpr int kCrossingSamples = 2048;

// Root count for a general support function h >= h_min: sign changes of
// t(s) - h(eta(s)) on kCrossingSamples points, refined by bisection to 1e-10.
// Only |s| < acos(sinh(h_min) / sinh(h_a)) is scanned.
IntersectionCount count_intersections_sampled(const GeodesicSample& g,
                                              const std::function<double(const Vec&)>& h,
                                              double h_min,
                                              const std::function<bool(const Vec&)>& region = {});

struct CroftonConfig {
  int samples = 100000;
  double h_cap = 0;  // <= 0: max support value + 0.5
  std::uint64_t seed = 1;
  bool experimental = false;  // allow m = 2
  double quadrature_tol = 1e-3;
};

struct CroftonReport {
  int dim = 1;
  double lhs = 0;
  double rhs = 0;
  double stderr_ = 0;
  int samples = 0;
  int unstable = 0;
  double h_cap = 0;
  double kinematic_volume = 0;
  bool agree = false;
  bool rhs_nonnegative = true;
  bool differences_valid = true;  // every count difference lies in {0, 2}
  std::vector<long> difference_histogram;  // index d + 4 for d in [-4, 4]
};

// Polar boundary area of p over the directions in region (all when empty).
// m = 1 cuts grid panels where T or the region changes; m = 2 sums nodes.
double polar_area_on(const HyperbolicPolytope& p, const Grid& grid,
                     const std::function<bool(const Vec&)>& region = {});

CroftonReport crofton_compare(const HyperbolicPolytope& p1, const HyperbolicPolytope& p2,
                              const Grid& grid, const CroftonConfig& config = {});

}  // namespace hypcurv
