#include "hypcurv/hull.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "hypcurv/errors.hpp"
#include "hypcurv/predicates.hpp"

namespace hypcurv {

std::vector<int> convex_hull_2d(const std::vector<Eigen::Vector2d>& pts) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return pts[a].x() < pts[b].x() || (pts[a].x() == pts[b].x() && pts[a].y() < pts[b].y());
  });
  idx.erase(std::unique(idx.begin(), idx.end(), [&](int a, int b) { return pts[a] == pts[b]; }),
            idx.end());
  if (idx.size() < 3) return idx;

  // Andrew's monotone chain, dropping collinear points.
  std::vector<int> h(2 * idx.size());
  size_t k = 0;
  for (int i : idx) {
    while (k >= 2 && orient2d(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= 0) --k;
    h[k++] = i;
  }
  for (size_t j = idx.size() - 1, t = k + 1; j-- > 0;) {
    const int i = idx[j];
    while (k >= t && orient2d(pts[h[k - 2]], pts[h[k - 1]], pts[i]) <= 0) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  return h;
}

namespace {

std::uint64_t edge_key(int a, int b) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

}  // namespace

Hull3 convex_hull_3d(const std::vector<Eigen::Vector3d>& p) {
  const int n = static_cast<int>(p.size());
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  for (int i = 1; i < n && i1 < 0; ++i)
    if (p[i] != p[i0]) i1 = i;
  if (i1 < 0) fail(ErrorKind::degenerate_hull, "all points coincide");
  for (int i = 1; i < n && i2 < 0; ++i)
    if (!collinear3d(p[i0], p[i1], p[i])) i2 = i;
  if (i2 < 0) fail(ErrorKind::degenerate_hull, "all points collinear");
  int s = 0;
  for (int i = 1; i < n && i3 < 0; ++i) {
    s = orient3d(p[i0], p[i1], p[i2], p[i]);
    if (s != 0) i3 = i;
  }
  if (i3 < 0) fail(ErrorKind::degenerate_hull, "all points coplanar");
  if (s < 0) std::swap(i1, i2);

  std::vector<std::array<int, 3>> faces = {
      {i0, i2, i1}, {i0, i1, i3}, {i1, i2, i3}, {i2, i0, i3}};
  std::vector<char> alive(4, 1);

  std::vector<int> visible;
  std::unordered_set<std::uint64_t> vis_edges;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2 || i == i3) continue;
    visible.clear();
    for (size_t f = 0; f < faces.size(); ++f) {
      if (!alive[f]) continue;
      const auto& t = faces[f];
      if (orient3d(p[t[0]], p[t[1]], p[t[2]], p[i]) > 0) visible.push_back(static_cast<int>(f));
    }
    if (visible.empty()) continue;
    vis_edges.clear();
    for (int f : visible)
      for (int e = 0; e < 3; ++e) vis_edges.insert(edge_key(faces[f][e], faces[f][(e + 1) % 3]));
    for (int f : visible) {
      alive[f] = 0;
      for (int e = 0; e < 3; ++e) {
        const int a = faces[f][e], b = faces[f][(e + 1) % 3];
        if (!vis_edges.count(edge_key(b, a))) {
          faces.push_back({a, b, i});
          alive.push_back(1);
        }
      }
    }
  }

  Hull3 h;
  for (size_t f = 0; f < faces.size(); ++f)
    if (alive[f]) h.faces.push_back(faces[f]);

  h.on_hull.assign(n, 0);
  h.extreme.assign(n, 0);
  h.vertex_faces.assign(n, {});
  std::unordered_map<std::uint64_t, int> edge_face;
  for (size_t f = 0; f < h.faces.size(); ++f) {
    for (int e = 0; e < 3; ++e) {
      edge_face[edge_key(h.faces[f][e], h.faces[f][(e + 1) % 3])] = static_cast<int>(f);
      h.on_hull[h.faces[f][e]] = 1;
    }
  }

  std::vector<int> first_face(n, -1);
  for (size_t f = 0; f < h.faces.size(); ++f)
    for (int v : h.faces[f])
      if (first_face[v] < 0) first_face[v] = static_cast<int>(f);

  for (int v = 0; v < n; ++v) {
    if (first_face[v] < 0) continue;
    // Walk around v: from face (v, a, b) step to the face owning edge (a, v).
    auto& ring = h.vertex_faces[v];
    int f = first_face[v];
    do {
      ring.push_back(f);
      const auto& t = h.faces[f];
      const int k = t[0] == v ? 0 : (t[1] == v ? 1 : 2);
      const int a = t[(k + 1) % 3];
      f = edge_face.at(edge_key(a, v));
    } while (f != ring.front() && ring.size() <= h.faces.size());

    // Count distinct supporting planes among the incident faces.
    std::vector<int> reps;
    for (int g : ring) {
      const auto& t = h.faces[g];
      bool found = false;
      for (int r : reps) {
        const auto& u = h.faces[r];
        bool same = true;
        for (int x : t) {
          if (orient3d(p[u[0]], p[u[1]], p[u[2]], p[x]) != 0) {
            same = false;
            break;
          }
        }
        if (same) {
          found = true;
          break;
        }
      }
      if (!found) reps.push_back(g);
      if (reps.size() >= 3) break;
    }
    h.extreme[v] = reps.size() >= 3;
  }
  return h;
}

}  // namespace hypcurv
