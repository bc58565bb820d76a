#include "aerovox/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace aerovox {

namespace {

// p strictly inside the circumcircle of CCW triangle (a,b,c). Cocircular
// points give 0 and count as outside, which keeps the bad-triangle region
// well defined on (nearly) regular inputs.
double incircle(const std::array<double, 2>& a, const std::array<double, 2>& b,
                const std::array<double, 2>& c, const std::array<double, 2>& p) {
  const double ax = a[0] - p[0], ay = a[1] - p[1];
  const double bx = b[0] - p[0], by = b[1] - p[1];
  const double cx = c[0] - p[0], cy = c[1] - p[1];
  const double a2 = ax * ax + ay * ay;
  const double b2 = bx * bx + by * by;
  const double c2 = cx * cx + cy * cy;
  return ax * (by * c2 - b2 * cy) - ay * (bx * c2 - b2 * cx) + a2 * (bx * cy - by * cx);
}

std::uint64_t interleave21(std::uint64_t x) {
  x &= 0x1fffff;
  x = (x | x << 32) & 0x1f00000000ffffULL;
  x = (x | x << 16) & 0x1f0000ff0000ffULL;
  x = (x | x << 8) & 0x100f00f00f00f00fULL;
  x = (x | x << 4) & 0x10c30c30c30c30c3ULL;
  x = (x | x << 2) & 0x1249249249249249ULL;
  return x;
}

struct Tri {
  std::array<std::uint32_t, 3> v;
  std::array<std::int32_t, 3> nb;  // nb[i] opposite v[i]; -1 = none
  bool alive = true;
};

struct Builder {
  const std::vector<std::array<double, 2>>& pts;  // unique points + 3 super vertices
  std::vector<Tri> tris;
  int last_alive = 0;

  explicit Builder(const std::vector<std::array<double, 2>>& p) : pts(p) {}

  // Walks from the last created triangle toward p; falls back to a linear
  // scan if the walk cycles (possible on degenerate inputs).
  int locate(const std::array<double, 2>& p) const {
    int t = last_alive;
    size_t steps = 0;
    const size_t max_steps = tris.size() + 16;
    while (steps++ < max_steps) {
      const Tri& tr = tris[t];
      int next = -1;
      for (int e = 0; e < 3; ++e) {
        // Edge opposite vertex e runs v[e+1] -> v[e+2].
        if (orient2d(pts[tr.v[(e + 1) % 3]], pts[tr.v[(e + 2) % 3]], p) < 0.0) {
          next = tr.nb[e];
          break;
        }
      }
      if (next == -1) return t;
      t = next;
    }
    for (size_t i = 0; i < tris.size(); ++i) {
      const Tri& tr = tris[i];
      if (!tr.alive) continue;
      bool inside = true;
      for (int e = 0; e < 3 && inside; ++e)
        inside = orient2d(pts[tr.v[(e + 1) % 3]], pts[tr.v[(e + 2) % 3]], p) >= 0.0;
      if (inside) return static_cast<int>(i);
    }
    throw std::runtime_error("delaunay: point location failed");
  }

  void insert(std::uint32_t pi) {
    const auto& p = pts[pi];
    const int seed = locate(p);

    // Grow the region of triangles whose circumcircle strictly contains p.
    // The containing triangle is always included; when p lies exactly on one
    // of its edges the edge neighbor joins too, so no zero-area triangle is
    // created during refill.
    std::vector<int> bad{seed};
    tris[seed].alive = false;
    for (int e = 0; e < 3; ++e) {
      const int n = tris[seed].nb[e];
      if (n >= 0 && tris[n].alive &&
          orient2d(pts[tris[seed].v[(e + 1) % 3]], pts[tris[seed].v[(e + 2) % 3]], p) == 0.0) {
        tris[n].alive = false;
        bad.push_back(n);
      }
    }
    for (size_t head = 0; head < bad.size(); ++head) {
      const Tri tr = tris[bad[head]];
      for (int e = 0; e < 3; ++e) {
        const int n = tr.nb[e];
        if (n < 0 || !tris[n].alive) continue;
        if (incircle(pts[tris[n].v[0]], pts[tris[n].v[1]], pts[tris[n].v[2]], p) > 0.0) {
          tris[n].alive = false;
          bad.push_back(n);
        }
      }
    }

    // Boundary edges of the carved cavity, each with the surviving outside
    // neighbor. Edges are oriented so the cavity is on the left.
    struct Edge {
      std::uint32_t a, b;
      int outside;
    };
    std::vector<Edge> boundary;
    for (int t : bad) {
      const Tri& tr = tris[t];
      for (int e = 0; e < 3; ++e) {
        const int n = tr.nb[e];
        if (n >= 0 && !tris[n].alive) continue;  // internal cavity edge
        boundary.push_back({tr.v[(e + 1) % 3], tr.v[(e + 2) % 3], n});
      }
    }

    // Refill: one triangle per boundary edge, stitched to its neighbors
    // around p via the shared cavity vertices.
    std::unordered_map<std::uint64_t, int> open_edge;  // key: vertex pair
    const int base = static_cast<int>(tris.size());
    for (size_t i = 0; i < boundary.size(); ++i) {
      const auto& ed = boundary[i];
      Tri nt;
      nt.v = {pi, ed.a, ed.b};
      nt.nb = {ed.outside, -1, -1};
      const int id = base + static_cast<int>(i);
      if (ed.outside >= 0) {
        Tri& out = tris[ed.outside];
        for (int e = 0; e < 3; ++e)
          if ((out.v[(e + 1) % 3] == ed.b && out.v[(e + 2) % 3] == ed.a)) out.nb[e] = id;
      }
      // Link around p: edge (p, a) pairs with another new triangle's (b, p).
      const auto key = [](std::uint32_t x, std::uint32_t y) {
        return (static_cast<std::uint64_t>(std::min(x, y)) << 32) | std::max(x, y);
      };
      for (int side = 1; side <= 2; ++side) {
        const std::uint32_t other = side == 1 ? ed.b : ed.a;  // edge (p, other)
        const auto k = key(pi, other);
        const auto it = open_edge.find(k);
        if (it == open_edge.end()) {
          open_edge.emplace(k, id * 4 + side);
        } else {
          const int peer = it->second / 4, peer_side = it->second % 4;
          nt.nb[side] = peer;
          tris[peer].nb[peer_side] = id;
          open_edge.erase(it);
        }
      }
      tris.push_back(nt);
    }
    last_alive = base;
  }
};

}  // namespace

double circumradius(const std::array<double, 2>& a, const std::array<double, 2>& b,
                    const std::array<double, 2>& c) {
  const double la = std::hypot(b[0] - c[0], b[1] - c[1]);
  const double lb = std::hypot(a[0] - c[0], a[1] - c[1]);
  const double lc = std::hypot(a[0] - b[0], a[1] - b[1]);
  const double area2 = std::abs(orient2d(a, b, c));
  if (area2 == 0.0) return std::numeric_limits<double>::infinity();
  return la * lb * lc / (2.0 * area2);
}

Triangulation delaunay_triangulate(const std::vector<std::array<double, 2>>& points) {
  // Merge exact duplicates; `unique` maps compact ids to original indices.
  std::map<std::pair<double, double>, std::uint32_t> seen;
  std::vector<std::uint32_t> unique;
  for (std::uint32_t i = 0; i < points.size(); ++i) {
    const auto [it, inserted] =
        seen.emplace(std::make_pair(points[i][0], points[i][1]),
                     static_cast<std::uint32_t>(unique.size()));
    (void)it;
    if (inserted) unique.push_back(i);
  }
  const std::uint32_t n = static_cast<std::uint32_t>(unique.size());
  if (n < 3) throw std::invalid_argument("delaunay: need >= 3 distinct points");

  double min_x = points[unique[0]][0], max_x = min_x;
  double min_y = points[unique[0]][1], max_y = min_y;
  for (auto u : unique) {
    min_x = std::min(min_x, points[u][0]);
    max_x = std::max(max_x, points[u][0]);
    min_y = std::min(min_y, points[u][1]);
    max_y = std::max(max_y, points[u][1]);
  }
  bool collinear = true;
  for (std::uint32_t i = 2; i < n && collinear; ++i)
    collinear = orient2d(points[unique[0]], points[unique[1]], points[unique[i]]) == 0.0;
  if (collinear) throw std::invalid_argument("delaunay: all points collinear");

  // Insertion in Morton order keeps locate() walks short.
  const double sx = max_x > min_x ? (max_x - min_x) : 1.0;
  const double sy = max_y > min_y ? (max_y - min_y) : 1.0;
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  std::vector<std::uint64_t> morton(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& p = points[unique[i]];
    const auto qx = static_cast<std::uint64_t>((p[0] - min_x) / sx * 2097151.0);
    const auto qy = static_cast<std::uint64_t>((p[1] - min_y) / sy * 2097151.0);
    morton[i] = interleave21(qx) | (interleave21(qy) << 1);
  }
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (morton[a] != morton[b]) return morton[a] < morton[b];
    return a < b;
  });

  // Working coordinates are translated/scaled isotropically to ~[-1,1]
  // (circle predicates are invariant under similarity) so the determinants
  // stay well conditioned regardless of the input's metric extent. The scale
  // is a power of two and the center a multiple of it: the transform is then
  // exact on lattice-aligned inputs, so collinear and cocircular point sets
  // keep evaluating to exact predicate zeros instead of rounding noise.
  const double extent = std::max({sx, sy, 1e-300});
  const double scale = std::ldexp(1.0, static_cast<int>(std::ceil(std::log2(extent))));
  const double inv_s = 1.0 / scale;
  const double cx = std::round(0.5 * (min_x + max_x) * inv_s) * scale;
  const double cy = std::round(0.5 * (min_y + max_y) * inv_s) * scale;
  std::vector<std::array<double, 2>> work(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& p = points[unique[i]];
    work[i] = {(p[0] - cx) * inv_s, (p[1] - cy) * inv_s};
  }
  work.push_back({-128.0, -64.0});
  work.push_back({128.0, -64.0});
  work.push_back({0.0, 128.0});

  Builder builder(work);
  Tri root;
  root.v = {n, n + 1, n + 2};
  if (orient2d(work[n], work[n + 1], work[n + 2]) < 0.0) std::swap(root.v[1], root.v[2]);
  root.nb = {-1, -1, -1};
  builder.tris.push_back(root);
  for (std::uint32_t i : order) builder.insert(i);

  Triangulation out;
  out.points = points;
  for (const Tri& t : builder.tris) {
    if (!t.alive) continue;
    if (t.v[0] >= n || t.v[1] >= n || t.v[2] >= n) continue;  // touches super-triangle
    std::array<std::uint32_t, 3> tv = {unique[t.v[0]], unique[t.v[1]], unique[t.v[2]]};
    if (orient2d(points[tv[0]], points[tv[1]], points[tv[2]]) < 0.0) std::swap(tv[1], tv[2]);
    out.triangles.push_back(tv);
  }
  return out;
}

}  // namespace aerovox
