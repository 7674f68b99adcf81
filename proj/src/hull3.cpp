#include <algorithm>
#include <optional>

#include "flatfloor/geometry.hpp"

namespace flatfloor {

namespace {

struct Triangle {
  std::array<std::size_t, 3> v;
};

Point2 project(const Point3& p, int drop_axis) {
  switch (drop_axis) {
    case 0: return {p.y, p.z};
    case 1: return {p.z, p.x};
    default: return {p.x, p.y};
  }
}

// Cross product (b-a) x (c-a) vanishes iff all three axis projections are collinear.
bool collinear(const Point3& a, const Point3& b, const Point3& c) {
  for (int axis = 0; axis < 3; ++axis)
    if (orient2(project(a, axis), project(b, axis), project(c, axis)) != 0) return false;
  return true;
}

Point3 cross_normal(const Point3& a, const Point3& b, const Point3& c) {
  const double ux = b.x - a.x, uy = b.y - a.y, uz = b.z - a.z;
  const double vx = c.x - a.x, vy = c.y - a.y, vz = c.z - a.z;
  return {uy * vz - uz * vy, uz * vx - ux * vz, ux * vy - uy * vx};
}

bool same_plane(std::span<const Point3> pts, const Triangle& ref, const Triangle& other) {
  for (std::size_t w : other.v) {
    if (w == ref.v[0] || w == ref.v[1] || w == ref.v[2]) continue;
    if (orient3(pts[ref.v[0]], pts[ref.v[1]], pts[ref.v[2]], pts[w]) != 0) return false;
  }
  return true;
}

// Hull of coplanar (or collinear / coincident) input through an axis projection
// in which the affine hull does not collapse further.
Hull3 planar_hull(std::span<const Point3> points) {
  Hull3 out;
  out.degenerate = true;
  int best_axis = 2;
  bool found = false;
  // a non-collinear triple fixes a faithful projection
  for (std::size_t i = 1; i < points.size() && !found; ++i) {
    if (points[i] == points[0]) continue;
    for (std::size_t j = i + 1; j < points.size() && !found; ++j) {
      for (int axis = 0; axis < 3; ++axis) {
        if (orient2(project(points[0], axis), project(points[i], axis), project(points[j], axis)) != 0) {
          best_axis = axis;
          found = true;
          break;
        }
      }
    }
  }
  if (!found) {
    // collinear: pick an axis where two distinct points stay distinct
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (points[i] == points[0]) continue;
      for (int axis = 0; axis < 3; ++axis) {
        if (!(project(points[i], axis) == project(points[0], axis))) {
          best_axis = axis;
          break;
        }
      }
      break;
    }
  }
  std::vector<Point2> flat(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) flat[i] = project(points[i], best_axis);
  const Hull2 h2 = convex_hull_2d(flat);
  out.vertex_indices = h2.indices;
  for (auto i : h2.indices) out.vertices.push_back(points[i]);
  return out;
}

}  // namespace

std::size_t Hull3::surface_vertex_count() const {
  std::vector<std::size_t> used;
  for (const auto& f : facets) used.insert(used.end(), f.v.begin(), f.v.end());
  std::sort(used.begin(), used.end());
  return static_cast<std::size_t>(std::unique(used.begin(), used.end()) - used.begin());
}

Hull3 convex_hull_3d(std::span<const Point3> points) {
  const std::size_t n = points.size();
  if (n < 4) return planar_hull(points);

  // initial non-degenerate tetrahedron
  std::size_t i0 = 0, i1 = n, i2 = n, i3 = n;
  for (std::size_t i = 1; i < n; ++i)
    if (!(points[i] == points[i0])) {
      i1 = i;
      break;
    }
  if (i1 == n) return planar_hull(points);
  for (std::size_t i = i1 + 1; i < n; ++i)
    if (!collinear(points[i0], points[i1], points[i])) {
      i2 = i;
      break;
    }
  if (i2 == n) return planar_hull(points);
  for (std::size_t i = i2 + 1; i < n; ++i)
    if (orient3(points[i0], points[i1], points[i2], points[i]) != 0) {
      i3 = i;
      break;
    }
  if (i3 == n) return planar_hull(points);

  std::vector<Triangle> tris;
  tris.reserve(4 * n);
  {
    const std::array<std::size_t, 4> t{i0, i1, i2, i3};
    for (int skip = 0; skip < 4; ++skip) {
      std::array<std::size_t, 3> f{};
      int k = 0;
      for (int j = 0; j < 4; ++j)
        if (j != skip) f[k++] = t[j];
      // the omitted vertex must lie strictly inside
      if (orient3(points[f[0]], points[f[1]], points[f[2]], points[t[skip]]) > 0) std::swap(f[1], f[2]);
      tris.push_back({f});
    }
  }

  std::vector<char> visible;
  std::vector<std::array<std::size_t, 2>> edges;
  std::vector<Triangle> next;
  for (std::size_t p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    visible.assign(tris.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < tris.size(); ++f) {
      const auto& v = tris[f].v;
      if (orient3(points[v[0]], points[v[1]], points[v[2]], points[p]) > 0) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) continue;  // inside or on the boundary

    edges.clear();
    for (std::size_t f = 0; f < tris.size(); ++f) {
      if (!visible[f]) continue;
      const auto& v = tris[f].v;
      for (int e = 0; e < 3; ++e) edges.push_back({v[e], v[(e + 1) % 3]});
    }
    next.clear();
    for (std::size_t f = 0; f < tris.size(); ++f)
      if (!visible[f]) next.push_back(tris[f]);
    for (const auto& e : edges) {
      const bool interior = std::any_of(edges.begin(), edges.end(), [&](const auto& o) {
        return o[0] == e[1] && o[1] == e[0];
      });
      if (!interior) next.push_back({{e[0], e[1], p}});
    }
    tris.swap(next);
  }

  Hull3 out;
  out.facets.reserve(tris.size());
  for (const auto& t : tris)
    out.facets.push_back({t.v, cross_normal(points[t.v[0]], points[t.v[1]], points[t.v[2]])});

  // strict vertices: incident facets must span at least three distinct planes
  std::vector<std::size_t> corners;
  for (const auto& t : tris) corners.insert(corners.end(), t.v.begin(), t.v.end());
  std::sort(corners.begin(), corners.end());
  corners.erase(std::unique(corners.begin(), corners.end()), corners.end());

  std::vector<const Triangle*> planes;
  for (std::size_t v : corners) {
    planes.clear();
    for (const auto& t : tris) {
      if (t.v[0] != v && t.v[1] != v && t.v[2] != v) continue;
      const bool known = std::any_of(planes.begin(), planes.end(),
                                     [&](const Triangle* r) { return same_plane(points, *r, t); });
      if (!known) planes.push_back(&t);
      if (planes.size() >= 3) break;
    }
    if (planes.size() >= 3) {
      out.vertex_indices.push_back(v);
      out.vertices.push_back(points[v]);
    }
  }
  return out;
}

}  // namespace flatfloor
