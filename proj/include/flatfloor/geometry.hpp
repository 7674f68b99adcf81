#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace flatfloor {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Point3&, const Point3&) = default;
};

// Orientation predicates. The floating-point determinant is accepted when its
// magnitude clears a certified forward error bound; otherwise the sign is
// recomputed in exact rational arithmetic, so the result is always exact.

/// Sign of the signed area of (a, b, c): +1 counterclockwise, -1 clockwise, 0 collinear.
int orient2(const Point2& a, const Point2& b, const Point2& c);

/// Sign of det[b-a, c-a, d-a]: +1 when d lies on the side of plane (a, b, c)
/// that (b-a) x (c-a) points to.
int orient3(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

/// Exact-arithmetic orientations, used by the filtered predicates and by tests.
int orient2_exact(const Point2& a, const Point2& b, const Point2& c);
int orient3_exact(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

/// Counterclockwise strictly convex hull. `indices` refer to the input span.
struct Hull2 {
  std::vector<Point2> vertices;
  std::vector<std::size_t> indices;
  bool degenerate = false;  // fewer than three strict vertices (coincident or collinear input)
};

Hull2 convex_hull_2d(std::span<const Point2> points);

struct Facet {
  std::array<std::size_t, 3> v{};  // indices into the input, counterclockwise seen from outside
  Point3 normal;                    // outward, not normalized
};

/// Triangulated 3D hull. `vertex_indices` lists strict vertices only: points in
/// the relative interior of an edge or of a (possibly triangulated) planar face
/// are excluded even if they appear as triangle corners.
struct Hull3 {
  std::vector<std::size_t> vertex_indices;
  std::vector<Point3> vertices;
  std::vector<Facet> facets;  // empty when degenerate
  bool degenerate = false;    // all input coplanar; vertices then come from the planar hull
  std::size_t surface_vertex_count() const;
};

Hull3 convex_hull_3d(std::span<const Point3> points);

/// True iff every point is a strict vertex of CH(points U {floor_a, floor_b}).
/// Throws std::invalid_argument when a point has height <= 0 or the floor is malformed.
bool in_convex_position_with_floor_2d(std::span<const Point2> points, const Point2& floor_a,
                                      const Point2& floor_b);

/// True iff every point is a strict vertex of CH(points U floor x {0}).
/// `floor` lists the extremal vertices of the floor polygon.
bool in_convex_position_with_floor_3d(std::span<const Point3> points, std::span<const Point2> floor);

/// Classic convex position (no floor): every point is a strict hull vertex.
bool in_convex_position_2d(std::span<const Point2> points);
bool in_convex_position_3d(std::span<const Point3> points);

}  // namespace flatfloor
