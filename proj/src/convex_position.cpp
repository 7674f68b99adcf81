#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flatfloor/geometry.hpp"

namespace flatfloor {

namespace {

template <class Indices>
bool covers_range(const Indices& hull_indices, std::size_t first, std::size_t last) {
  std::size_t hits = 0;
  for (auto i : hull_indices)
    if (i >= first && i < last) ++hits;
  return hits == last - first;
}

}  // namespace

bool in_convex_position_with_floor_2d(std::span<const Point2> points, const Point2& floor_a,
                                      const Point2& floor_b) {
  if (floor_a.y != 0.0 || floor_b.y != 0.0 || floor_a == floor_b)
    throw std::invalid_argument("floor endpoints must be distinct and at height 0");
  for (const auto& p : points)
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !(p.y > 0.0))
      throw std::invalid_argument("floor predicate requires finite points with positive height");
  if (points.size() <= 1) return true;

  thread_local std::vector<Point2> all;
  all.assign(points.begin(), points.end());
  all.push_back(floor_a);
  all.push_back(floor_b);
  return covers_range(convex_hull_2d(all).indices, 0, points.size());
}

bool in_convex_position_with_floor_3d(std::span<const Point3> points, std::span<const Point2> floor) {
  if (floor.size() < 3) throw std::invalid_argument("3D floor needs at least three vertices");
  for (const auto& p : points)
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z) || !(p.z > 0.0))
      throw std::invalid_argument("floor predicate requires finite points with positive height");
  if (points.size() <= 1) return true;

  thread_local std::vector<Point3> all;
  all.clear();
  for (const auto& f : floor) all.push_back({f.x, f.y, 0.0});
  all.insert(all.end(), points.begin(), points.end());
  const Hull3 hull = convex_hull_3d(all);
  if (hull.degenerate) throw std::invalid_argument("floor polygon is degenerate");
  return covers_range(hull.vertex_indices, floor.size(), all.size());
}

bool in_convex_position_2d(std::span<const Point2> points) {
  if (points.size() <= 1) return true;
  return covers_range(convex_hull_2d(points).indices, 0, points.size());
}

bool in_convex_position_3d(std::span<const Point3> points) {
  if (points.size() <= 1) return true;
  return covers_range(convex_hull_3d(points).vertex_indices, 0, points.size());
}

}  // namespace flatfloor
