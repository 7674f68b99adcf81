#include <algorithm>
#include <numeric>

#include "flatfloor/geometry.hpp"

namespace flatfloor {

Hull2 convex_hull_2d(std::span<const Point2> points) {
  Hull2 hull;
  if (points.empty()) {
    hull.degenerate = true;
    return hull;
  }

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const Point2& p = points[i];
    const Point2& q = points[j];
    return p.x < q.x || (p.x == q.x && (p.y < q.y || (p.y == q.y && i < j)));
  });
  // exact duplicates keep their first occurrence only
  order.erase(std::unique(order.begin(), order.end(),
                          [&](std::size_t i, std::size_t j) { return points[i] == points[j]; }),
              order.end());

  if (order.size() < 3) {
    hull.indices = order;
    for (auto i : order) hull.vertices.push_back(points[i]);
    hull.degenerate = true;
    return hull;
  }

  // Andrew's monotone chain; popping on orient <= 0 drops collinear points.
  std::vector<std::size_t> chain(2 * order.size());
  std::size_t k = 0;
  for (std::size_t i : order) {
    while (k >= 2 && orient2(points[chain[k - 2]], points[chain[k - 1]], points[i]) <= 0) --k;
    chain[k++] = i;
  }
  const std::size_t lower = k + 1;
  for (std::size_t r = order.size() - 1; r-- > 0;) {
    const std::size_t i = order[r];
    while (k >= lower && orient2(points[chain[k - 2]], points[chain[k - 1]], points[i]) <= 0) --k;
    chain[k++] = i;
  }
  chain.resize(k - 1);  // last equals first

  hull.indices = std::move(chain);
  for (auto i : hull.indices) hull.vertices.push_back(points[i]);
  hull.degenerate = hull.indices.size() < 3;
  if (hull.degenerate) {
    // collinear input: the chain collapses to the two extreme points
    hull.indices = {order.front(), order.back()};
    hull.vertices = {points[order.front()], points[order.back()]};
  }
  return hull;
}

}  // namespace flatfloor
