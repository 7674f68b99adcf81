#pragma once

// Box-mass oracles for uniform samplers: exact masses of random axis-aligned
// boxes from Simpson integration of clipped layer polygons.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "flatfloor/bodies.hpp"
#include "flatfloor/rng.hpp"
#include "flatfloor/samplers.hpp"

namespace boxes {

using namespace flatfloor;

constexpr std::size_t kDraws = 1'000'000;

struct Box {
  double lo[3], hi[3];
};

inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double shoelace(const std::vector<Point2>& p) {
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const Point2& a = p[i];
    const Point2& b = p[(i + 1) % p.size()];
    s += a.x * b.y - a.y * b.x;
  }
  return 0.5 * s;
}

// Sutherland-Hodgman against one axis-aligned half-plane
inline std::vector<Point2> clip(const std::vector<Point2>& poly, int axis, double bound, bool keep_below) {
  std::vector<Point2> out;
  auto coord = [&](const Point2& p) { return axis == 0 ? p.x : p.y; };
  auto inside = [&](const Point2& p) { return keep_below ? coord(p) <= bound : coord(p) >= bound; };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % poly.size()];
    const bool ia = inside(a), ib = inside(b);
    if (ia) out.push_back(a);
    if (ia != ib) {
      const double t = (bound - coord(a)) / (coord(b) - coord(a));
      out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return out;
}

inline double rect_area(std::vector<Point2> poly, const Box& b) {
  poly = clip(poly, 0, b.lo[0], false);
  if (!poly.empty()) poly = clip(poly, 0, b.hi[0], true);
  if (!poly.empty()) poly = clip(poly, 1, b.lo[1], false);
  if (!poly.empty()) poly = clip(poly, 1, b.hi[1], true);
  return poly.size() < 3 ? 0.0 : std::fabs(shoelace(poly));
}

inline double uniform(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

inline std::vector<Box> random_boxes(RngStream& rng, const double lo[3], const double hi[3], int dim) {
  std::vector<Box> boxes(50);
  for (auto& b : boxes)
    for (int k = 0; k < dim; ++k) {
      double u = uniform(rng, lo[k], hi[k]), v = uniform(rng, lo[k], hi[k]);
      b.lo[k] = std::min(u, v);
      b.hi[k] = std::max(u, v);
    }
  return boxes;
}

inline bool inside(const Box& b, const double* p, int dim) {
  for (int k = 0; k < dim; ++k)
    if (p[k] < b.lo[k] || p[k] > b.hi[k]) return false;
  return true;
}

// number of boxes whose empirical mass is off its exact value by more than 4 binomial sigmas
inline int box_failures(const std::vector<Box>& boxes, const std::vector<double>& exact,
                        const std::function<void(double*)>& draw, int dim, std::size_t draws = kDraws,
                        std::ostream* log = nullptr) {
  std::vector<std::size_t> hits(boxes.size(), 0);
  double p[3];
  for (std::size_t i = 0; i < draws; ++i) {
    draw(p);
    for (std::size_t j = 0; j < boxes.size(); ++j) hits[j] += inside(boxes[j], p, dim);
  }
  int bad = 0;
  for (std::size_t j = 0; j < boxes.size(); ++j) {
    const double q = exact[j];
    const double sigma = std::sqrt(std::max(q * (1 - q), 1e-12) / draws);
    const double got = static_cast<double>(hits[j]) / draws;
    if (std::fabs(got - q) > 4 * sigma + 1e-9) {
      ++bad;
      if (log) *log << "box " << j << ": empirical " << got << " exact " << q << " sigma " << sigma << "\n";
    }
  }
  return bad;
}

inline int box_failures_2d(const std::function<double(double)>& top, double xmax_height,
                           const std::function<Point2(RngStream&)>& sampler, std::uint64_t seed,
                           std::size_t draws = kDraws, std::ostream* log = nullptr) {
  RngStream boxes_rng(seed, 99);
  const double lo[3] = {0, 0, 0}, hi[3] = {1, xmax_height, 0};
  const auto boxes = random_boxes(boxes_rng, lo, hi, 2);
  std::vector<double> exact;
  for (const auto& b : boxes)
    exact.push_back(simpson([&](double x) { return std::max(0.0, std::min(top(x), b.hi[1]) - b.lo[1]); },
                            b.lo[0], b.hi[0], 20000));
  RngStream rng(seed, 0);
  return box_failures(boxes, exact, [&](double* p) { const Point2 q = sampler(rng); p[0] = q.x; p[1] = q.y; }, 2, draws, log);
}

inline int box_failures_3d(const Body& body, const std::function<std::vector<Point2>(double)>& layer, double height,
                           std::uint64_t seed, std::size_t draws = kDraws, std::ostream* log = nullptr) {
  double lo[3] = {1e9, 1e9, 0}, hi[3] = {-1e9, -1e9, height};
  for (double z : {0.0, height * 0.5, height})
    for (const auto& q : layer(z)) {
      lo[0] = std::min(lo[0], q.x), hi[0] = std::max(hi[0], q.x);
      lo[1] = std::min(lo[1], q.y), hi[1] = std::max(hi[1], q.y);
    }
  RngStream boxes_rng(seed, 99);
  const auto boxes = random_boxes(boxes_rng, lo, hi, 3);
  std::vector<double> exact;
  for (const auto& b : boxes) exact.push_back(simpson([&](double z) { return rect_area(layer(z), b); }, b.lo[2], b.hi[2], 2000));
  RngStream rng(seed, 0);
  return box_failures(boxes, exact, [&](double* p) { const Point3 q = sample_body_3d(body, rng); p[0] = q.x; p[1] = q.y; p[2] = q.z; }, 3, draws, log);
}

inline std::vector<Point2> scaled(const std::vector<Point2>& f, double s, Point2 offset) {
  std::vector<Point2> out;
  for (const auto& p : f) out.push_back({s * p.x + offset.x, s * p.y + offset.y});
  return out;
}

}  // namespace boxes
