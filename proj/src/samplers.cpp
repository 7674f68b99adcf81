#include "flatfloor/samplers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace flatfloor {

namespace {

// relative height with density proportional to s(u)^{m}, s(u) = 1 + (c - 1) u
double sample_relative_height(double c, int m, double r) {
  const double d = m + 1;
  if (std::fabs(c - 1.0) < 1e-12) return r;
  const double cd = std::pow(c, d);
  const double s = std::pow(1.0 + r * (cd - 1.0), 1.0 / d);
  return std::clamp((s - 1.0) / (c - 1.0), 0.0, 1.0);
}

Point3 homothetic_point_3d(const Body& body, RngStream& rng) {
  const double u = sample_relative_height(body.top_scale(), 2, rng.uniform());
  const Point2 q = sample_polygon(body.floor(), body.floor_fan_cdf(), rng);
  const double s = 1.0 + (body.top_scale() - 1.0) * u;
  const Point2 g = body.floor_centroid();
  const Point2 shift = body.apex_shift();
  return {g.x + s * (q.x - g.x) + u * shift.x, g.y + s * (q.y - g.y) + u * shift.y, u * body.max_height()};
}

}  // namespace

Point2 sample_subprism_2d(const TopFunction& top, RngStream& rng) {
  const double x = top.inverse_cdf(rng.uniform());
  return {x, top(x) * rng.uniform()};
}

Point2 sample_body_2d(const Body& body, RngStream& rng) {
  if (body.dimension() != 2) throw std::invalid_argument("sample_body_2d needs a 2D body");
  if (body.kind() == BodyKind::SubPrism2D) return sample_subprism_2d(*body.top(), rng);
  const double u = sample_relative_height(body.top_scale(), 1, rng.uniform());
  const double s = 1.0 + (body.top_scale() - 1.0) * u;
  const double q = rng.uniform();  // floor is [0, 1]
  const double g = body.floor_centroid().x;
  return {g + s * (q - g) + u * body.apex_shift().x, u * body.max_height()};
}

Point3 sample_body_3d(const Body& body, RngStream& rng) {
  if (body.dimension() != 3) throw std::invalid_argument("sample_body_3d needs a 3D body");
  if (body.kind() == BodyKind::Tetrahedron) return sample_tetrahedron(body, rng);
  return homothetic_point_3d(body, rng);
}

Point3 sample_mountain_3d(const Body& body, RngStream& rng) {
  if (body.kind() != BodyKind::Mountain || body.dimension() != 3) throw std::invalid_argument("not a 3D mountain");
  return homothetic_point_3d(body, rng);
}

Point3 sample_prism_3d(const Body& body, RngStream& rng) {
  if (body.kind() != BodyKind::Prism || body.dimension() != 3) throw std::invalid_argument("not a 3D prism");
  return homothetic_point_3d(body, rng);
}

Point3 sample_frustum(const Body& body, RngStream& rng) {
  if (body.kind() != BodyKind::Frustum || body.dimension() != 3) throw std::invalid_argument("not a 3D frustum");
  return homothetic_point_3d(body, rng);
}

Point3 sample_tetrahedron(const Body& body, RngStream& rng) {
  if (body.kind() != BodyKind::Tetrahedron) throw std::invalid_argument("not a tetrahedron");
  const double e[4] = {rng.exponential(), rng.exponential(), rng.exponential(), rng.exponential()};
  const double total = e[0] + e[1] + e[2] + e[3];
  // A = origin, B = (1,0,0), C = (0,1,0), D = (0,0,6)
  return {e[1] / total, e[2] / total, 6.0 * e[3] / total};
}

Point2 sample_polygon(std::span<const Point2> polygon, std::span<const double> fan_cdf, RngStream& rng) {
  const double pick = rng.uniform();
  auto it = std::upper_bound(fan_cdf.begin() + 1, fan_cdf.end(), pick);
  std::size_t tri = static_cast<std::size_t>(it - fan_cdf.begin());
  if (tri >= fan_cdf.size()) tri = fan_cdf.size() - 1;
  const Point2& a = polygon[0];
  const Point2& b = polygon[tri];
  const Point2& c = polygon[tri + 1];
  const double r1 = std::sqrt(rng.uniform());
  const double r2 = rng.uniform();
  const double wa = 1.0 - r1, wb = r1 * (1.0 - r2), wc = r1 * r2;
  return {wa * a.x + wb * b.x + wc * c.x, wa * a.y + wb * b.y + wc * c.y};
}

Point2 sample_density_g1(RngStream& rng) {
  const double x = std::sqrt(rng.uniform());
  return {x, rng.uniform()};
}

Point2 sample_density_g2(RngStream& rng) {
  // marginal of y: (1 - y/3)^2 on [0, 3]
  const double y = 3.0 * (1.0 - std::cbrt(rng.uniform()));
  const double x = (1.0 - y / 3.0) * std::sqrt(rng.uniform());
  return {x, y};
}

double floor_radius(const Point3& z, std::span<const Point2> floor) {
  // gauge of the polygon: max over edges of (n_e . z) / (n_e . v_e)
  double a = 0.0;
  const std::size_t k = floor.size();
  for (std::size_t i = 0; i < k; ++i) {
    const Point2& p = floor[i];
    const Point2& q = floor[(i + 1) % k];
    const double nx = q.y - p.y, ny = p.x - q.x;  // outward for counterclockwise order
    const double offset = nx * p.x + ny * p.y;
    if (!(offset > 0.0)) throw std::invalid_argument("floor centroid must be interior (at the origin)");
    a = std::max(a, (nx * z.x + ny * z.y) / offset);
  }
  if (a > 1.0 + 1e-12) throw std::invalid_argument("point lies outside the floor dilates a <= 1");
  return a;
}

TopFunction random_concave_top(RngStream& rng, int segments) {
  if (segments < 1) throw std::invalid_argument("need at least one segment");
  constexpr double kGrid = 1048576.0;  // 2^20
  std::vector<double> xs{0.0, 1.0};
  while (static_cast<int>(xs.size()) < segments + 1) {
    const double x = std::round(rng.uniform() * kGrid) / kGrid;
    if (x <= 0.0 || x >= 1.0 || std::find(xs.begin(), xs.end(), x) != xs.end()) continue;
    xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());

  std::vector<double> slopes(segments);
  for (auto& s : slopes) s = std::round((rng.uniform() * 12.0 - 6.0) * kGrid) / kGrid;
  std::sort(slopes.begin(), slopes.end(), std::greater<>());

  std::vector<TopFunction::Knot> knots;
  Rational y = 0;
  knots.push_back({Rational(0), y});
  for (int i = 0; i < segments; ++i) {
    y += rational_from_double(slopes[i]) * (rational_from_double(xs[i + 1]) - rational_from_double(xs[i]));
    knots.push_back({rational_from_double(xs[i + 1]), y});
  }
  // concave, so the minimum sits at an endpoint; lift and add a random floor offset
  Rational low = knots.front().y < knots.back().y ? knots.front().y : knots.back().y;
  const Rational lift = -low + rational_from_double(std::round(rng.uniform() * kGrid) / kGrid * 0.5);
  for (auto& k : knots) k.y += lift;
  return TopFunction::piecewise_linear(std::move(knots));
}

std::vector<Point2> random_convex_polygon(RngStream& rng, int sides) {
  if (sides < 3) throw std::invalid_argument("polygon needs at least three sides");
  // jittered angular grid
  std::vector<double> angles(sides);
  const double step = 2.0 * std::numbers::pi / sides;
  for (int i = 0; i < sides; ++i) angles[i] = step * (i + 0.8 * (rng.uniform() - 0.5));
  std::vector<Point2> out;
  for (double a : angles) out.push_back({std::cos(a), std::sin(a)});
  return out;
}

}  // namespace flatfloor
