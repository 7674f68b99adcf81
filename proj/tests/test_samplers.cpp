#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <vector>

#include "flatfloor/bodies.hpp"
#include "flatfloor/rng.hpp"
#include "flatfloor/samplers.hpp"
#include "box_oracle.hpp"

using namespace flatfloor;
using namespace boxes;

namespace {

struct Moments {
  double mean = 0, sd = 0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= v.size();
  for (double x : v) m.sd += (x - m.mean) * (x - m.mean);
  m.sd = std::sqrt(m.sd / (v.size() - 1));
  return m;
}

void check_mean(const std::vector<double>& v, double expected) {
  const Moments m = moments(v);
  CHECK(std::fabs(m.mean - expected) <= 3 * m.sd / std::sqrt(double(v.size())));
}

double ks_statistic(std::vector<double> v, const std::function<double(double)>& cdf) {
  std::sort(v.begin(), v.end());
  double d = 0.0;
  const double n = static_cast<double>(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = cdf(v[i]);
    d = std::max({d, std::fabs(f - i / n), std::fabs((i + 1) / n - f)});
  }
  return d;
}

}  // namespace

TEST_CASE("sub-prism sampler moments") {
  RngStream rng(101, 0);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < kDraws; ++i) xs.push_back(sample_subprism_2d(TopFunction::triangle(), rng).x);
  check_mean(xs, 2.0 / 3.0);
  for (std::size_t i = 0; i < kDraws; ++i) ys.push_back(sample_subprism_2d(TopFunction::parabola(), rng).y);
  check_mean(ys, 3.0 / 5.0);
  RngStream sq(102, 0);
  xs.clear(), ys.clear();
  for (std::size_t i = 0; i < kDraws; ++i) {
    const Point2 p = sample_subprism_2d(TopFunction::constant(), sq);
    xs.push_back(p.x), ys.push_back(p.y);
  }
  check_mean(xs, 0.5);
  check_mean(ys, 0.5);
}

TEST_CASE("3D height means") {
  const Body mountain = Body::mountain(Body::regular_polygon_floor(6), {0.2, -0.1, 1.0});
  const Body prism = Body::prism(Body::unit_square_floor());
  const Body tetra = Body::tetrahedron();
  RngStream rng(103, 0);
  std::vector<double> hm, hp, ht;
  for (std::size_t i = 0; i < kDraws; ++i) {
    hm.push_back(sample_mountain_3d(mountain, rng).z);
    hp.push_back(sample_prism_3d(prism, rng).z);
    ht.push_back(sample_tetrahedron(tetra, rng).z);
  }
  CHECK(mountain.max_height() == doctest::Approx(3.0));
  check_mean(hm, 0.75);
  check_mean(hp, 0.5);
  check_mean(ht, 1.5);
}

TEST_CASE("height laws pass Kolmogorov-Smirnov") {
  const Body mountain = Body::mountain(Body::unit_square_floor(), {0.1, 0.3, 2.0});
  const Body tetra = Body::tetrahedron();
  RngStream rng(104, 0);
  std::vector<double> hm, ht, hf;
  const double h = 0.4, c = std::sqrt(2.0 / h - 1.0);
  const double raw = h * (c * c * c - 1.0) / (3.0 * (c - 1.0));
  const double height = h / raw;
  const Body frustum = Body::frustum(h, 3);
  CHECK(frustum.max_height() == doctest::Approx(height).epsilon(1e-12));
  for (std::size_t i = 0; i < kDraws; ++i) {
    hm.push_back(sample_body_3d(mountain, rng).z);
    ht.push_back(sample_body_3d(tetra, rng).z);
    hf.push_back(sample_body_3d(frustum, rng).z);
  }
  const double bound = 2.0 / std::sqrt(double(kDraws));
  CHECK(ks_statistic(hm, [](double t) { return 1.0 - std::pow(1.0 - t / 3.0, 3); }) < bound);
  CHECK(ks_statistic(ht, [](double t) { return 1.0 - std::pow(1.0 - t / 6.0, 3); }) < bound);
  CHECK(ks_statistic(hf, [&](double t) {
          const double s = 1.0 + (c - 1.0) * t / height;
          return (s * s * s - 1.0) / (c * c * c - 1.0);
        }) < bound);
  CHECK(ks_statistic(hm, [&](double t) { return mountain.below_volume(t); }) < bound);
}

TEST_CASE("2D samplers are uniform on random boxes") {
  CHECK(box_failures_2d([](double x) { return 2 * x; }, 2.0, [](RngStream& r) { return sample_subprism_2d(TopFunction::triangle(), r); }, 201) == 0);
  CHECK(box_failures_2d([](double x) { return 6 * x * (1 - x); }, 1.5,
                 [](RngStream& r) { return sample_subprism_2d(TopFunction::parabola(), r); }, 202) == 0);
  const TopFunction quad = TopFunction::quadratic(-1, Rational(1, 2), 1);
  CHECK(box_failures_2d([&](double x) { return quad(x); }, quad.max_value(), [&](RngStream& r) { return sample_subprism_2d(quad, r); }, 203) == 0);
  RngStream top_rng(204, 7);
  const TopFunction pwl = random_concave_top(top_rng, 6);
  CHECK(box_failures_2d([&](double x) { return pwl(x); }, pwl.max_value(), [&](RngStream& r) { return sample_subprism_2d(pwl, r); }, 205) == 0);
  const Body m2 = Body::mountain_2d(0.3);
  CHECK(box_failures_2d([](double x) { return x <= 0.3 ? 2 * x / 0.3 : 2 * (1 - x) / 0.7; }, 2.0,
                 [&](RngStream& r) { return sample_body_2d(m2, r); }, 206) == 0);
  const Body f2 = Body::frustum(0.5, 2);  // trapezoid of height 0.5 with top width 3
  RngStream rng(208, 0);
  std::vector<double> ys;
  for (std::size_t i = 0; i < 200000; ++i) {
    const Point2 p = sample_body_2d(f2, rng);
    ys.push_back(p.y);
    CHECK_FALSE(p.y > 0.5);
    const double half = 0.5 + 1.0 * p.y / 0.5;  // half width grows from 1/2 to 3/2
    if (std::fabs(p.x - 0.5) > half + 1e-12) FAIL("trapezoid sample outside");
  }
  check_mean(ys, 7.0 / 24.0);  // layer width 1 + 2u, u = y / 0.5
}

TEST_CASE("densities g1 and g2 are uniform on random boxes") {
  RngStream box_rng(301, 99);
  const double lo[3] = {0, 0, 0}, hi1[3] = {1, 1, 0}, hi2[3] = {1, 3, 0};
  const auto b1 = random_boxes(box_rng, lo, hi1, 2);
  std::vector<double> e1;
  for (const auto& b : b1) e1.push_back((b.hi[0] * b.hi[0] - b.lo[0] * b.lo[0]) * (b.hi[1] - b.lo[1]));
  RngStream r1(301, 0);
  CHECK(box_failures(b1, e1, [&](double* p) { const Point2 q = sample_density_g1(r1); p[0] = q.x; p[1] = q.y; }, 2) == 0);
  const auto b2 = random_boxes(box_rng, lo, hi2, 2);
  std::vector<double> e2;
  for (const auto& b : b2)
    e2.push_back(simpson([&](double y) {
                   const double top = std::min(b.hi[0], 1.0 - y / 3.0);
                   return top > b.lo[0] ? top * top - b.lo[0] * b.lo[0] : 0.0;
                 },
                 b.lo[1], b.hi[1], 20000));
  RngStream r2(302, 0);
  CHECK(box_failures(b2, e2, [&](double* p) { const Point2 q = sample_density_g2(r2); p[0] = q.x; p[1] = q.y; }, 2) == 0);
}

TEST_CASE("3D samplers are uniform on random boxes") {
  const Body tetra = Body::tetrahedron();
  CHECK(box_failures_3d(tetra, [](double z) { return scaled({{0, 0}, {1, 0}, {0, 1}}, 1.0 - z / 6.0, {0, 0}); }, 6.0, 401) == 0);

  const Body prism = Body::prism(Body::regular_polygon_floor(5));
  CHECK(std::fabs(shoelace(prism.floor())) == doctest::Approx(1.0));
  CHECK(box_failures_3d(prism, [&](double) { return prism.floor(); }, 1.0, 402) == 0);

  const Body mountain = Body::mountain(Body::unit_square_floor(), {0.4, -0.2, 5.0});
  const Point2 apex{0.4 * mountain.horizontal_scale(), -0.2 * mountain.horizontal_scale()};
  CHECK(box_failures_3d(mountain,
                 [&](double z) {
                   const double u = z / 3.0;
                   return scaled(mountain.floor(), 1.0 - u, {u * apex.x, u * apex.y});
                 },
                 3.0, 403) == 0);

  const double h = 0.3, c = std::sqrt(2.0 / h - 1.0);
  const double height = h / (h * (c * c * c - 1.0) / (3.0 * (c - 1.0)));
  const Body frustum = Body::frustum(h, 3);
  CHECK(box_failures_3d(frustum, [&](double z) { return scaled(frustum.floor(), 1.0 + (c - 1.0) * z / height, {0, 0}); }, height, 404) == 0);

  RngStream poly_rng(405, 3);
  const auto raw_floor = random_convex_polygon(poly_rng, 7);
  const Body m2 = Body::mountain(raw_floor, {0.0, 0.0, 1.0});
  const Point2 g = polygon_centroid(raw_floor);
  const Point2 apex2{-g.x * m2.horizontal_scale(), -g.y * m2.horizontal_scale()};
  CHECK(box_failures_3d(m2,
                 [&](double z) {
                   const double u = z / 3.0;
                   return scaled(m2.floor(), 1.0 - u, {u * apex2.x, u * apex2.y});
                 },
                 3.0, 406) == 0);
}

TEST_CASE("normalized floors have unit area and centroid at the origin") {
  RngStream rng(501, 0);
  for (int k = 3; k < 12; ++k) {
    const Body b = Body::prism(random_convex_polygon(rng, k));
    CHECK(shoelace(b.floor()) == doctest::Approx(1.0));
    double cx = 0, cy = 0;
    const auto& f = b.floor();
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Point2& p = f[i];
      const Point2& q = f[(i + 1) % f.size()];
      const double w = p.x * q.y - q.x * p.y;
      cx += (p.x + q.x) * w, cy += (p.y + q.y) * w;
    }
    CHECK(std::fabs(cx / 6.0) < 1e-12);
    CHECK(std::fabs(cy / 6.0) < 1e-12);
  }
}

TEST_CASE("streams are deterministic and distinct") {
  const Body m = Body::mountain(Body::unit_square_floor(), {0, 0, 1});
  auto run = [&](std::uint64_t seed, std::uint64_t stream) {
    RngStream rng(seed, stream);
    std::vector<Point3> out;
    for (int i = 0; i < 1000; ++i) out.push_back(sample_body_3d(m, rng));
    return out;
  };
  const auto a = run(7, 3), b = run(7, 3), c = run(7, 4), d = run(8, 3);
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(Point3)) == 0);
  CHECK(std::memcmp(a.data(), c.data(), a.size() * sizeof(Point3)) != 0);
  CHECK(std::memcmp(a.data(), d.data(), a.size() * sizeof(Point3)) != 0);
  RngStream r(7, 3);
  for (int i = 0; i < 10; ++i) r.uniform();
  CHECK(r.draws() == 10);
}

TEST_CASE("g2 support and conditional mean") {
  RngStream rng(601, 0);
  std::vector<double> ys;
  constexpr int kBins = 10;
  double sum[kBins] = {}, sum_sq[kBins] = {};
  std::size_t cnt[kBins] = {};
  bool support = true;
  for (std::size_t i = 0; i < kDraws; ++i) {
    const Point2 p = sample_density_g2(rng);
    support = support && p.x <= 1.0 - p.y / 3.0 && p.x >= 0.0 && p.y >= 0.0 && p.y <= 3.0;
    ys.push_back(p.y);
    const int bin = std::min(kBins - 1, static_cast<int>(p.y / 3.0 * kBins));
    const double r = p.x / (1.0 - p.y / 3.0);  // E[r | y] = 2/3
    sum[bin] += r, sum_sq[bin] += r * r, ++cnt[bin];
  }
  CHECK(support);
  check_mean(ys, 0.75);
  for (int b = 0; b < kBins; ++b) {
    if (cnt[b] < 1000) continue;
    const double mean = sum[b] / cnt[b];
    const double sd = std::sqrt(sum_sq[b] / cnt[b] - mean * mean);
    CHECK(std::fabs(mean - 2.0 / 3.0) <= 4 * sd / std::sqrt(double(cnt[b])));
  }
}

TEST_CASE("floor radius") {
  const auto square = Body::unit_square_floor();
  CHECK(floor_radius({0, 0, 0.4}, square) == 0.0);
  CHECK(floor_radius({0.5, 0.1, 0}, square) == doctest::Approx(1.0));
  CHECK(floor_radius({-0.25, 0.1, 0}, square) == doctest::Approx(0.5));
  CHECK_THROWS_AS(floor_radius({0.7, 0, 0}, square), std::invalid_argument);
  const auto hex = Body::regular_polygon_floor(6);
  for (const auto& v : hex) {
    CHECK(floor_radius({v.x, v.y, 0}, hex) == doctest::Approx(1.0));
    CHECK(floor_radius({0.3 * v.x, 0.3 * v.y, 0}, hex) == doctest::Approx(0.3));
  }
  const std::vector<Point2> off{{1, 1}, {2, 1}, {2, 2}, {1, 2}};
  CHECK_THROWS_AS(floor_radius({1.5, 1.5, 0}, off), std::invalid_argument);

  const Body prism = Body::prism(Body::regular_polygon_floor(5));
  RngStream rng(701, 0);
  const double levels[] = {0.2, 0.5, 0.8, 0.95};
  std::size_t below[4] = {};
  for (std::size_t i = 0; i < kDraws; ++i) {
    const double a = floor_radius(sample_body_3d(prism, rng), prism.floor());
    for (int k = 0; k < 4; ++k) below[k] += a <= levels[k];
  }
  for (int k = 0; k < 4; ++k) {
    const double p = levels[k] * levels[k];
    CHECK(std::fabs(double(below[k]) / kDraws - p) <= 4 * std::sqrt(p * (1 - p) / kDraws));
  }
}

TEST_CASE("random concave tops") {
  RngStream rng(801, 0);
  for (int i = 0; i < 200; ++i) {
    const TopFunction g = random_concave_top(rng, 1 + i % 9);
    CHECK(g.kind() == TopFunction::Kind::PiecewiseLinear);
    CHECK(g.cdf(1.0) == doctest::Approx(1.0));
    for (const auto& k : g.knots()) CHECK(k.y >= 0);
  }
  CHECK_THROWS_AS(random_concave_top(rng, 0), std::invalid_argument);
  const auto poly = random_convex_polygon(rng, 8);
  CHECK(poly.size() == 8);
  CHECK(shoelace(poly) > 0);
}
