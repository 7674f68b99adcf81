#include "flatfloor/bodies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace flatfloor {

namespace {

double binom(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
  return out;
}

}  // namespace

std::string to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::SubPrism2D: return "subprism";
    case BodyKind::Mountain: return "mountain";
    case BodyKind::Prism: return "prism";
    case BodyKind::Frustum: return "frustum";
    case BodyKind::Tetrahedron: return "tetrahedron";
  }
  return "unknown";
}

Body Body::subprism_2d(TopFunction top) {
  Body b;
  b.dimension_ = 2;
  b.kind_ = BodyKind::SubPrism2D;
  b.floor_ = {{0.0, 0.0}, {1.0, 0.0}};
  b.height_ = top.max_value();
  b.top_ = std::move(top);
  return b;
}

Body Body::mountain_2d(double apex_x) {
  if (!std::isfinite(apex_x)) throw std::invalid_argument("apex must be finite");
  Body b;
  b.dimension_ = 2;
  b.kind_ = BodyKind::Mountain;
  b.floor_ = {{0.0, 0.0}, {1.0, 0.0}};
  b.centroid_ = {0.5, 0.0};
  b.shift_ = {apex_x - 0.5, 0.0};
  b.height_ = 2.0;
  b.top_scale_ = 0.0;
  return b;
}

Body Body::prism_2d() {
  Body b;
  b.dimension_ = 2;
  b.kind_ = BodyKind::Prism;
  b.floor_ = {{0.0, 0.0}, {1.0, 0.0}};
  b.centroid_ = {0.5, 0.0};
  return b;
}

void Body::finish_floor_3d(bool normalize) {
  if (floor_.size() < 3) throw std::invalid_argument("3D floor needs at least three vertices");
  double area2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < floor_.size(); ++i) {
    const Point2& p = floor_[i];
    const Point2& q = floor_[(i + 1) % floor_.size()];
    const double cr = p.x * q.y - q.x * p.y;
    area2 += cr;
    cx += (p.x + q.x) * cr;
    cy += (p.y + q.y) * cr;
  }
  if (area2 < 0.0) {
    std::reverse(floor_.begin(), floor_.end());
    area2 = -area2;
    cx = -cx;
    cy = -cy;
  }
  if (!(area2 > 0.0)) throw std::invalid_argument("floor polygon has zero area");
  const std::size_t k = floor_.size();
  for (std::size_t i = 0; i < k; ++i)
    if (orient2(floor_[i], floor_[(i + 1) % k], floor_[(i + 2) % k]) <= 0)
      throw std::invalid_argument("floor polygon must be strictly convex");
  floor_area_ = area2 / 2.0;
  centroid_ = {cx / (3.0 * area2), cy / (3.0 * area2)};

  if (normalize) {
    horizontal_scale_ = 1.0 / std::sqrt(floor_area_);
    for (auto& p : floor_) p = {(p.x - centroid_.x) * horizontal_scale_, (p.y - centroid_.y) * horizontal_scale_};
    shift_ = {shift_.x * horizontal_scale_, shift_.y * horizontal_scale_};
    centroid_ = {0.0, 0.0};
    floor_area_ = 1.0;
  }

  fan_cdf_.assign(1, 0.0);
  for (std::size_t i = 1; i + 1 < k; ++i) {
    const Point2 &a = floor_[0], &b = floor_[i], &c = floor_[i + 1];
    fan_cdf_.push_back(fan_cdf_.back() + 0.5 * ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)));
  }
  for (auto& v : fan_cdf_) v /= fan_cdf_.back();
}

Body Body::mountain(std::vector<Point2> floor, Point3 apex) {
  if (!(apex.z > 0.0)) throw std::invalid_argument("mountain apex must lie above the floor");
  Body b;
  b.dimension_ = 3;
  b.kind_ = BodyKind::Mountain;
  b.floor_ = std::move(floor);
  b.shift_ = {apex.x, apex.y};  // re-expressed relative to the centroid below
  Body probe = b;
  probe.finish_floor_3d(false);
  b.shift_ = {apex.x - probe.centroid_.x, apex.y - probe.centroid_.y};
  b.finish_floor_3d(true);
  b.top_scale_ = 0.0;
  b.height_ = 3.0;
  b.vertical_scale_ = 3.0 / apex.z;
  return b;
}

Body Body::prism(std::vector<Point2> floor) {
  Body b;
  b.dimension_ = 3;
  b.kind_ = BodyKind::Prism;
  b.floor_ = std::move(floor);
  b.finish_floor_3d(true);
  b.height_ = 1.0;
  b.top_scale_ = 1.0;
  return b;
}

Body Body::frustum(double h, int dimension, std::vector<Point2> floor) {
  if (!(h > 0.0 && h < 2.0)) throw std::invalid_argument("frustum height must lie in (0, 2)");
  if (dimension != 2 && dimension != 3) throw std::invalid_argument("frustum dimension must be 2 or 3");
  Body b;
  b.dimension_ = dimension;
  b.kind_ = BodyKind::Frustum;
  b.top_scale_ = std::pow(2.0 / h - 1.0, 1.0 / (dimension - 1));
  if (dimension == 2) {
    b.floor_ = {{0.0, 0.0}, {1.0, 0.0}};
    b.centroid_ = {0.5, 0.0};
  } else {
    b.floor_ = floor.empty() ? unit_square_floor() : std::move(floor);
    b.finish_floor_3d(true);
  }
  b.height_ = h;
  const double raw_volume = b.volume();
  b.vertical_scale_ = 1.0 / raw_volume;
  b.height_ = h / raw_volume;
  return b;
}

Body Body::tetrahedron() {
  Body b;
  b.dimension_ = 3;
  b.kind_ = BodyKind::Tetrahedron;
  b.floor_ = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
  b.finish_floor_3d(false);
  b.shift_ = {-b.centroid_.x, -b.centroid_.y};  // apex D sits above A
  b.top_scale_ = 0.0;
  b.height_ = 6.0;
  return b;
}

Point2 polygon_centroid(const std::vector<Point2>& polygon) {
  double area2 = 0.0, cx = 0.0, cy = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    const Point2& p = polygon[i];
    const Point2& q = polygon[(i + 1) % polygon.size()];
    const double cr = p.x * q.y - q.x * p.y;
    area2 += cr;
    cx += (p.x + q.x) * cr;
    cy += (p.y + q.y) * cr;
  }
  if (area2 == 0.0) throw std::invalid_argument("polygon has zero area");
  return {cx / (3.0 * area2), cy / (3.0 * area2)};
}

std::vector<Point2> Body::unit_square_floor() { return {{-0.5, -0.5}, {0.5, -0.5}, {0.5, 0.5}, {-0.5, 0.5}}; }

std::vector<Point2> Body::regular_polygon_floor(int sides) {
  if (sides < 3) throw std::invalid_argument("polygon needs at least three sides");
  const double area_unit_radius = 0.5 * sides * std::sin(2.0 * std::numbers::pi / sides);
  const double r = 1.0 / std::sqrt(area_unit_radius);
  std::vector<Point2> out;
  for (int i = 0; i < sides; ++i) {
    const double a = 2.0 * std::numbers::pi * i / sides;
    out.push_back({r * std::cos(a), r * std::sin(a)});
  }
  return out;
}

double Body::max_height() const { return height_; }

double Body::layer_scale(double t) const {
  const double u = t / height_;
  return 1.0 + (top_scale_ - 1.0) * u;
}

double Body::layer_moment(int k, double upto) const {
  // integral_0^upto u^k (1 + (c-1) u)^{d-1} du, expanded in powers of (c-1)
  const int m = dimension_ - 1;
  const double cm1 = top_scale_ - 1.0;
  double sum = 0.0;
  for (int j = 0; j <= m; ++j)
    sum += binom(m, j) * std::pow(cm1, j) * std::pow(upto, j + k + 1) / (j + k + 1);
  return sum;
}

double Body::layer_volume(double t) const {
  if (t < 0.0 || t > height_) return 0.0;
  if (kind_ == BodyKind::SubPrism2D) {
    const auto [lo, hi] = top_->superlevel(t);
    return hi > lo ? hi - lo : 0.0;
  }
  return floor_area_ * std::pow(layer_scale(t), dimension_ - 1);
}

double Body::below_volume(double t) const {
  if (t <= 0.0) return 0.0;
  if (t >= height_) t = height_;
  if (kind_ == BodyKind::SubPrism2D) {
    // integral of min(G, t)
    const auto [lo, hi] = top_->superlevel(t);
    if (!(hi > lo)) return 1.0;
    return 1.0 - (top_->cdf(hi) - top_->cdf(lo)) + t * (hi - lo);
  }
  return floor_area_ * height_ * layer_moment(0, t / height_);
}

double Body::mean_height() const {
  if (kind_ == BodyKind::SubPrism2D) return to_double(top_->square_integral()) / 2.0;
  return floor_area_ * height_ * height_ * layer_moment(1, 1.0) / volume();
}

double Body::q2_from_layers() const { return 1.0 - 2.0 * floor_area_ * mean_height() / (dimension_ * volume()); }

std::string Body::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << " d=" << dimension_;
  if (top_) os << " top=" << top_->describe();
  if (kind_ != BodyKind::SubPrism2D) os << " H=" << height_ << " top_scale=" << top_scale_;
  if (dimension_ == 3) os << " floor=" << floor_.size() << "-gon";
  return os.str();
}

}  // namespace flatfloor
