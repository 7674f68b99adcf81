#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatfloor/geometry.hpp"
#include "flatfloor/rational.hpp"
#include "flatfloor/top_function.hpp"

namespace flatfloor {

enum class BodyKind { SubPrism2D, Mountain, Prism, Frustum, Tetrahedron };

std::string to_string(BodyKind kind);

/// A 2D or 3D convex body sitting on a flat floor at height 0.
///
/// Apart from SubPrism2D, every supported body has homothetic layers: at
/// relative height u = t / H the layer is  g + s(u) (F - g) + u * shift,  with
/// s(u) = 1 + (top_scale - 1) u, g the floor centroid, and `shift` the
/// horizontal displacement of the apex (mountains). In 2D the floor is the
/// segment [0, 1] and horizontal positions live in Point2::x.
///
/// Constructors normalize to Vol_{d-1}(F) = 1 and Vol_d(K) = 1 with an
/// affine map (horizontal floor scale, then vertical scale); the factors are
/// recorded. The tetrahedron keeps A,B,C,D = (0,0,0),(1,0,0),(0,1,0),(0,0,6):
/// floor area 1/2, volume 1.
class Body {
 public:
  static Body subprism_2d(TopFunction top);
  /// Triangle (0,0), (1,0), (apex_x, 2).
  static Body mountain_2d(double apex_x = 0.5);
  /// The unit square.
  static Body prism_2d();
  static Body mountain(std::vector<Point2> floor, Point3 apex);
  static Body prism(std::vector<Point2> floor);
  /// Convex hull of F x {0} and c_h F x {h}, c_h = (2/h - 1)^{1/(d-1)}, 0 < h < 2.
  /// For d = 3 the hull is rescaled vertically to unit volume (see vertical_scale()).
  static Body frustum(double h, int dimension, std::vector<Point2> floor = {});
  static Body tetrahedron();

  /// Unit-area square centred at the origin.
  static std::vector<Point2> unit_square_floor();
  /// Regular k-gon, unit area, centred at the origin.
  static std::vector<Point2> regular_polygon_floor(int sides);

  int dimension() const { return dimension_; }
  BodyKind kind() const { return kind_; }
  const TopFunction* top() const { return top_ ? &*top_ : nullptr; }

  /// 3D: counterclockwise floor polygon. 2D: the two endpoints at height 0.
  const std::vector<Point2>& floor() const { return floor_; }
  double floor_area() const { return floor_area_; }
  Point2 floor_centroid() const { return centroid_; }
  Point2 apex_shift() const { return shift_; }
  double max_height() const;
  double top_scale() const { return top_scale_; }
  double vertical_scale() const { return vertical_scale_; }
  double horizontal_scale() const { return horizontal_scale_; }

  /// s(t / H): linear size of the layer relative to the floor.
  double layer_scale(double t) const;
  /// (d-1)-volume of the horizontal slice at height t.
  double layer_volume(double t) const;
  /// Volume of K below height t.
  double below_volume(double t) const;
  double volume() const { return below_volume(max_height()); }

  /// Q_K(2) = 1 - 2 Vol(F) E[H] / (d Vol(K)), evaluated in closed form.
  double q2_from_layers() const;
  /// Mean height E[H] of a uniform point.
  double mean_height() const;

  /// Cumulative triangle-fan areas of the floor (3D), used by samplers.
  const std::vector<double>& floor_fan_cdf() const { return fan_cdf_; }

  std::string describe() const;

 private:
  Body() = default;
  void finish_floor_3d(bool normalize);
  // integral of u^k s(u)^{d-1} over [0, upto]
  double layer_moment(int k, double upto) const;

  int dimension_ = 2;
  BodyKind kind_ = BodyKind::Prism;
  std::optional<TopFunction> top_;
  std::vector<Point2> floor_;
  std::vector<double> fan_cdf_;
  double floor_area_ = 1.0;
  Point2 centroid_{0.5, 0.0};
  Point2 shift_{0.0, 0.0};
  double height_ = 1.0;
  double top_scale_ = 1.0;
  double vertical_scale_ = 1.0;
  double horizontal_scale_ = 1.0;
};

/// Area centroid of a simple polygon (either orientation).
Point2 polygon_centroid(const std::vector<Point2>& polygon);

/// Unit mountain profile with apex (s, 2) on [0, 1]: 2x/s left of s, 2(1-x)/(1-s) right of it.
double unit_mountain_profile(double apex, double x);

struct MountainComponent {
  Rational apex;
  Rational weight;
};

/// G = sum_i weight_i * M_{apex_i}.
struct MountainMixture {
  std::vector<MountainComponent> components;
  double operator()(double x) const;
  Rational total_weight() const;
};

/// Decomposes a piecewise-linear concave top into unit mountains: interior
/// knot weights from the slope drop, boundary weights G(0)/2 and G(1)/2.
/// Throws std::invalid_argument for non piecewise-linear kinds.
MountainMixture mountain_decompose(const TopFunction& top);
/// Validates raw knots (rejecting non-concave data) before decomposing.
MountainMixture mountain_decompose(std::vector<TopFunction::Knot> knots);

}  // namespace flatfloor
