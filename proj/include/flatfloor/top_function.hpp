#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "flatfloor/rational.hpp"

namespace flatfloor {

/// Concave, nonnegative profile on [0, 1] with unit integral: the top function
/// of a 2D sub-prism above the floor [0,1] x {0}. Data is held exactly; a
/// double mirror serves evaluation and sampling.
class TopFunction {
 public:
  enum class Kind { Constant, Linear, Quadratic, PiecewiseLinear };

  struct Knot {
    Rational x;
    Rational y;
  };

  /// G = 1 (the unit square).
  static TopFunction constant();
  /// G = 2x (the triangle with apex (1, 2)).
  static TopFunction triangle();
  /// G = 6x(1-x).
  static TopFunction parabola();

  // The constructors below rescale vertically to unit integral and record the
  // applied factor in normalization_scale(). They throw std::invalid_argument
  // on negative values, non-concave data, or zero integral.
  static TopFunction linear(const Rational& slope, const Rational& intercept);
  static TopFunction quadratic(const Rational& c2, const Rational& c1, const Rational& c0);
  /// Knots must start at x = 0, end at x = 1 and be strictly increasing in x.
  static TopFunction piecewise_linear(std::vector<Knot> knots);

  Kind kind() const { return kind_; }
  bool is_polynomial() const { return kind_ != Kind::PiecewiseLinear; }

  /// c0 + c1 x + c2 x^2 for polynomial kinds.
  const std::array<Rational, 3>& coefficients() const { return coeff_; }
  /// Canonical knots; for polynomial kinds of degree <= 1 the two endpoint knots.
  const std::vector<Knot>& knots() const { return knots_; }
  const Rational& normalization_scale() const { return scale_; }

  double operator()(double x) const;
  Rational value(const Rational& x) const;
  double max_value() const;

  /// Exact integral of G^2 over [0, 1].
  Rational square_integral() const;

  /// [lo, hi] = {x : G(x) >= level}; lo > hi encodes the empty set.
  std::pair<double, double> superlevel(double level) const;

  /// Integral of G over [0, x].
  double cdf(double x) const;
  double inverse_cdf(double u) const;

  /// x -> G(1 - x).
  TopFunction mirrored() const;
  /// Interior points where G is not smooth (knots of a piecewise-linear G).
  std::vector<double> breakpoints() const;

  std::string describe() const;

 private:
  TopFunction() = default;
  void build_cache();

  Kind kind_ = Kind::Constant;
  std::array<Rational, 3> coeff_{Rational(1), Rational(0), Rational(0)};
  std::vector<Knot> knots_;
  Rational scale_{1};

  // double mirror
  std::array<double, 3> c_{1.0, 0.0, 0.0};
  std::vector<double> xs_, ys_, cum_;
};

}  // namespace flatfloor
