#include "flatfloor/top_function.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace flatfloor {

namespace {

Rational poly_integral(const std::array<Rational, 3>& c) { return c[0] + c[1] / 2 + c[2] / 3; }

}  // namespace

TopFunction TopFunction::constant() { return linear(0, 1); }

TopFunction TopFunction::triangle() { return linear(2, 0); }

TopFunction TopFunction::parabola() { return quadratic(-6, 6, 0); }

TopFunction TopFunction::linear(const Rational& slope, const Rational& intercept) {
  if (intercept < 0 || slope + intercept < 0) throw std::invalid_argument("linear top function must be nonnegative on [0,1]");
  TopFunction g;
  g.coeff_ = {intercept, slope, Rational(0)};
  const Rational area = poly_integral(g.coeff_);
  if (area <= 0) throw std::invalid_argument("top function has zero integral");
  g.scale_ = 1 / area;
  for (auto& c : g.coeff_) c *= g.scale_;
  g.kind_ = (slope == 0) ? Kind::Constant : Kind::Linear;
  g.knots_ = {{Rational(0), g.coeff_[0]}, {Rational(1), g.coeff_[0] + g.coeff_[1]}};
  g.build_cache();
  return g;
}

TopFunction TopFunction::quadratic(const Rational& c2, const Rational& c1, const Rational& c0) {
  if (c2 == 0) return linear(c1, c0);
  if (c2 > 0) throw std::invalid_argument("quadratic top function must be concave");
  if (c0 < 0 || c0 + c1 + c2 < 0) throw std::invalid_argument("quadratic top function must be nonnegative on [0,1]");
  TopFunction g;
  g.kind_ = Kind::Quadratic;
  g.coeff_ = {c0, c1, c2};
  const Rational area = poly_integral(g.coeff_);
  if (area <= 0) throw std::invalid_argument("top function has zero integral");
  g.scale_ = 1 / area;
  for (auto& c : g.coeff_) c *= g.scale_;
  g.build_cache();
  return g;
}

TopFunction TopFunction::piecewise_linear(std::vector<Knot> knots) {
  if (knots.size() < 2) throw std::invalid_argument("piecewise-linear top needs at least two knots");
  if (knots.front().x != 0 || knots.back().x != 1) throw std::invalid_argument("knots must span [0,1]");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (knots[i].y < 0) throw std::invalid_argument("top function must be nonnegative");
    if (i > 0 && !(knots[i].x > knots[i - 1].x)) throw std::invalid_argument("knot abscissae must be strictly increasing");
  }
  std::vector<Rational> slopes;
  for (std::size_t i = 1; i < knots.size(); ++i)
    slopes.push_back((knots[i].y - knots[i - 1].y) / (knots[i].x - knots[i - 1].x));
  for (std::size_t i = 1; i < slopes.size(); ++i)
    if (slopes[i] > slopes[i - 1]) throw std::invalid_argument("top function must be concave");

  // canonicalize: drop interior knots without a slope change
  std::vector<Knot> kept{knots.front()};
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
    const Rational prev_slope = (knots[i].y - kept.back().y) / (knots[i].x - kept.back().x);
    const Rational next_slope = (knots[i + 1].y - knots[i].y) / (knots[i + 1].x - knots[i].x);
    if (prev_slope == next_slope) continue;
    kept.push_back(knots[i]);
  }
  kept.push_back(knots.back());

  Rational area = 0;
  for (std::size_t i = 1; i < kept.size(); ++i) area += (kept[i].x - kept[i - 1].x) * (kept[i].y + kept[i - 1].y) / 2;
  if (area <= 0) throw std::invalid_argument("top function has zero integral");

  TopFunction g;
  g.kind_ = Kind::PiecewiseLinear;
  g.scale_ = 1 / area;
  for (auto& k : kept) k.y *= g.scale_;
  g.knots_ = std::move(kept);
  g.coeff_ = {Rational(0), Rational(0), Rational(0)};
  g.build_cache();
  return g;
}

void TopFunction::build_cache() {
  for (int i = 0; i < 3; ++i) c_[i] = coeff_[i].get_d();
  xs_.clear();
  ys_.clear();
  cum_.clear();
  if (kind_ == Kind::PiecewiseLinear) {
    for (const auto& k : knots_) {
      xs_.push_back(k.x.get_d());
      ys_.push_back(k.y.get_d());
    }
    cum_.push_back(0.0);
    for (std::size_t i = 1; i < xs_.size(); ++i)
      cum_.push_back(cum_.back() + (xs_[i] - xs_[i - 1]) * (ys_[i] + ys_[i - 1]) / 2.0);
  }
}

double TopFunction::operator()(double x) const {
  if (kind_ != Kind::PiecewiseLinear) return c_[0] + x * (c_[1] + x * c_[2]);
  if (x <= xs_.front()) return ys_.front();
  if (x >= xs_.back()) return ys_.back();
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
  const double w = (x - xs_[k]) / (xs_[k + 1] - xs_[k]);
  return ys_[k] + w * (ys_[k + 1] - ys_[k]);
}

Rational TopFunction::value(const Rational& x) const {
  if (kind_ != Kind::PiecewiseLinear) return coeff_[0] + x * (coeff_[1] + x * coeff_[2]);
  if (x <= knots_.front().x) return knots_.front().y;
  for (std::size_t k = 1; k < knots_.size(); ++k) {
    if (x <= knots_[k].x) {
      const auto& a = knots_[k - 1];
      const auto& b = knots_[k];
      return a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x);
    }
  }
  return knots_.back().y;
}

double TopFunction::max_value() const {
  if (kind_ == Kind::PiecewiseLinear) return *std::max_element(ys_.begin(), ys_.end());
  if (kind_ == Kind::Quadratic) {
    const double vertex = std::clamp(-c_[1] / (2.0 * c_[2]), 0.0, 1.0);
    return (*this)(vertex);
  }
  return std::max(c_[0], c_[0] + c_[1]);
}

Rational TopFunction::square_integral() const {
  if (kind_ != Kind::PiecewiseLinear) {
    const auto& [c0, c1, c2] = coeff_;
    return c0 * c0 + c0 * c1 + (c1 * c1 + 2 * c0 * c2) / 3 + c1 * c2 / 2 + c2 * c2 / 5;
  }
  Rational sum = 0;
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    const auto& a = knots_[i - 1];
    const auto& b = knots_[i];
    sum += (b.x - a.x) * (a.y * a.y + a.y * b.y + b.y * b.y) / 3;
  }
  return sum;
}

std::pair<double, double> TopFunction::superlevel(double level) const {
  if (level <= 0.0) return {0.0, 1.0};
  if (level > max_value()) return {1.0, 0.0};
  switch (kind_) {
    case Kind::Constant: return {0.0, 1.0};
    case Kind::Linear: {
      const double a = c_[1], b = c_[0];
      const double cross = std::clamp((level - b) / a, 0.0, 1.0);
      return a > 0 ? std::pair{cross, 1.0} : std::pair{0.0, cross};
    }
    case Kind::Quadratic: {
      // c2 x^2 + c1 x + (c0 - level) >= 0 between the roots (c2 < 0)
      const double a = c_[2], b = c_[1], c = c_[0] - level;
      const double disc = std::max(0.0, b * b - 4.0 * a * c);
      const double sq = std::sqrt(disc);
      // numerically stable pair of roots
      const double q = -0.5 * (b + std::copysign(sq, b));
      double r1 = q / a;
      double r2 = (q != 0.0) ? c / q : r1;
      if (r1 > r2) std::swap(r1, r2);
      return {std::clamp(r1, 0.0, 1.0), std::clamp(r2, 0.0, 1.0)};
    }
    case Kind::PiecewiseLinear: {
      const std::size_t peak = static_cast<std::size_t>(std::max_element(ys_.begin(), ys_.end()) - ys_.begin());
      double lo = xs_[peak], hi = xs_[peak];
      for (std::size_t k = peak; k > 0; --k) {
        if (ys_[k - 1] >= level) {
          lo = xs_[k - 1];
          continue;
        }
        lo = xs_[k - 1] + (level - ys_[k - 1]) * (xs_[k] - xs_[k - 1]) / (ys_[k] - ys_[k - 1]);
        break;
      }
      for (std::size_t k = peak; k + 1 < xs_.size(); ++k) {
        if (ys_[k + 1] >= level) {
          hi = xs_[k + 1];
          continue;
        }
        hi = xs_[k] + (ys_[k] - level) * (xs_[k + 1] - xs_[k]) / (ys_[k] - ys_[k + 1]);
        break;
      }
      return {lo, hi};
    }
  }
  return {1.0, 0.0};
}

double TopFunction::cdf(double x) const {
  x = std::clamp(x, 0.0, 1.0);
  if (kind_ != Kind::PiecewiseLinear) return x * (c_[0] + x * (c_[1] / 2.0 + x * c_[2] / 3.0));
  const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  if (it == xs_.end()) return cum_.back();
  const std::size_t k = static_cast<std::size_t>(it - xs_.begin()) - 1;
  const double s = x - xs_[k];
  const double slope = (ys_[k + 1] - ys_[k]) / (xs_[k + 1] - xs_[k]);
  return cum_[k] + s * (ys_[k] + 0.5 * slope * s);
}

double TopFunction::inverse_cdf(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  switch (kind_) {
    case Kind::Constant: return u;
    case Kind::Linear: {
      const double a = c_[1], b = c_[0];
      // a x^2 / 2 + b x = u, rationalized root
      const double denom = b + std::sqrt(std::max(0.0, b * b + 2.0 * a * u));
      return denom > 0.0 ? std::clamp(2.0 * u / denom, 0.0, 1.0) : 1.0;
    }
    case Kind::PiecewiseLinear: {
      auto it = std::upper_bound(cum_.begin(), cum_.end(), u);
      std::size_t k = (it == cum_.begin()) ? 0 : static_cast<std::size_t>(it - cum_.begin()) - 1;
      if (k + 1 >= xs_.size()) k = xs_.size() - 2;
      const double r = u - cum_[k];
      const double w = xs_[k + 1] - xs_[k];
      const double slope = (ys_[k + 1] - ys_[k]) / w;
      const double denom = ys_[k] + std::sqrt(std::max(0.0, ys_[k] * ys_[k] + 2.0 * slope * r));
      const double s = denom > 0.0 ? 2.0 * r / denom : 0.0;
      return std::clamp(xs_[k] + std::min(s, w), 0.0, 1.0);
    }
    case Kind::Quadratic: {
      // safeguarded Newton on the monotone cubic cdf
      double lo = 0.0, hi = 1.0, x = u;
      for (int iter = 0; iter < 100; ++iter) {
        const double f = cdf(x) - u;
        if (f > 0.0) hi = x;
        else lo = x;
        const double g = (*this)(x);
        double next = (g > 0.0) ? x - f / g : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) < 1e-13 || hi - lo < 1e-13) return std::clamp(next, 0.0, 1.0);
        x = next;
      }
      return x;
    }
  }
  return u;
}

TopFunction TopFunction::mirrored() const {
  if (kind_ == Kind::PiecewiseLinear) {
    std::vector<Knot> rev;
    for (auto it = knots_.rbegin(); it != knots_.rend(); ++it) rev.push_back({1 - it->x, it->y});
    return piecewise_linear(std::move(rev));
  }
  const auto& [c0, c1, c2] = coeff_;
  return quadratic(c2, -2 * c2 - c1, c2 + c1 + c0);
}

std::vector<double> TopFunction::breakpoints() const {
  if (kind_ != Kind::PiecewiseLinear) return {};
  return {xs_.begin() + 1, xs_.end() - 1};
}

std::string TopFunction::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant: os << "constant"; break;
    case Kind::Linear: os << "linear(" << to_string(coeff_[1]) << "x+" << to_string(coeff_[0]) << ")"; break;
    case Kind::Quadratic:
      os << "quadratic(" << to_string(coeff_[2]) << "x^2+" << to_string(coeff_[1]) << "x+" << to_string(coeff_[0]) << ")";
      break;
    case Kind::PiecewiseLinear: os << "pwl(" << knots_.size() << " knots)"; break;
  }
  return os.str();
}

}  // namespace flatfloor
