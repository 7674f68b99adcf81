#include <stdexcept>

#include "flatfloor/bodies.hpp"

namespace flatfloor {

double unit_mountain_profile(double apex, double x) {
  if (x < 0.0 || x > 1.0) return 0.0;
  if (apex <= 0.0) return 2.0 - 2.0 * x;
  if (apex >= 1.0) return 2.0 * x;
  return x <= apex ? 2.0 * x / apex : 2.0 * (1.0 - x) / (1.0 - apex);
}

double MountainMixture::operator()(double x) const {
  double sum = 0.0;
  for (const auto& c : components) sum += c.weight.get_d() * unit_mountain_profile(c.apex.get_d(), x);
  return sum;
}

Rational MountainMixture::total_weight() const {
  Rational sum = 0;
  for (const auto& c : components) sum += c.weight;
  return sum;
}

MountainMixture mountain_decompose(const TopFunction& top) {
  if (top.kind() == TopFunction::Kind::Quadratic)
    throw std::invalid_argument("mountain decomposition needs a piecewise-linear top");
  const auto& k = top.knots();
  MountainMixture out;
  if (k.front().y > 0) out.components.push_back({Rational(0), k.front().y / 2});
  for (std::size_t i = 1; i + 1 < k.size(); ++i) {
    const Rational left = (k[i].y - k[i - 1].y) / (k[i].x - k[i - 1].x);
    const Rational right = (k[i + 1].y - k[i].y) / (k[i + 1].x - k[i].x);
    const Rational drop = left - right;  // > 0 for canonical concave knots
    const Rational& s = k[i].x;
    out.components.push_back({s, drop / (2 / s + 2 / (1 - s))});
  }
  if (k.back().y > 0) out.components.push_back({Rational(1), k.back().y / 2});
  return out;
}

MountainMixture mountain_decompose(std::vector<TopFunction::Knot> knots) {
  return mountain_decompose(TopFunction::piecewise_linear(std::move(knots)));
}

}  // namespace flatfloor
