#include "flatfloor/decomposition.hpp"

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "flatfloor/exact_seq.hpp"
#include "flatfloor/quadrature.hpp"

namespace flatfloor {

namespace {

Rational antiderivative(const TopFunction& g, const Rational& x) {
  if (g.is_polynomial()) {
    const auto& [c0, c1, c2] = g.coefficients();
    return x * (c0 + x * (c1 / 2 + x * c2 / 3));
  }
  Rational sum = 0;
  const auto& k = g.knots();
  for (std::size_t i = 1; i < k.size(); ++i) {
    if (k[i - 1].x >= x) break;
    const Rational hi = k[i].x < x ? k[i].x : x;
    sum += (hi - k[i - 1].x) * (k[i - 1].y + g.value(hi)) / 2;
  }
  return sum;
}

TopFunction make_poly(const Rational& a2, const Rational& a1, const Rational& a0) {
  return a2 == 0 ? TopFunction::linear(a1, a0) : TopFunction::quadratic(a2, a1, a0);
}

// Linear tops c0 + c1 x: NL = 2 - 2x, NR = 2x, |L| = t G(0)/2, |R| = (1-t) G(1)/2.
Rational exact_linear(const Rational& c0, const Rational& c1, int n, const std::vector<Rational>& tri) {
  if (n <= 1) return 1;
  const Rational half_left = c0 / 2, half_right = (c0 + c1) / 2;
  Rational sum = 0;
  for (int k = 0; k < n; ++k) {
    const int m = n - 1 - k;
    const Rational moment = c0 * beta_rational(k + 1, m + 1) + c1 * beta_rational(k + 2, m + 1);
    sum += Rational(binomial(n - 1, k)) * tri[k] * tri[m] * pow(half_left, k) * pow(half_right, m) * moment;
  }
  return sum;
}

std::vector<Rational> triangle_table(int n) {
  std::vector<Rational> tri{Rational(1)};
  for (int i = 1; i <= n; ++i) {
    tri.push_back(1);  // placeholder, never read at index i
    tri[i] = exact_linear(0, 2, i, tri);
  }
  return tri;
}

// 6x(1-x): NL = NR = G, |L| = t^3, |R| = (1-t)^3.
std::vector<Rational> parabola_table(int n) {
  std::vector<Rational> p{Rational(1)};
  for (int i = 1; i <= n; ++i) {
    Rational sum = 0;
    for (int k = 0; k < i; ++k) {
      const int m = i - 1 - k;
      sum += Rational(binomial(i - 1, k)) * p[k] * p[m] * 6 * beta_rational(3 * k + 2, 3 * m + 2);
    }
    p.push_back(sum);
  }
  return p;
}

bool is_parabola(const TopFunction& g) {
  if (g.kind() != TopFunction::Kind::Quadratic) return false;
  const auto& c = g.coefficients();
  return c[0] == 0 && c[1] == 6 && c[2] == -6;
}

// ---- numeric engine ----

struct Profile {
  bool poly = true;
  std::array<double, 3> c{1.0, 0.0, 0.0};
  std::vector<double> xs, ys;

  double value(double x) const {
    if (poly) return c[0] + x * (c[1] + x * c[2]);
    std::size_t k = 1;
    while (k + 1 < xs.size() && xs[k] < x) ++k;
    const double w = (x - xs[k - 1]) / (xs[k] - xs[k - 1]);
    return ys[k - 1] + w * (ys[k] - ys[k - 1]);
  }
  double antiderivative(double x) const {
    if (poly) return x * (c[0] + x * (c[1] / 2.0 + x * c[2] / 3.0));
    double sum = 0.0;
    for (std::size_t i = 1; i < xs.size() && xs[i - 1] < x; ++i) {
      const double hi = std::min(xs[i], x);
      sum += (hi - xs[i - 1]) * (ys[i - 1] + value(hi)) / 2.0;
    }
    return sum;
  }
  std::vector<double> breaks() const {
    if (poly) return {};
    return {xs.begin() + 1, xs.end() - 1};
  }
  std::size_t segments() const { return poly ? 1 : xs.size() - 1; }
};

enum class Family { None, TriangleUp, TriangleDown, Square, Parabola };

Family classify(const Profile& p) {
  if (!p.poly) return Family::None;
  auto near = [&](double a, double b, double c) {
    constexpr double eps = 1e-11;
    return std::fabs(p.c[0] - a) < eps && std::fabs(p.c[1] - b) < eps && std::fabs(p.c[2] - c) < eps;
  };
  if (near(0, 2, 0)) return Family::TriangleUp;
  if (near(2, -2, 0)) return Family::TriangleDown;
  if (near(1, 0, 0)) return Family::Square;
  if (near(0, 6, -6)) return Family::Parabola;
  return Family::None;
}

Profile profile_of(const TopFunction& g) {
  Profile p;
  if (g.is_polynomial()) {
    for (int i = 0; i < 3; ++i) p.c[i] = g.coefficients()[i].get_d();
    return p;
  }
  p.poly = false;
  for (const auto& k : g.knots()) {
    p.xs.push_back(k.x.get_d());
    p.ys.push_back(k.y.get_d());
  }
  if (p.xs.size() == 2) {
    p.poly = true;
    p.c = {p.ys[0], p.ys[1] - p.ys[0], 0.0};
  }
  return p;
}

// Merges interior knots whose slope change is negligible, then rescales to unit integral.
Profile finish_pwl(std::vector<double> xs, std::vector<double> ys) {
  Profile p;
  p.poly = false;
  p.xs.push_back(xs.front());
  p.ys.push_back(ys.front());
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (xs[i] - p.xs.back() < 1e-15 || xs[i + 1] - xs[i] < 1e-15) continue;
    const double s0 = (ys[i] - p.ys.back()) / (xs[i] - p.xs.back());
    const double s1 = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
    if (std::fabs(s0 - s1) <= 1e-12 * (1.0 + std::fabs(s0) + std::fabs(s1))) continue;
    p.xs.push_back(xs[i]);
    p.ys.push_back(ys[i]);
  }
  p.xs.push_back(xs.back());
  p.ys.push_back(ys.back());
  for (auto& y : p.ys) y = std::max(0.0, y);
  const double area = p.antiderivative(1.0);
  for (auto& y : p.ys) y /= area;
  if (p.xs.size() == 2) {
    p.poly = true;
    p.c = {p.ys[0], p.ys[1] - p.ys[0], 0.0};
  }
  return p;
}

struct NumericSplit {
  double left_mass = 0.0, right_mass = 0.0;
  Profile left, right;
};

constexpr double kZeroMass = 1e-14;

NumericSplit numeric_split(const Profile& g, double t) {
  NumericSplit s;
  const double u = 1.0 - t;
  if (g.poly) {
    // cancellation-free forms: |L| = t (c0/2 - c2 t^2/6), |R| = u (G(1)/2 - c2 u^2/6)
    const auto& [c0, c1, c2] = g.c;
    const double g1 = c0 + c1 + c2;
    const double left_scale = c0 / 2.0 - c2 * t * t / 6.0;
    const double right_scale = g1 / 2.0 - c2 * u * u / 6.0;
    s.left_mass = t * left_scale;
    s.right_mass = u * right_scale;
    if (s.left_mass > kZeroMass) s.left.c = {c0 / left_scale, (-c0 - c2 * t * t) / left_scale, c2 * t * t / left_scale};
    if (s.right_mass > kZeroMass) s.right.c = {0.0, (g1 - c2 * u * u) / right_scale, c2 * u * u / right_scale};
    return s;
  }
  const double gt = g.value(t);
  const double below = g.antiderivative(t);
  s.left_mass = below - t * gt / 2.0;
  s.right_mass = (g.antiderivative(1.0) - below) - (1.0 - t) * gt / 2.0;
  if (s.left_mass > kZeroMass) {
    std::vector<double> xs{0.0}, ys{g.ys.front()};
    for (std::size_t i = 1; i + 1 < g.xs.size() && g.xs[i] < t; ++i) {
      xs.push_back(g.xs[i] / t);
      ys.push_back(g.ys[i] - g.xs[i] * gt / t);
    }
    xs.push_back(1.0);
    ys.push_back(0.0);
    s.left = finish_pwl(std::move(xs), std::move(ys));
  }
  if (s.right_mass > kZeroMass) {
    std::vector<double> xs{0.0}, ys{0.0};
    for (std::size_t i = 1; i + 1 < g.xs.size(); ++i) {
      if (g.xs[i] <= t) continue;
      const double x = (g.xs[i] - t) / u;
      xs.push_back(x);
      ys.push_back(g.ys[i] - (1.0 - x) * gt);
    }
    xs.push_back(1.0);
    ys.push_back(g.ys.back());
    s.right = finish_pwl(std::move(xs), std::move(ys));
  }
  return s;
}

struct Value {
  double q = 1.0;
  double err = 0.0;
};

class Engine {
 public:
  explicit Engine(const DecompOptions& options) : options_(options) { budget_.limit = options.budget; }

  Value q(const Profile& g, int n, double tol) {
    if (n <= 1) return {};
    if (budget_.exhausted()) return {0.5, 0.5};  // Q lies in [0, 1]
    if (g.segments() > options_.max_segments) overflow_ = true;
    const Family fam = classify(g);
    if (fam != Family::None) {
      const auto it = memo_.find({fam, n});
      if (it != memo_.end()) return it->second;
    }
    const double inner_tol = tol / 4.0;
    double inner_err = 0.0;
    std::vector<double> binom(n);
    for (int k = 0; k < n; ++k) binom[k] = binomial(n - 1, k).get_d();

    auto integrand = [&](double t) {
      const double gt = g.value(t);
      if (!(gt > 0.0)) return 0.0;
      const NumericSplit s = numeric_split(g, t);
      const bool has_left = s.left_mass > kZeroMass, has_right = s.right_mass > kZeroMass;
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        const int m = n - 1 - k;
        if ((k > 0 && !has_left) || (m > 0 && !has_right)) continue;
        const double weight = binom[k] * std::pow(s.left_mass, k) * std::pow(s.right_mass, m);
        if (weight == 0.0) continue;
        const Value ql = k > 1 ? q(s.left, k, inner_tol) : Value{};
        const Value qr = m > 1 ? q(s.right, m, inner_tol) : Value{};
        inner_err = std::max(inner_err, ql.err + qr.err);
        sum += weight * ql.q * qr.q;
      }
      return gt * sum;
    };
    const std::vector<double> breaks = g.breaks();
    const QuadratureResult r = integrate_adaptive(integrand, 0.0, 1.0, tol / 2.0, breaks, budget_);
    const Value v{r.value, r.error_estimate + 2.0 * inner_err};
    if (fam != Family::None) memo_[{fam, n}] = v;
    return v;
  }

  const EvalBudget& budget() const { return budget_; }
  bool overflow() const { return overflow_; }

 private:
  DecompOptions options_;
  EvalBudget budget_;
  bool overflow_ = false;
  std::map<std::pair<Family, int>, Value> memo_;
};

}  // namespace

NormalizedSplit split(const TopFunction& top, const Rational& t) {
  if (!(t > 0 && t < 1)) throw std::invalid_argument("split abscissa must lie in (0, 1)");
  const Rational gt = top.value(t);
  if (gt <= 0) throw std::invalid_argument("split needs G(t) > 0");
  const Rational below = antiderivative(top, t);
  NormalizedSplit s;
  s.t = t;
  s.left.mass = below - t * gt / 2;
  s.right.mass = (1 - below) - (1 - t) * gt / 2;
  const Rational u = 1 - t;

  if (top.is_polynomial()) {
    const auto& [c0, c1, c2] = top.coefficients();
    if (s.left.mass > 0) s.left.top = make_poly(c2 * t * t, c1 * t - gt, c0);
    if (s.right.mass > 0) s.right.top = make_poly(c2 * u * u, 2 * c2 * t * u + c1 * u + gt, Rational(0));
    return s;
  }

  const auto& knots = top.knots();
  if (s.left.mass > 0) {
    std::vector<TopFunction::Knot> k{{Rational(0), knots.front().y}};
    for (std::size_t i = 1; i + 1 < knots.size() && knots[i].x < t; ++i)
      k.push_back({knots[i].x / t, knots[i].y - knots[i].x * gt / t});
    k.push_back({Rational(1), Rational(0)});
    s.left.top = TopFunction::piecewise_linear(std::move(k));
  }
  if (s.right.mass > 0) {
    std::vector<TopFunction::Knot> k{{Rational(0), Rational(0)}};
    for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
      if (knots[i].x <= t) continue;
      const Rational x = (knots[i].x - t) / u;
      k.push_back({x, knots[i].y - (1 - x) * gt});
    }
    k.push_back({Rational(1), knots.back().y});
    s.right.top = TopFunction::piecewise_linear(std::move(k));
  }
  return s;
}

DecompResult q_decomp(const TopFunction& top, int n, const DecompOptions& options) {
  if (n < 0) throw std::invalid_argument("n must be >= 0");
  if (!(options.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  DecompResult out;
  if (n <= 1) {
    out.exact = Rational(1);
    out.value = 1.0;
    out.method = "base";
    return out;
  }

  if (!options.force_numeric) {
    const bool linear = top.kind() == TopFunction::Kind::Constant || top.kind() == TopFunction::Kind::Linear ||
                        (top.kind() == TopFunction::Kind::PiecewiseLinear && top.knots().size() == 2);
    if (linear) {
      const Rational c0 = top.value(0), c1 = top.value(1) - c0;
      out.exact = exact_linear(c0, c1, n, triangle_table(n - 1));
      out.method = "exact-linear";
    } else if (is_parabola(top)) {
      out.exact = parabola_table(n).back();
      out.method = "exact-parabola";
    }
    if (out.exact) {
      out.value = out.exact->get_d();
      return out;
    }
  }

  Engine engine(options);
  const Value v = engine.q(profile_of(top), n, options.tol);
  out.value = v.q;
  out.error_estimate = v.err;
  out.evaluations = engine.budget().used;
  out.budget_exhausted = engine.budget().exhausted();
  out.segment_overflow = engine.overflow();
  out.method = "numeric";
  return out;
}

Rational q2_exact_subprism(const TopFunction& top) { return 1 - top.square_integral() / 2; }

}  // namespace flatfloor
