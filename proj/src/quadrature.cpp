#include "flatfloor/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

namespace flatfloor {

namespace {

constexpr int kPoints = 15;
constexpr int kMaxDepth = 48;

struct Rule {
  std::array<double, kPoints> x{};
  std::array<double, kPoints> w{};
};

// Legendre roots by Newton iteration from the Chebyshev-like initial guesses.
Rule make_rule() {
  Rule r;
  for (int i = 0; i < kPoints; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (kPoints + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= kPoints; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = kPoints * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

const Rule& rule() {
  static const Rule r = make_rule();
  return r;
}

struct Adaptive {
  const std::function<double(double)>& f;
  EvalBudget& budget;
  double error = 0.0;

  double panel(double a, double b) {
    budget.used += kPoints;
    return gauss_legendre_15(f, a, b);
  }

  double refine(double a, double b, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = panel(a, m);
    const double right = panel(m, b);
    const double diff = std::fabs(left + right - whole);
    if (diff <= tol || depth >= kMaxDepth || budget.exhausted() || !(m > a && m < b)) {
      error += diff;
      return left + right;
    }
    return refine(a, m, left, 0.5 * tol, depth + 1) + refine(m, b, right, 0.5 * tol, depth + 1);
  }
};

}  // namespace

std::span<const double> gl15_nodes() { return rule().x; }
std::span<const double> gl15_weights() { return rule().w; }

double gauss_legendre_15(const std::function<double(double)>& f, double a, double b) {
  const Rule& r = rule();
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < kPoints; ++i) sum += r.w[i] * f(mid + half * r.x[i]);
  return half * sum;
}

QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                                    std::span<const double> breaks, EvalBudget& budget) {
  std::vector<double> cuts{a};
  for (double x : breaks)
    if (x > a && x < b) cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Adaptive engine{f, budget};
  QuadratureResult out;
  const double total = b - a;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    const double share = tol * (hi - lo) / total;
    out.value += engine.refine(lo, hi, engine.panel(lo, hi), share, 0);
  }
  out.error_estimate = engine.error;
  out.budget_exhausted = budget.exhausted();
  return out;
}

}  // namespace flatfloor
