#pragma once

#include <cstdint>
#include <functional>
#include <span>

namespace flatfloor {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool budget_exhausted = false;
};

/// Shared evaluation counter; once `used` reaches `limit`, panels stop refining.
struct EvalBudget {
  std::uint64_t limit = UINT64_MAX;
  std::uint64_t used = 0;
  bool exhausted() const { return used >= limit; }
};

/// 15-point Gauss-Legendre rule on [a, b].
double gauss_legendre_15(const std::function<double(double)>& f, double a, double b);

/// Adaptive Gauss-Legendre: a panel is bisected while its 15-point value and the
/// sum over its halves differ by more than the panel's share of `tol`.
/// `breaks` (inside (a, b)) become fixed panel boundaries.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                                    std::span<const double> breaks, EvalBudget& budget);

/// Nodes on [-1, 1] and weights of the 15-point rule.
std::span<const double> gl15_nodes();
std::span<const double> gl15_weights();

}  // namespace flatfloor
