#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "flatfloor/rational.hpp"
#include "flatfloor/top_function.hpp"

namespace flatfloor {

/// One side of a split: the normalized top and the raw mass of the region.
/// `top` is empty when the mass is zero (chord on the graph).
struct SplitSide {
  std::optional<TopFunction> top;
  Rational mass;
};

/// Left: the part of D_G above the chord (0,0)-(t,G(t)); right: above (t,G(t))-(1,0).
/// Each is mapped to the unit floor by a vertical-line-preserving affine map.
struct NormalizedSplit {
  Rational t;
  SplitSide left;
  SplitSide right;
};

/// Exact split at t in (0, 1). Throws std::invalid_argument when G(t) = 0 or t is outside (0, 1).
NormalizedSplit split(const TopFunction& top, const Rational& t);

struct DecompOptions {
  double tol = 1e-9;
  std::uint64_t budget = 200'000'000;  // integrand evaluations, all recursion levels together
  std::size_t max_segments = 64;
  bool force_numeric = false;  // skip the exact family dispatch
};

struct DecompResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::optional<Rational> exact;  // set by the exact family dispatch
  bool budget_exhausted = false;
  bool segment_overflow = false;
  std::uint64_t evaluations = 0;
  std::string method;
};

/// Q^G_n by the convolution-integral recursion over the split abscissa.
DecompResult q_decomp(const TopFunction& top, int n, const DecompOptions& options = {});

/// Q^G_2 = 1 - (1/2) int G^2, exact.
Rational q2_exact_subprism(const TopFunction& top);

}  // namespace flatfloor
