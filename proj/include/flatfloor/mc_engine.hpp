#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "flatfloor/bodies.hpp"

namespace flatfloor {

enum class ExecPath { Serial, Parallel };

struct McOptions {
  std::uint64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  int workers = 0;  // 0: FLATFLOOR_WORKERS or the OpenMP default
  ExecPath path = ExecPath::Parallel;
  std::uint64_t block_size = 1 << 14;
};

struct EstimateResult {
  std::string estimator;
  double estimate = 0.0;
  double std_error = 0.0;  // Wilson-adjusted for indicator estimators
  std::pair<double, double> ci95{0.0, 0.0};
  std::uint64_t n_samples = 0;
  std::uint64_t n_success = 0;
  std::uint64_t seed = 0;
  std::int64_t wall_ms = 0;
  int workers = 1;
  bool low_power = false;  // fewer than 100 successes
  bool indicator = true;
};

/// Worker count used when McOptions::workers is 0.
int default_workers();

/// Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.96);
/// sqrt(p~(1-p~)/(n+z^2)) with p~ the Wilson centre.
double wilson_sigma(std::uint64_t k, std::uint64_t n, double z = 1.96);

/// Q_K(n): n uniform points of K are strict vertices of CH(points U F).
EstimateResult estimate_Q(const Body& body, int n, const McOptions& options);
/// Q_K(2) = 1 - 2 Vol(F) E[H] / (d Vol(K)), with a delta-method standard error.
EstimateResult estimate_Q2_height(const Body& body, const McOptions& options);
/// P_K(n): n uniform points of K in convex position (no floor).
EstimateResult estimate_P(const Body& body, int n, const McOptions& options);
/// beta_1(n): density 2x on [0,1]^2.
EstimateResult estimate_beta1(int n, const McOptions& options);
/// beta_2(n): density 2x 1{x <= 1 - y/3} on [0,1] x [0,3].
EstimateResult estimate_beta2(int n, const McOptions& options);
/// Points of the unit 3D mountain over `floor` (apex above the centroid),
/// mapped to (F-radius, height) and tested with the beta predicate.
EstimateResult estimate_fradius_reduction(int n, const McOptions& options);
EstimateResult estimate_fradius_reduction(int n, const McOptions& options, std::vector<Point2> floor);

/// The beta predicate: the mirrored set {(+-x_i, y_i)} in convex position with the floor [-1, 1].
bool in_convex_position_with_anchor(std::span<const Point2> points);

}  // namespace flatfloor
