#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace flatfloor {

/// One checked inequality: lower <= value <= upper, with either side optional.
/// Statistical records carry sigma and already include their 4 sigma slack in the bounds.
struct TrialRecord {
  std::size_t index = 0;
  std::string body;
  std::string check;
  std::optional<double> lower;
  double value = 0.0;
  std::optional<double> upper;
  double sigma = 0.0;
  double margin = 0.0;  // distance to the nearest bound; negative on failure
  bool pass = true;
  bool flagged = false;  // low power: reported, not fatal
};

struct VerifyReport {
  std::string suite;
  std::uint64_t seed = 0;
  bool gating = true;
  std::vector<std::pair<std::string, std::string>> header;  // random-body laws and parameters
  std::vector<TrialRecord> trials;

  std::size_t passed() const;
  std::size_t failed() const;   // non-flagged failures
  std::size_t flagged() const;
  bool ok() const { return !gating || failed() == 0; }
  std::string to_json() const;
  std::string summary() const;
};

struct VerifyOptions {
  std::size_t trials = 100;
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 1;
  int workers = 0;
  int n_max = 4;
};

VerifyReport suite_prism_bounds(const VerifyOptions& options);
VerifyReport suite_ccsf(const VerifyOptions& options);
VerifyReport suite_dominance(const VerifyOptions& options);
VerifyReport suite_layer_concavity(const VerifyOptions& options);
VerifyReport suite_tetra_sandwich(const VerifyOptions& options);
VerifyReport suite_w_formula(const VerifyOptions& options);
VerifyReport suite_mountain_mixture(const VerifyOptions& options);
/// Non-gating: t_n <= Q <= q_n for 2D sub-prisms, n = 3, 4.
VerifyReport suite_conjecture(const VerifyOptions& options);

/// W(a, h) = a^3 h / (3 (1 - a)).
double w_formula(double a, double h);

const std::vector<std::string>& suite_names();
/// Throws std::invalid_argument on unknown names.
VerifyReport run_suite(const std::string& name, const VerifyOptions& options);

}  // namespace flatfloor
