#include "flatfloor/mc_engine.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include <omp.h>

#include "flatfloor/geometry.hpp"
#include "flatfloor/mc_kernels.hpp"
#include "flatfloor/samplers.hpp"

namespace flatfloor {

namespace {

constexpr double kZ = 1.96;
constexpr std::uint64_t kLowPowerSuccesses = 100;

int resolve_workers(const McOptions& options) {
  if (options.path == ExecPath::Serial) return 1;
  return options.workers > 0 ? options.workers : default_workers();
}

void check_options(const McOptions& options) {
  if (options.samples < 1) throw std::invalid_argument("samples must be >= 1");
  if (options.block_size < 1) throw std::invalid_argument("block size must be >= 1");
}

template <class MakeTrial>
BlockTally run(const McOptions& options, MakeTrial make_trial) {
  const auto tallies =
      options.path == ExecPath::Serial
          ? run_blocks_serial(options.samples, options.seed, options.block_size, make_trial)
          : run_blocks_parallel(options.samples, options.seed, options.block_size, resolve_workers(options), make_trial);
  return reduce_tallies(tallies);
}

std::int64_t elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
}

EstimateResult indicator_result(std::string name, const BlockTally& total, const McOptions& options,
                                std::chrono::steady_clock::time_point start) {
  EstimateResult r;
  r.estimator = std::move(name);
  r.n_samples = total.trials;
  r.n_success = total.hits;
  r.estimate = static_cast<double>(total.hits) / static_cast<double>(total.trials);
  r.std_error = wilson_sigma(total.hits, total.trials, kZ);
  r.ci95 = wilson_interval(total.hits, total.trials, kZ);
  r.seed = options.seed;
  r.workers = resolve_workers(options);
  r.low_power = total.hits < kLowPowerSuccesses;
  r.wall_ms = elapsed_ms(start);
  return r;
}

// Fills `out` with n uniform points of the 2D body.
struct BodyTrial2 {
  const Body* body;
  int n;
  std::vector<Point2> points;
  void draw(RngStream& rng) {
    points.resize(n);
    for (auto& p : points) p = sample_body_2d(*body, rng);
  }
};

struct BodyTrial3 {
  const Body* body;
  int n;
  std::vector<Point3> points;
  void draw(RngStream& rng) {
    points.resize(n);
    for (auto& p : points) p = sample_body_3d(*body, rng);
  }
};

}  // namespace

int default_workers() {
  if (const char* env = std::getenv("FLATFLOOR_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0 && v <= 4096) return static_cast<int>(v);
  }
  return omp_get_max_threads();
}

std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / (1.0 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

double wilson_sigma(std::uint64_t k, std::uint64_t n, double z) {
  const double z2 = z * z;
  const double nz = static_cast<double>(n) + z2;
  const double pt = (static_cast<double>(k) + z2 / 2.0) / nz;
  return std::sqrt(pt * (1.0 - pt) / nz);
}

EstimateResult estimate_Q(const Body& body, int n, const McOptions& options) {
  check_options(options);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  BlockTally total;
  if (body.dimension() == 2) {
    const Point2 a{body.floor()[0].x, 0.0}, b{body.floor()[1].x, 0.0};
    total = run(options, [&] {
      return [trial = BodyTrial2{&body, n, {}}, a, b](RngStream& rng) mutable {
        trial.draw(rng);
        return in_convex_position_with_floor_2d(trial.points, a, b) ? 1.0 : 0.0;
      };
    });
  } else if (body.dimension() == 3) {
    total = run(options, [&] {
      return [trial = BodyTrial3{&body, n, {}}, floor = body.floor()](RngStream& rng) mutable {
        trial.draw(rng);
        return in_convex_position_with_floor_3d(trial.points, floor) ? 1.0 : 0.0;
      };
    });
  } else {
    throw std::invalid_argument("unsupported body dimension");
  }
  return indicator_result("Q", total, options, start);
}

EstimateResult estimate_Q2_height(const Body& body, const McOptions& options) {
  check_options(options);
  const auto start = std::chrono::steady_clock::now();
  const int d = body.dimension();
  BlockTally total;
  if (d == 2) {
    total = run(options, [&] {
      return [&body](RngStream& rng) { return sample_body_2d(body, rng).y; };
    });
  } else {
    total = run(options, [&] {
      return [&body](RngStream& rng) { return sample_body_3d(body, rng).z; };
    });
  }
  const double nn = static_cast<double>(total.trials);
  const double mean = total.sum / nn;
  const double var = nn > 1 ? std::max(0.0, (total.sum_sq - nn * mean * mean) / (nn - 1.0)) : 0.0;
  const double factor = 2.0 * body.floor_area() / (d * body.volume());

  EstimateResult r;
  r.estimator = "Q2_height";
  r.indicator = false;
  r.n_samples = total.trials;
  r.estimate = 1.0 - factor * mean;
  r.std_error = factor * std::sqrt(var / nn);
  r.ci95 = {r.estimate - kZ * r.std_error, r.estimate + kZ * r.std_error};
  r.seed = options.seed;
  r.workers = resolve_workers(options);
  r.wall_ms = elapsed_ms(start);
  return r;
}

EstimateResult estimate_P(const Body& body, int n, const McOptions& options) {
  check_options(options);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  BlockTally total;
  if (body.dimension() == 2) {
    total = run(options, [&] {
      return [trial = BodyTrial2{&body, n, {}}](RngStream& rng) mutable {
        trial.draw(rng);
        return in_convex_position_2d(trial.points) ? 1.0 : 0.0;
      };
    });
  } else {
    total = run(options, [&] {
      return [trial = BodyTrial3{&body, n, {}}](RngStream& rng) mutable {
        trial.draw(rng);
        return in_convex_position_3d(trial.points) ? 1.0 : 0.0;
      };
    });
  }
  return indicator_result("P", total, options, start);
}

bool in_convex_position_with_anchor(std::span<const Point2> points) {
  thread_local std::vector<Point2> mirrored;
  mirrored.clear();
  for (const auto& p : points) {
    if (!(p.x > 0.0)) throw std::invalid_argument("anchor predicate needs positive abscissae");
    mirrored.push_back(p);
    mirrored.push_back({-p.x, p.y});
  }
  return in_convex_position_with_floor_2d(mirrored, {-1.0, 0.0}, {1.0, 0.0});
}

namespace {

template <class Draw>
EstimateResult estimate_weighted(const char* name, int n, const McOptions& options, Draw draw) {
  check_options(options);
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const BlockTally total = run(options, [&] {
    return [points = std::vector<Point2>(n), draw](RngStream& rng) mutable {
      for (auto& p : points) p = draw(rng);
      return in_convex_position_with_anchor(points) ? 1.0 : 0.0;
    };
  });
  return indicator_result(name, total, options, start);
}

}  // namespace

EstimateResult estimate_beta1(int n, const McOptions& options) {
  return estimate_weighted("beta1", n, options, [](RngStream& rng) { return sample_density_g1(rng); });
}

EstimateResult estimate_beta2(int n, const McOptions& options) {
  return estimate_weighted("beta2", n, options, [](RngStream& rng) { return sample_density_g2(rng); });
}

EstimateResult estimate_fradius_reduction(int n, const McOptions& options) {
  return estimate_fradius_reduction(n, options, Body::unit_square_floor());
}

EstimateResult estimate_fradius_reduction(int n, const McOptions& options, std::vector<Point2> floor) {
  // apex above the floor centroid
  const Point2 g = polygon_centroid(floor);
  const Body mountain = Body::mountain(std::move(floor), {g.x, g.y, 3.0});
  return estimate_weighted("fradius_reduction", n, options, [&mountain](RngStream& rng) {
    const Point3 u = sample_mountain_3d(mountain, rng);
    return Point2{floor_radius(u, mountain.floor()), u.z};
  });
}

}  // namespace flatfloor
