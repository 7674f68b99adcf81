#include "flatfloor/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include <omp.h>

#include "flatfloor/bodies.hpp"
#include "flatfloor/decomposition.hpp"
#include "flatfloor/exact_seq.hpp"
#include "flatfloor/mc_engine.hpp"
#include "flatfloor/rng.hpp"
#include "flatfloor/samplers.hpp"

namespace flatfloor {

namespace {

constexpr double kSigmas = 4.0;
constexpr double kGridTolerance = 1e-12;
constexpr std::uint64_t kBodyStreamBase = 1ull << 40;
constexpr int kGridPoints = 1000;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

TrialRecord make_record(std::string body, std::string check, std::optional<double> lower, double value,
                        std::optional<double> upper, double sigma = 0.0) {
  TrialRecord r;
  r.body = std::move(body);
  r.check = std::move(check);
  r.lower = lower;
  r.value = value;
  r.upper = upper;
  r.sigma = sigma;
  r.margin = std::numeric_limits<double>::infinity();
  if (lower) r.margin = std::min(r.margin, value - *lower);
  if (upper) r.margin = std::min(r.margin, *upper - value);
  r.pass = r.margin >= 0.0;
  return r;
}

// Exact comparison; bounds and value are reported as doubles.
TrialRecord exact_record(std::string body, std::string check, const std::optional<Rational>& lower,
                         const Rational& value, const std::optional<Rational>& upper) {
  std::optional<double> lo, hi;
  if (lower) lo = lower->get_d();
  if (upper) hi = upper->get_d();
  TrialRecord r = make_record(std::move(body), std::move(check), lo, value.get_d(), hi);
  r.pass = (!lower || *lower <= value) && (!upper || value <= *upper);
  if (r.pass && r.margin < 0.0) r.margin = 0.0;
  return r;
}

// Statistical check: bounds widened by 4 sigma.
TrialRecord stat_record(std::string body, std::string check, std::optional<double> lower, const EstimateResult& e,
                        std::optional<double> upper) {
  const double slack = kSigmas * e.std_error;
  if (lower) *lower -= slack;
  if (upper) *upper += slack;
  TrialRecord r = make_record(std::move(body), std::move(check), lower, e.estimate, upper, e.std_error);
  r.flagged = e.indicator && e.low_power;
  return r;
}

// Trials run concurrently; records are reassembled in trial order.
void run_trials(VerifyReport& report, std::size_t count, int workers,
                const std::function<std::vector<TrialRecord>(std::size_t)>& trial) {
  std::vector<std::vector<TrialRecord>> out(count);
  std::exception_ptr failure;
  const int threads = workers > 0 ? workers : default_workers();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
    try {
      out[i] = trial(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(flatfloor_verify_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  for (auto& records : out)
    for (auto& r : records) report.trials.push_back(std::move(r));
}

void renumber(VerifyReport& report) {
  for (std::size_t i = 0; i < report.trials.size(); ++i) report.trials[i].index = i;
}

McOptions mc(const VerifyOptions& options, std::uint64_t stream) {
  McOptions m;
  m.samples = options.samples;
  m.seed = mix_seed(options.seed, stream);
  m.path = ExecPath::Serial;
  return m;
}

RngStream body_rng(const VerifyOptions& options, std::size_t index) {
  return RngStream(options.seed, kBodyStreamBase + index);
}

int random_int(RngStream& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.uniform() * (hi - lo + 1)) % (hi - lo + 1);
}

double random_range(RngStream& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

Body random_frustum(RngStream& rng) {
  const double h = random_range(rng, 0.02, 1.98);
  return Body::frustum(h, 3, random_convex_polygon(rng, random_int(rng, 3, 8)));
}

Body random_mountain(RngStream& rng) {
  auto floor = random_convex_polygon(rng, random_int(rng, 3, 8));
  const Point2 g = polygon_centroid(floor);
  return Body::mountain(std::move(floor),
                        {g.x + random_range(rng, -0.3, 0.3), g.y + random_range(rng, -0.3, 0.3), random_range(rng, 0.5, 3.0)});
}

// sub-prisms only: apex above the floor, frustum tops no wider than the floor
Body random_3d_subprism(RngStream& rng, std::size_t index) {
  auto floor = random_convex_polygon(rng, random_int(rng, 3, 8));
  switch (index % 3) {
    case 0: {
      const Point2 g = polygon_centroid(floor);
      const Point2 v = floor[static_cast<std::size_t>(random_int(rng, 0, static_cast<int>(floor.size()) - 1))];
      const double w = rng.uniform();
      return Body::mountain(std::move(floor), {g.x + w * (v.x - g.x), g.y + w * (v.y - g.y), random_range(rng, 0.5, 3.0)});
    }
    case 1: return Body::prism(std::move(floor));
    default: return Body::frustum(random_range(rng, 1.0, 1.98), 3, std::move(floor));
  }
}

TopFunction random_top(RngStream& rng) { return random_concave_top(rng, random_int(rng, 1, 6)); }

void add_body_laws(VerifyReport& r) {
  r.header.push_back({"top_law", "pwl: 1..6 segments, breakpoints uniform on a 2^-20 grid, slopes uniform in [-6,6] sorted decreasingly, lift uniform in [0,0.5]"});
  r.header.push_back({"floor_law", "3..8-gon inscribed in the unit circle, angles 2 pi (i + 0.8 (U - 1/2)) / k"});
  r.header.push_back({"frustum_law", "h uniform in [0.02, 1.98]"});
  r.header.push_back({"mountain_law", "apex offset uniform in [-0.3,0.3]^2 from the floor centroid, apex height uniform in [0.5, 3]"});
}

void add_options(VerifyReport& r, const VerifyOptions& o) {
  r.header.push_back({"trials", std::to_string(o.trials)});
  r.header.push_back({"samples", std::to_string(o.samples)});
  r.header.push_back({"acceptance", "statistical: 4 sigma (Wilson-adjusted for indicators); exact: rational, zero tolerance"});
}

double unit_mountain_below(double t, int d) {
  if (t >= d) return 1.0;
  return 1.0 - std::pow(1.0 - t / d, d);
}

// min over the grid of B_K(t) - B_M(t)
double dominance_margin(const Body& body) {
  const int d = body.dimension();
  const double top = std::max(body.max_height(), static_cast<double>(d));
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGridPoints; ++i) {
    const double t = top * i / kGridPoints;
    worst = std::min(worst, body.below_volume(t) - unit_mountain_below(t, d));
  }
  return worst;
}

// min over interior grid points of f(t) - (f(t-) + f(t+)) / 2, f = L^{1/(d-1)}
double concavity_margin(const Body& body) {
  const int d = body.dimension();
  const double top = body.max_height();
  std::vector<double> f(kGridPoints + 1);
  for (int i = 0; i <= kGridPoints; ++i) {
    const double t = top * i / kGridPoints;
    f[i] = std::pow(std::max(0.0, body.layer_volume(t)), 1.0 / (d - 1));
  }
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 1; i < kGridPoints; ++i) worst = std::min(worst, f[i] - 0.5 * (f[i - 1] + f[i + 1]));
  return worst;
}

VerifyReport start(std::string name, const VerifyOptions& o) {
  VerifyReport r;
  r.suite = std::move(name);
  r.seed = o.seed;
  return r;
}

}  // namespace

std::size_t VerifyReport::passed() const {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.pass; }));
}

std::size_t VerifyReport::failed() const {
  return static_cast<std::size_t>(
      std::count_if(trials.begin(), trials.end(), [](const auto& t) { return !t.pass && !t.flagged; }));
}

std::size_t VerifyReport::flagged() const {
  return static_cast<std::size_t>(std::count_if(trials.begin(), trials.end(), [](const auto& t) { return t.flagged; }));
}

std::string VerifyReport::to_json() const {
  using nlohmann::json;
  json j;
  j["suite"] = suite;
  j["seed"] = seed;
  j["gating"] = gating;
  json h = json::object();
  for (const auto& [k, v] : header) h[k] = v;
  j["header"] = h;
  j["summary"] = {{"trials", trials.size()}, {"passed", passed()}, {"failed", failed()}, {"flagged", flagged()}, {"ok", ok()}};
  json arr = json::array();
  for (const auto& t : trials) {
    json r;
    r["index"] = t.index;
    r["body"] = t.body;
    r["check"] = t.check;
    r["lower"] = t.lower ? json(*t.lower) : json(nullptr);
    r["value"] = t.value;
    r["upper"] = t.upper ? json(*t.upper) : json(nullptr);
    r["sigma"] = t.sigma;
    r["margin"] = std::isfinite(t.margin) ? json(t.margin) : json(nullptr);
    r["pass"] = t.pass;
    r["flagged"] = t.flagged;
    arr.push_back(std::move(r));
  }
  j["trials"] = std::move(arr);
  return j.dump(2);
}

std::string VerifyReport::summary() const {
  std::ostringstream os;
  os << suite << ": " << trials.size() << " checks, " << passed() << " passed, " << failed() << " failed, " << flagged()
     << " flagged" << (gating ? "" : " (non-gating)") << " -> " << (ok() ? "OK" : "FAIL");
  return os.str();
}

double w_formula(double a, double h) { return a * a * a * h / (3.0 * (1.0 - a)); }

VerifyReport suite_prism_bounds(const VerifyOptions& o) {
  VerifyReport r = start("prism_bounds", o);
  add_body_laws(r);
  add_options(r, o);
  r.header.push_back({"subprism_law", "cycle mountain / prism / frustum; mountain apex at centroid + U (vertex - centroid), "
                                      "apex height uniform in [0.5, 3]; frustum h uniform in [1, 1.98]"});
  const Rational lo2 = q2_mountain(2), hi2 = q2_prism(2);
  r.trials.push_back(exact_record("triangle 2x", "Q2 = lower bound", lo2, q2_exact_subprism(TopFunction::triangle()), lo2));
  r.trials.push_back(exact_record("square", "Q2 = upper bound", hi2, q2_exact_subprism(TopFunction::constant()), hi2));
  run_trials(r, o.trials, o.workers, [&](std::size_t i) -> std::vector<TrialRecord> {
    RngStream rng = body_rng(o, i);
    if (i % 2 == 0) {
      const TopFunction g = random_top(rng);
      return {exact_record(g.describe(), "bounds d=2 (exact)", lo2, q2_exact_subprism(g), hi2)};
    }
    const Body b = random_3d_subprism(rng, i / 2);
    const EstimateResult e = estimate_Q2_height(b, mc(o, i));
    return {stat_record(b.describe(), "bounds d=3", q2_mountain(3).get_d(), e, q2_prism(3).get_d())};
  });
  renumber(r);
  return r;
}

VerifyReport suite_ccsf(const VerifyOptions& o) {
  VerifyReport r = start("ccsf", o);
  add_body_laws(r);
  add_options(r, o);
  const double mountain_bound = q2_mountain(3).get_d();
  auto frustum_checks = [&](const Body& b, const EstimateResult& e) {
    std::vector<TrialRecord> out;
    out.push_back(stat_record(b.describe(), "Q >= 1 - 2 h_eff / d", 1.0 - 2.0 * b.max_height() / 3.0, e, std::nullopt));
    out.push_back(stat_record(b.describe(), "Q >= mountain value 1/2", mountain_bound, e, std::nullopt));
    out.push_back(make_record(b.describe(), "Q_hat < 1", std::nullopt, e.estimate, std::nextafter(1.0, 0.0)));
    return out;
  };
  {
    const Body thin = Body::frustum(0.1, 3);
    const EstimateResult e = estimate_Q2_height(thin, mc(o, 1'000'001));
    auto recs = frustum_checks(thin, e);
    recs.push_back(stat_record(thin.describe(), "Q >= 1 - 2 h / d, h = 0.1", 1.0 - 2.0 * 0.1 / 3.0, e, std::nullopt));
    for (auto& x : recs) r.trials.push_back(std::move(x));
    const Body prism_like = Body::frustum(1.0, 3);
    const EstimateResult p = estimate_Q2_height(prism_like, mc(o, 1'000'002));
    r.trials.push_back(stat_record(prism_like.describe(), "h = 1 gives the prism value 2/3", 2.0 / 3.0, p, 2.0 / 3.0));
  }
  run_trials(r, o.trials, o.workers, [&](std::size_t i) {
    RngStream rng = body_rng(o, i);
    const double h = random_range(rng, 0.02, 1.98);
    const Body b = Body::frustum(h, 3, random_convex_polygon(rng, random_int(rng, 3, 8)));
    return frustum_checks(b, estimate_Q2_height(b, mc(o, i)));
  });
  renumber(r);
  return r;
}

VerifyReport suite_dominance(const VerifyOptions& o) {
  VerifyReport r = start("dominance", o);
  add_body_laws(r);
  add_options(r, o);
  r.header.push_back({"grid", "1001 heights on [0, max(H_K, d)], tolerance 1e-12"});
  const Body prism = Body::prism(Body::unit_square_floor());
  const Body mountain = Body::mountain(Body::unit_square_floor(), {0.0, 0.0, 3.0});
  r.trials.push_back(make_record("prism vs mountain", "B_P(1) - B_M(1)", 0.0, prism.below_volume(1.0) - mountain.below_volume(1.0), std::nullopt));
  r.trials.push_back(make_record("prism", "B_K(0) = 0", -kGridTolerance, prism.below_volume(0.0), kGridTolerance));
  r.trials.push_back(make_record("mountain", "B_M(t) = 1 - (1 - t/3)^3", -kGridTolerance, dominance_margin(mountain), kGridTolerance));
  run_trials(r, o.trials, o.workers, [&](std::size_t i) -> std::vector<TrialRecord> {
    RngStream rng = body_rng(o, i);
    if (i % 4 == 3) {
      const Body b = Body::subprism_2d(random_top(rng));
      return {make_record(b.describe(), "min_t B_K - B_M (d=2)", -kGridTolerance, dominance_margin(b), std::nullopt)};
    }
    const Body b = i % 2 ? random_mountain(rng) : random_frustum(rng);
    return {make_record(b.describe(), "min_t B_K - B_M (d=3)", -kGridTolerance, dominance_margin(b), std::nullopt)};
  });
  renumber(r);
  return r;
}

VerifyReport suite_layer_concavity(const VerifyOptions& o) {
  VerifyReport r = start("layer_concavity", o);
  add_body_laws(r);
  add_options(r, o);
  r.header.push_back({"grid", "1001 heights on [0, H_K], midpoint test, tolerance 1e-12"});
  const Body mountain = Body::mountain(Body::unit_square_floor(), {0.0, 0.0, 3.0});
  const Body prism = Body::prism(Body::unit_square_floor());
  const double m = concavity_margin(mountain);
  r.trials.push_back(make_record("mountain", "L^{1/2} linear (margin 0)", -kGridTolerance, m, kGridTolerance));
  r.trials.push_back(make_record("prism", "L constant", -kGridTolerance, concavity_margin(prism), kGridTolerance));
  run_trials(r, o.trials, o.workers, [&](std::size_t i) {
    RngStream rng = body_rng(o, i);
    const Body b = i % 3 == 0 ? Body::subprism_2d(random_top(rng)) : i % 3 == 1 ? random_frustum(rng) : random_mountain(rng);
    return std::vector<TrialRecord>{make_record(b.describe(), "midpoint concavity of L^{1/(d-1)}", -kGridTolerance, concavity_margin(b), std::nullopt)};
  });
  renumber(r);
  return r;
}

VerifyReport suite_tetra_sandwich(const VerifyOptions& o) {
  VerifyReport r = start("tetra_sandwich", o);
  add_body_laws(r);
  add_options(r, o);
  r.header.push_back({"n_max", std::to_string(o.n_max)});
  const Body tetra = Body::tetrahedron();
  const auto ell = ell_table(o.n_max), u = u_table(o.n_max);
  const auto y = y_table(o.n_max, SeqMethod::ClosedForm);
  std::vector<std::size_t> ns;
  for (int n = 2; n <= o.n_max; ++n) ns.push_back(n);
  run_trials(r, ns.size(), o.workers, [&](std::size_t i) {
    const int n = static_cast<int>(ns[i]);
    const EstimateResult e = estimate_Q(tetra, n, mc(o, 2'000'000 + n));
    std::vector<TrialRecord> out;
    out.push_back(stat_record("tetrahedron n=" + std::to_string(n), "ell_n <= Q_T(n) <= u_n", ell.values[n].get_d(), e, u.values[n].get_d()));
    if (n == 2) out.push_back(stat_record("tetrahedron n=2", "Q_T(2) = 1/2", 0.5, e, 0.5));
    return out;
  });
  {
    const Body pentagon = Body::mountain(Body::regular_polygon_floor(5), {0.0, 0.0, 1.0});
    const EstimateResult e = estimate_Q(pentagon, 2, mc(o, 2'100'000));
    r.trials.push_back(stat_record("pentagon mountain n=2", "Q_M(2) >= Y_2", y.values[2].get_d(), e, std::nullopt));
  }
  run_trials(r, o.trials, o.workers, [&](std::size_t i) {
    RngStream rng = body_rng(o, i);
    const Body b = random_mountain(rng);
    const int n = 2 + static_cast<int>(i % static_cast<std::size_t>(std::max(1, o.n_max - 1)));
    const EstimateResult e = estimate_Q(b, n, mc(o, i));
    return std::vector<TrialRecord>{stat_record(b.describe() + " n=" + std::to_string(n), "Q_M(n) >= Y_n", y.values[n].get_d(), e, std::nullopt)};
  });
  renumber(r);
  return r;
}

VerifyReport suite_w_formula(const VerifyOptions& o) {
  VerifyReport r = start("w_formula", o);
  add_options(r, o);
  r.header.push_back({"zone_law", "a uniform in [0.05, 0.95 (1 - h/3)], h uniform in [0.05, 2.9]"});
  r.trials.push_back(make_record("formula", "W(1/2, 1) = 1/12", 1.0 / 12.0, w_formula(0.5, 1.0), 1.0 / 12.0));
  r.trials.push_back(make_record("formula", "W(a, h) -> 0 as a -> 0", 0.0, w_formula(1e-6, 1.0), 1e-17));
  run_trials(r, o.trials, o.workers, [&](std::size_t i) {
    RngStream rng = body_rng(o, i);
    const double h = random_range(rng, 0.05, 2.9);
    const double a = random_range(rng, 0.05, 0.95 * (1.0 - h / 3.0));
    RngStream draws(mix_seed(o.seed, i), 0);
    std::uint64_t hits = 0;
    const double top = h / (1.0 - a), slope = (1.0 - a) / h;
    for (std::uint64_t s = 0; s < o.samples; ++s) {
      const Point2 p = sample_density_g2(draws);
      if (p.y >= h && p.y <= top && p.x <= 1.0 - slope * p.y) ++hits;
    }
    EstimateResult e;
    e.estimate = static_cast<double>(hits) / static_cast<double>(o.samples);
    e.std_error = wilson_sigma(hits, o.samples);
    e.low_power = hits < 100;
    const double w = w_formula(a, h);
    std::ostringstream label;
    label << "zone a=" << a << " h=" << h;
    return std::vector<TrialRecord>{stat_record(label.str(), "MC mass = W(a,h)", w, e, w)};
  });
  renumber(r);
  return r;
}

VerifyReport suite_mountain_mixture(const VerifyOptions& o) {
  VerifyReport r = start("mountain_mixture", o);
  add_body_laws(r);
  add_options(r, o);
  r.header.push_back({"grid", "1001 abscissae plus knots, round-trip tolerance 1e-12"});
  const Rational bound(4, 3);
  r.trials.push_back(exact_record("square", "int G^2 = 1 <= 4/3", std::nullopt, TopFunction::constant().square_integral(), bound));
  r.trials.push_back(exact_record("triangle 2x", "int G^2 = 4/3", bound, TopFunction::triangle().square_integral(), bound));
  run_trials(r, o.trials, o.workers, [&](std::size_t i) {
    RngStream rng = body_rng(o, i);
    const TopFunction g = random_top(rng);
    const MountainMixture mix = mountain_decompose(g);
    std::vector<double> xs;
    for (int k = 0; k <= kGridPoints; ++k) xs.push_back(static_cast<double>(k) / kGridPoints);
    for (double b : g.breakpoints()) xs.push_back(b);
    double worst = 0.0;
    for (double x : xs) worst = std::max(worst, std::fabs(mix(x) - g(x)));
    std::vector<TrialRecord> out;
    out.push_back(make_record(g.describe(), "max |sum w_i M_i - G|", std::nullopt, worst, 1e-12));
    out.push_back(exact_record(g.describe(), "total weight = 1", Rational(1), mix.total_weight(), Rational(1)));
    out.push_back(exact_record(g.describe(), "int G^2 <= 4/3", std::nullopt, g.square_integral(), bound));
    return out;
  });
  renumber(r);
  return r;
}

VerifyReport suite_conjecture(const VerifyOptions& o) {
  VerifyReport r = start("conjecture", o);
  r.gating = false;
  add_body_laws(r);
  add_options(r, o);
  run_trials(r, o.trials, o.workers, [&](std::size_t i) {
    RngStream rng = body_rng(o, i);
    const Body b = Body::subprism_2d(random_top(rng));
    std::vector<TrialRecord> out;
    for (int n = 3; n <= 4; ++n) {
      const EstimateResult e = estimate_Q(b, n, mc(o, 10 * i + n));
      out.push_back(stat_record(b.describe() + " n=" + std::to_string(n), "t_n <= Q(n) <= q_n", t_seq(n).get_d(), e, q_seq(n).get_d()));
    }
    return out;
  });
  renumber(r);
  return r;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"prism_bounds",   "ccsf",           "dominance",        "layer_concavity",
                                              "tetra_sandwich", "w_formula",      "mountain_mixture", "conjecture"};
  return names;
}

VerifyReport run_suite(const std::string& name, const VerifyOptions& options) {
  if (name == "prism_bounds") return suite_prism_bounds(options);
  if (name == "ccsf") return suite_ccsf(options);
  if (name == "dominance") return suite_dominance(options);
  if (name == "layer_concavity") return suite_layer_concavity(options);
  if (name == "tetra_sandwich") return suite_tetra_sandwich(options);
  if (name == "w_formula") return suite_w_formula(options);
  if (name == "mountain_mixture") return suite_mountain_mixture(options);
  if (name == "conjecture") return suite_conjecture(options);
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace flatfloor
