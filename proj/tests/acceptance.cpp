// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "json.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "box_oracle.hpp"
#include "flatfloor/cli.hpp"
#include "flatfloor/decomposition.hpp"
#include "flatfloor/exact_seq.hpp"
#include "flatfloor/mc_engine.hpp"
#include "flatfloor/verify.hpp"
#include "oracles.hpp"

using namespace flatfloor;
using nlohmann::json;

namespace {

constexpr double kSigmas = 4.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

McOptions mc(std::uint64_t samples, std::uint64_t seed) {
  McOptions o;
  o.samples = samples;
  o.seed = seed;
  return o;
}

// |estimate - target| <= 4 sigma
void within(Outcome& out, const std::string& label, const EstimateResult& r, double target) {
  const double z = std::fabs(r.estimate - target) / r.std_error;
  std::printf("    %-28s est %.6g  target %.6g  se %.3g  |z| %.2f\n", label.c_str(), r.estimate, target, r.std_error, z);
  out.require(z <= kSigmas, label + fmt(" off by %.2f sigma", z));
}

// ---- 1 ----

Outcome exact_lists() {
  const std::vector<std::pair<std::string, std::vector<std::string>>> printed{
      {"t", {"1", "1", "1/3", "1/18", "1/180", "1/2700", "1/56700", "1/1587600", "1/57153600"}},
      {"q", {"1", "1", "1/2", "5/36", "7/288", "7/2400", "11/43200", "143/8467200", "143/162570240"}},
      {"Y", {"1", "1", "1/5", "1/60", "1/1320", "1/46200", "1/2356200", "1/164934000", "1/15173928000"}},
      {"u", {"1", "1", "1/2", "1/5", "7/100", "79/3500", "337/49000", "2069/1029000", "7033/12348000"}},
      {"ell", {"1", "1", "1/5", "1/50", "11/10500", "431/12127500", "2371/2801452500"}},
  };
  Outcome out;
  for (const auto& [name, list] : printed) {
    std::ostringstream o, e;
    const int code = run_cli({"exact", "--seq", name, "--n", std::to_string(list.size() - 1), "--format", "json"}, o, e);
    out.require(code == kExitOk, name + ": exit " + std::to_string(code));
    if (code != kExitOk) continue;
    const json values = json::parse(o.str()).at("values");
    out.require(values.size() == list.size(), name + ": wrong length");
    for (std::size_t i = 0; i < list.size() && i < values.size(); ++i) {
      const std::string got = values[i].at("value").at("num").get<std::string>() + "/" +
                              values[i].at("value").at("den").get<std::string>();
      const std::string want = list[i].find('/') == std::string::npos ? list[i] + "/1" : list[i];
      out.require(got == want, name + fmt("[%zu] = ", i) + got + " expected " + want);
    }
    std::printf("    %-4s %zu terms checked\n", name.c_str(), list.size());
  }
  return out;
}

// ---- 2 ----

Outcome closed_vs_recursion() {
  Outcome out;
  for (const std::string name : {"t", "q", "p", "Y"}) {
    const RationalSeq cf = sequence_table(name, 200, SeqMethod::ClosedForm);
    const RationalSeq rec = sequence_table(name, 200, SeqMethod::Recursion);
    std::size_t bad = 0;
    for (std::size_t i = 0; i <= 200; ++i) bad += cf.values.at(i) != rec.values.at(i);
    std::printf("    %-2s n = 0..200: %zu mismatches\n", name.c_str(), bad);
    out.require(bad == 0, name + fmt(": %zu mismatches", bad));
  }
  return out;
}

// ---- 3 ----

Outcome q2_theory() {
  Outcome out;
  const std::uint64_t n = 1'000'000;
  within(out, "2D mountain", estimate_Q2_height(Body::mountain_2d(), mc(n, 301)), 1.0 / 3.0);
  within(out, "2D prism", estimate_Q2_height(Body::prism_2d(), mc(n, 302)), 0.5);
  within(out, "3D mountain", estimate_Q2_height(Body::mountain(Body::unit_square_floor(), {0, 0, 1}), mc(n, 303)), 0.5);
  within(out, "3D prism", estimate_Q2_height(Body::prism(Body::unit_square_floor()), mc(n, 304)), 2.0 / 3.0);
  return out;
}

// ---- 4 ----

Outcome mc_vs_exact() {
  Outcome out;
  const std::uint64_t n = 10'000'000;
  const Body tri = Body::subprism_2d(TopFunction::triangle());
  const Body sq = Body::subprism_2d(TopFunction::constant());
  const Body par = Body::subprism_2d(TopFunction::parabola());
  for (int k = 2; k <= 5; ++k) within(out, fmt("triangle n=%d", k), estimate_Q(tri, k, mc(n, 400 + k)), to_double(t_seq(k)));
  for (int k = 2; k <= 4; ++k) within(out, fmt("square n=%d", k), estimate_Q(sq, k, mc(n, 410 + k)), to_double(q_seq(k)));
  for (int k = 2; k <= 4; ++k) within(out, fmt("parabola n=%d", k), estimate_Q(par, k, mc(n, 420 + k)), to_double(p_seq(k)));
  return out;
}

// ---- 5 ----

Outcome quadrature() {
  Outcome out;
  const std::vector<std::tuple<std::string, TopFunction, Rational (*)(unsigned long)>> cases{
      {"triangle", TopFunction::triangle(), t_seq}, {"square", TopFunction::constant(), q_seq},
      {"parabola", TopFunction::parabola(), p_seq}};
  for (const auto& [name, top, seq] : cases) {
    double worst_dispatch = 0.0, worst_numeric = 0.0;
    for (int k = 0; k <= 6; ++k) {
      const double exact = to_double(seq(k));
      DecompOptions o;
      const DecompResult d = q_decomp(top, k, o);
      o.force_numeric = true;
      const DecompResult nm = q_decomp(top, k, o);
      worst_dispatch = std::max(worst_dispatch, std::fabs(d.value - exact));
      worst_numeric = std::max(worst_numeric, std::fabs(nm.value - exact));
      out.require(!nm.budget_exhausted && !nm.segment_overflow, name + fmt(" n=%d numeric hit a limit", k));
    }
    std::printf("    %-8s n <= 6: max error dispatch %.2e, numeric %.2e\n", name.c_str(), worst_dispatch, worst_numeric);
    out.require(worst_dispatch <= 1e-8, name + " dispatch error " + fmt("%.2e", worst_dispatch));
    out.require(worst_numeric <= 1e-8, name + " numeric error " + fmt("%.2e", worst_numeric));
  }
  return out;
}

// ---- 6 ----

Outcome beta_concordance() {
  Outcome out;
  const std::uint64_t n = 10'000'000;
  for (int k = 2; k <= 3; ++k) within(out, fmt("beta2 n=%d", k), estimate_beta2(k, mc(n, 600 + k)), to_double(y_seq(k)));
  const Body mountain = Body::mountain(Body::unit_square_floor(), {0, 0, 1});
  for (int k = 2; k <= 3; ++k) {
    const EstimateResult f = estimate_fradius_reduction(k, mc(n, 610 + k));
    const EstimateResult q = estimate_Q(mountain, k, mc(n, 620 + k));
    const double sigma = std::hypot(f.std_error, q.std_error);
    const double slack = q.estimate + kSigmas * sigma - f.estimate;
    std::printf("    n=%d fradius %.6g  <=  Q_M %.6g + 4 sigma (sigma %.3g, margin %.3g)\n", k, f.estimate, q.estimate, sigma,
                slack);
    out.require(slack >= 0.0, fmt("fradius(%d) exceeds Q_M(%d) + 4 sigma", k, k));
  }
  return out;
}

// ---- 7 ----

Outcome tetra_sandwich() {
  Outcome out;
  const std::uint64_t n = 10'000'000;
  const Body tetra = Body::tetrahedron();
  const auto lower = ell_table(4), upper = u_table(4);
  for (int k = 2; k <= 4; ++k) {
    const EstimateResult r = estimate_Q(tetra, k, mc(n, 700 + k));
    const double lo = to_double(lower.values[k]), hi = to_double(upper.values[k]);
    const double s = kSigmas * r.std_error;
    std::printf("    n=%d  %.6g <= %.6g <= %.6g  (se %.3g)\n", k, lo, r.estimate, hi, r.std_error);
    out.require(r.estimate >= lo - s && r.estimate <= hi + s, fmt("n=%d outside [l, u] +- 4 sigma", k));
    if (k == 2) within(out, "n=2 vs 1/2", r, 0.5);
  }
  return out;
}

// ---- 8 ----

long long draw(RngStream& rng, long long lo, long long hi) {
  return lo + static_cast<long long>(rng.next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
}

int geometry_disagreements() {
  int bad = 0;
  RngStream rng(801, 0);
  for (int trial = 0; trial < 10000; ++trial) {
    const long long w = draw(rng, 2, 8);
    const int n = static_cast<int>(draw(rng, 1, 8));
    std::vector<oracle::I2> all{{0, 0}, {w, 0}};
    std::vector<Point2> pts;
    for (int i = 0; i < n; ++i) {
      all.push_back({draw(rng, -1, w + 1), draw(rng, 1, 6)});
      pts.push_back({double(all.back().x), double(all.back().y)});
    }
    bad += oracle::all_strict_from(all, 2) != in_convex_position_with_floor_2d(pts, {0, 0}, {double(w), 0});
  }
  for (int trial = 0; trial < 10000; ++trial) {
    const long long w = draw(rng, 2, 5);
    const int n = static_cast<int>(draw(rng, 1, 8));
    std::vector<oracle::I3> all{{0, 0, 0}, {w, 0, 0}, {w, w, 0}, {0, w, 0}};
    std::vector<Point3> pts;
    for (int i = 0; i < n; ++i) {
      all.push_back({draw(rng, 0, w), draw(rng, 0, w), draw(rng, 1, 4)});
      pts.push_back({double(all.back().x), double(all.back().y), double(all.back().z)});
    }
    const std::vector<Point2> floor{{0, 0}, {double(w), 0}, {double(w), double(w)}, {0, double(w)}};
    bad += oracle::all_strict_from(all, 4) != in_convex_position_with_floor_3d(pts, floor);
  }
  return bad;
}

int sampler_box_failures() {
  using boxes::scaled;
  int bad = 0;
  bad += boxes::box_failures_2d([](double x) { return 2 * x; }, 2.0,
                                [](RngStream& r) { return sample_subprism_2d(TopFunction::triangle(), r); }, 811);
  bad += boxes::box_failures_2d([](double x) { return 6 * x * (1 - x); }, 1.5,
                                [](RngStream& r) { return sample_subprism_2d(TopFunction::parabola(), r); }, 812);
  RngStream top_rng(813, 7);
  const TopFunction pwl = random_concave_top(top_rng, 5);
  bad += boxes::box_failures_2d([&](double x) { return pwl(x); }, pwl.max_value(),
                                [&](RngStream& r) { return sample_subprism_2d(pwl, r); }, 814);
  const Body m2 = Body::mountain_2d(0.3);
  bad += boxes::box_failures_2d([](double x) { return x <= 0.3 ? 2 * x / 0.3 : 2 * (1 - x) / 0.7; }, 2.0,
                                [&](RngStream& r) { return sample_body_2d(m2, r); }, 815);

  RngStream box_rng(816, 99);
  const double lo[3] = {0, 0, 0}, hi1[3] = {1, 1, 0}, hi2[3] = {1, 3, 0};
  const auto b1 = boxes::random_boxes(box_rng, lo, hi1, 2);
  std::vector<double> e1;
  for (const auto& b : b1) e1.push_back((b.hi[0] * b.hi[0] - b.lo[0] * b.lo[0]) * (b.hi[1] - b.lo[1]));
  RngStream r1(816, 0);
  bad += boxes::box_failures(b1, e1, [&](double* p) { const Point2 q = sample_density_g1(r1); p[0] = q.x; p[1] = q.y; }, 2);
  const auto b2 = boxes::random_boxes(box_rng, lo, hi2, 2);
  std::vector<double> e2;
  for (const auto& b : b2)
    e2.push_back(boxes::simpson([&](double y) {
                   const double top = std::min(b.hi[0], 1.0 - y / 3.0);
                   return top > b.lo[0] ? top * top - b.lo[0] * b.lo[0] : 0.0;
                 },
                 b.lo[1], b.hi[1], 20000));
  RngStream r2(817, 0);
  bad += boxes::box_failures(b2, e2, [&](double* p) { const Point2 q = sample_density_g2(r2); p[0] = q.x; p[1] = q.y; }, 2);

  bad += boxes::box_failures_3d(Body::tetrahedron(), [](double z) { return scaled({{0, 0}, {1, 0}, {0, 1}}, 1.0 - z / 6.0, {0, 0}); },
                                6.0, 818);
  const Body prism = Body::prism(Body::regular_polygon_floor(5));
  bad += boxes::box_failures_3d(prism, [&](double) { return prism.floor(); }, 1.0, 819);
  const Body mountain = Body::mountain(Body::unit_square_floor(), {0.4, -0.2, 5.0});
  const Point2 apex{0.4 * mountain.horizontal_scale(), -0.2 * mountain.horizontal_scale()};
  bad += boxes::box_failures_3d(mountain,
                                [&](double z) {
                                  const double u = z / 3.0;
                                  return scaled(mountain.floor(), 1.0 - u, {u * apex.x, u * apex.y});
                                },
                                3.0, 820);
  const double h = 0.3, c = std::sqrt(2.0 / h - 1.0);
  const double height = h / (h * (c * c * c - 1.0) / (3.0 * (c - 1.0)));
  const Body frustum = Body::frustum(h, 3);
  bad += boxes::box_failures_3d(frustum, [&](double z) { return scaled(frustum.floor(), 1.0 + (c - 1.0) * z / height, {0, 0}); },
                                height, 821);
  return bad;
}

double mixture_round_trip_error() {
  RngStream rng(830, 0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const TopFunction top = random_concave_top(rng, 1 + trial % 6);
    const MountainMixture mix = mountain_decompose(top);
    for (int i = 0; i <= 1000; ++i) worst = std::max(worst, std::fabs(mix(i / 1000.0) - top(i / 1000.0)));
  }
  return worst;
}

std::pair<double, bool> mass_identity_error() {
  RngStream rng(840, 0);
  double worst = 0.0;
  bool exact = true;
  std::vector<TopFunction> tops{TopFunction::triangle(), TopFunction::constant(), TopFunction::parabola()};
  for (int i = 0; i < 200; ++i) tops.push_back(random_concave_top(rng, 1 + i % 6));
  for (const auto& top : tops)
    for (int j = 1; j < 16; ++j) {
      Rational t(j, 16);
      t.canonicalize();
      if (top.value(t) == 0) continue;
      const NormalizedSplit s = split(top, t);
      const Rational total = s.left.mass + s.right.mass + top.value(t) / 2;
      exact = exact && total == 1;
      worst = std::max(worst, std::fabs(to_double(s.left.mass) + to_double(s.right.mass) + top(to_double(t)) / 2 - 1.0));
    }
  return {worst, exact};
}

bool worker_determinism() {
  const std::vector<Body> bodies{Body::subprism_2d(TopFunction::parabola()), Body::tetrahedron(),
                                 Body::mountain(Body::regular_polygon_floor(5), {0.1, 0.0, 1.0})};
  for (const auto& body : bodies) {
    McOptions o = mc(60'000, 850);
    o.block_size = 4096;
    o.path = ExecPath::Serial;
    const EstimateResult ref = estimate_Q(body, 3, o);
    o.path = ExecPath::Parallel;
    for (int w : {1, 2, 4, 7}) {
      o.workers = w;
      const EstimateResult r = estimate_Q(body, 3, o);
      if (r.n_success != ref.n_success || std::memcmp(&r.estimate, &ref.estimate, sizeof(double)) != 0) return false;
    }
  }
  return true;
}

Outcome property_suites() {
  Outcome out;
  const int geo = geometry_disagreements();
  std::printf("    geometry oracle: %d disagreements on 2 x 10^4 configurations\n", geo);
  out.require(geo == 0, "geometry disagreements");
  const int box = sampler_box_failures();
  std::printf("    sampler box tests: %d outside 4 sigma (550 boxes)\n", box);
  out.require(box == 0, "sampler box failures");
  const double mix = mixture_round_trip_error();
  std::printf("    mountain mixture round trip: max error %.2e\n", mix);
  out.require(mix < 1e-12, "mixture round trip");
  const auto [mass, mass_exact] = mass_identity_error();
  std::printf("    mass identity: max error %.2e, exact %s\n", mass, mass_exact ? "yes" : "no");
  out.require(mass < 1e-12 && mass_exact, "mass identity");
  VerifyOptions vo;
  vo.seed = 860;
  const VerifyReport conc = suite_layer_concavity(vo);
  std::printf("    layer-root concavity: %zu checks, %zu violations\n", conc.trials.size(), conc.failed());
  out.require(conc.failed() == 0, "concavity violations");
  const bool det = worker_determinism();
  std::printf("    worker-count determinism: %s\n", det ? "bit-identical" : "MISMATCH");
  out.require(det, "worker determinism");
  return out;
}

// ---- 9 ----

Outcome asymptotic_trend() {
  Outcome out;
  const double v = to_double(s_seq(10000)) * std::sqrt(10001.0);
  const double target = std::sqrt(std::numbers::pi) / 2.0;
  const double rel = std::fabs(v / target - 1.0);
  std::printf("    s_n sqrt(n+1) = %.8f at n = 10^4, target %.8f, relative gap %.2e\n", v, target, rel);
  out.require(rel <= 0.01, "relative gap above 1%");
  return out;
}

struct Criterion {
  int id;
  const char* title;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "exact sequences match the reference lists", 1.0, exact_lists},
      {2, "closed form == recursion for t, q, p, Y to n = 200", 10.0, closed_vs_recursion},
      {3, "Q2 from heights on four bodies at 10^6 samples", 120.0, q2_theory},
      {4, "Monte Carlo Q vs t_n, q_n, p_n at 10^7 samples", 1800.0, mc_vs_exact},
      {5, "decomposition quadrature within 1e-8 for n <= 6", 60.0, quadrature},
      {6, "beta2 vs Y_n and F-radius reduction bound at 10^7", 600.0, beta_concordance},
      {7, "tetrahedron sandwich at 10^7 samples", 900.0, tetra_sandwich},
      {8, "property suites", 300.0, property_suites},
      {9, "s_n sqrt(n+1) -> sqrt(pi)/2 at n = 10^4", 1.0, asymptotic_trend},
  };
  int failures = 0;
  std::vector<std::string> lines;
  for (const auto& c : criteria) {
    std::printf("criterion %d: %s\n", c.id, c.title);
    std::fflush(stdout);
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.limit_s) o.require(false, fmt("runtime %.1f s over the %.0f s limit", secs, c.limit_s));
    const std::string line = fmt("%s criterion %d: %s (%.2f s, limit %.0f s)", o.pass ? "PASS" : "FAIL", c.id, c.title, secs,
                                 c.limit_s) +
                             (o.detail.empty() ? "" : " -- " + o.detail);
    std::printf("%s\n", line.c_str());
    std::fflush(stdout);
    lines.push_back(line);
    failures += !o.pass;
  }
  std::printf("\nsummary\n");
  for (const auto& l : lines) std::printf("%s\n", l.c_str());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
