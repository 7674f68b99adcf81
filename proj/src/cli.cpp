#include "flatfloor/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "flatfloor/body_json.hpp"
#include "flatfloor/decomposition.hpp"
#include "flatfloor/exact_seq.hpp"
#include "flatfloor/mc_engine.hpp"
#include "flatfloor/rng.hpp"
#include "flatfloor/verify.hpp"

namespace flatfloor {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Manifest {
  std::string subcommand;
  ordered_json flags = ordered_json::object();
  std::optional<std::uint64_t> seed;
  std::string start = utc_now();

  ordered_json finish() const {
    ordered_json m;
    m["tool"] = "flatfloor";
    m["version"] = FLATFLOOR_VERSION;
    m["subcommand"] = subcommand;
    m["flags"] = flags;
    m["seed"] = seed ? ordered_json(*seed) : ordered_json(nullptr);
    m["start"] = start;
    m["end"] = utc_now();
    return m;
  }
};

ordered_json rational_json(const Rational& r) {
  return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

BodySpec resolve_body(const std::string& ref) {
  if (auto b = builtin_body(ref)) return *b;
  return parse_body_spec(read_file(ref));
}

void emit_csv_manifest(std::ostream& out, const Manifest& m) { out << "# manifest " << m.finish().dump() << "\n"; }

// ---- exact ----

struct ExactArgs {
  std::string seq = "t";
  long n = 8;
  std::string method;
  std::string format = "csv";
};

int cmd_exact(const ExactArgs& a, Manifest& m, std::ostream& out) {
  if (a.n < 0) throw std::invalid_argument("--n must be >= 0");
  SeqMethod method = has_closed_form(a.seq) ? SeqMethod::ClosedForm : SeqMethod::Recursion;
  if (a.method == "recursion") method = SeqMethod::Recursion;
  else if (a.method == "closed-form" || a.method == "closed") method = SeqMethod::ClosedForm;
  const RationalSeq seq = sequence_table(a.seq, static_cast<unsigned long>(a.n), method);
  m.flags = {{"seq", seq.name}, {"n", a.n}, {"method", to_string(seq.method)}, {"format", a.format}};

  if (a.format == "json") {
    ordered_json j;
    j["schema"] = "flatfloor.exact/1";
    j["manifest"] = m.finish();
    j["sequence"] = seq.name;
    j["method"] = to_string(seq.method);
    ordered_json values = ordered_json::array();
    for (std::size_t i = 0; i < seq.values.size(); ++i)
      values.push_back({{"n", i}, {"value", rational_json(seq.values[i])}, {"decimal", seq.values[i].get_d()}});
    j["values"] = std::move(values);
    out << j.dump(2) << "\n";
  } else if (a.format == "dat") {
    out << "# " << m.finish().dump() << "\n# n " << seq.name << "_n\n";
    for (std::size_t i = 0; i < seq.values.size(); ++i) out << i << " " << real(seq.values[i].get_d()) << "\n";
  } else {
    emit_csv_manifest(out, m);
    out << "n,num,den,decimal\n";
    for (std::size_t i = 0; i < seq.values.size(); ++i)
      out << i << "," << seq.values[i].get_num().get_str() << "," << seq.values[i].get_den().get_str() << ","
          << real(seq.values[i].get_d()) << "\n";
  }
  return kExitOk;
}

// ---- estimate ----

struct EstimateArgs {
  std::string body;
  std::string estimator = "Q";
  int n = 2;
  std::uint64_t samples = 1'000'000;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  std::string path = "parallel";
  std::string format = "json";
};

ordered_json result_json(const EstimateResult& r) {
  ordered_json j;
  j["estimator"] = r.estimator;
  j["estimate"] = r.estimate;
  j["std_error"] = r.std_error;
  j["ci95"] = {r.ci95.first, r.ci95.second};
  j["n_samples"] = r.n_samples;
  j["n_success"] = r.n_success;
  j["seed"] = r.seed;
  j["wall_ms"] = r.wall_ms;
  j["workers"] = r.workers;
  j["low_power"] = r.low_power;
  return j;
}

int cmd_estimate(const EstimateArgs& a, Manifest& m, std::ostream& out, std::ostream& err) {
  McOptions o;
  o.samples = a.samples;
  if (a.samples < 1) throw std::invalid_argument("--samples must be >= 1");
  if (a.path != "parallel" && a.path != "serial") throw std::invalid_argument("--path must be serial or parallel");
  o.path = a.path == "serial" ? ExecPath::Serial : ExecPath::Parallel;
  o.workers = a.workers;
  o.seed = a.seed ? *a.seed : entropy_seed();
  m.seed = o.seed;

  const bool needs_body = a.estimator == "Q" || a.estimator == "Q2" || a.estimator == "P";
  std::optional<BodySpec> spec;
  if (needs_body) {
    if (a.body.empty()) throw std::invalid_argument("--body is required for estimator " + a.estimator);
    spec = resolve_body(a.body);
  }

  EstimateResult r;
  if (a.estimator == "Q") r = estimate_Q(build_body(*spec), a.n, o);
  else if (a.estimator == "Q2") r = estimate_Q2_height(build_body(*spec), o);
  else if (a.estimator == "P") r = estimate_P(build_body(*spec), a.n, o);
  else if (a.estimator == "beta1") r = estimate_beta1(a.n, o);
  else if (a.estimator == "beta2") r = estimate_beta2(a.n, o);
  else if (a.estimator == "fradius") r = estimate_fradius_reduction(a.n, o);
  else throw std::invalid_argument("unknown estimator '" + a.estimator + "'");
  if (!a.seed) err << "seed not set; using " << o.seed << "\n";

  m.flags = {{"body", a.body}, {"estimator", a.estimator}, {"n", a.n}, {"samples", a.samples},
             {"seed", o.seed}, {"workers", a.workers}, {"path", a.path}, {"format", a.format}};
  if (a.format == "csv") {
    emit_csv_manifest(out, m);
    out << "estimator,n,estimate,std_error,ci_low,ci_high,n_samples,n_success,seed,wall_ms,workers,low_power\n";
    out << r.estimator << "," << a.n << "," << real(r.estimate) << "," << real(r.std_error) << "," << real(r.ci95.first)
        << "," << real(r.ci95.second) << "," << r.n_samples << "," << r.n_success << "," << r.seed << "," << r.wall_ms
        << "," << r.workers << "," << (r.low_power ? "true" : "false") << "\n";
  } else {
    ordered_json j;
    j["schema"] = "flatfloor.estimate/1";
    j["manifest"] = m.finish();
    j["body"] = spec ? ordered_json::parse(body_spec_to_json(*spec)) : ordered_json(nullptr);
    j["n"] = a.n;
    j["result"] = result_json(r);
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

// ---- quadrature ----

struct QuadratureArgs {
  std::string top = "triangle";
  int n = 4;
  double tol = 1e-9;
  std::uint64_t budget = 200'000'000;
  bool numeric = false;
  std::string format = "json";
};

TopFunction resolve_top(const std::string& ref) {
  if (ref == "triangle") return TopFunction::triangle();
  if (ref == "square") return TopFunction::constant();
  if (ref == "parabola") return TopFunction::parabola();
  if (ref.rfind("pwl:", 0) == 0) return parse_top(read_file(ref.substr(4)));
  throw std::invalid_argument("--top must be triangle, square, parabola or pwl:<file>");
}

int cmd_quadrature(const QuadratureArgs& a, Manifest& m, std::ostream& out) {
  if (a.n < 0) throw std::invalid_argument("--n must be >= 0");
  if (!(a.tol > 0.0)) throw std::invalid_argument("--tol must be positive");
  const TopFunction g = resolve_top(a.top);
  DecompOptions o;
  o.tol = a.tol;
  o.budget = a.budget;
  o.force_numeric = a.numeric;
  const DecompResult r = q_decomp(g, a.n, o);
  m.flags = {{"top", a.top}, {"n", a.n}, {"tol", a.tol}, {"budget", a.budget}, {"numeric", a.numeric}, {"format", a.format}};

  if (a.format == "csv") {
    emit_csv_manifest(out, m);
    out << "n,value,error_estimate,exact_num,exact_den,method,evaluations,budget_exhausted\n";
    out << a.n << "," << real(r.value) << "," << real(r.error_estimate) << ","
        << (r.exact ? r.exact->get_num().get_str() : "") << "," << (r.exact ? r.exact->get_den().get_str() : "") << ","
        << r.method << "," << r.evaluations << "," << (r.budget_exhausted ? "true" : "false") << "\n";
  } else {
    ordered_json j;
    j["schema"] = "flatfloor.quadrature/1";
    j["manifest"] = m.finish();
    j["top"] = ordered_json::parse(top_to_json(g));
    j["n"] = a.n;
    ordered_json res;
    res["value"] = r.value;
    res["error_estimate"] = r.error_estimate;
    res["exact"] = r.exact ? rational_json(*r.exact) : ordered_json(nullptr);
    res["method"] = r.method;
    res["evaluations"] = r.evaluations;
    res["budget_exhausted"] = r.budget_exhausted;
    res["segment_overflow"] = r.segment_overflow;
    j["result"] = std::move(res);
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

// ---- verify ----

struct VerifyArgs {
  std::string suite = "all";
  std::size_t trials = 100;
  std::uint64_t samples = 100'000;
  std::optional<std::uint64_t> seed;
  int workers = 0;
  int n_max = 4;
  std::string out_path;
};

int cmd_verify(const VerifyArgs& a, Manifest& m, std::ostream& out, std::ostream& err) {
  VerifyOptions o;
  o.trials = a.trials;
  o.samples = a.samples;
  o.workers = a.workers;
  o.n_max = a.n_max;
  if (a.samples < 1) throw std::invalid_argument("--samples must be >= 1");
  if (a.n_max < 2) throw std::invalid_argument("--n-max must be >= 2");
  o.seed = a.seed ? *a.seed : entropy_seed();
  m.seed = o.seed;
  m.flags = {{"suite", a.suite}, {"trials", a.trials}, {"samples", a.samples}, {"seed", o.seed},
             {"workers", a.workers}, {"n_max", a.n_max}, {"out", a.out_path}};

  std::vector<std::string> names;
  if (a.suite == "all") names = suite_names();
  else names = {a.suite};
  for (const auto& s : names)
    if (std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
      throw std::invalid_argument("unknown suite '" + s + "'");
  if (!a.seed) err << "seed not set; using " << o.seed << "\n";

  bool ok = true;
  ordered_json reports = ordered_json::array();
  for (const auto& name : names) {
    const VerifyReport report = run_suite(name, o);
    out << report.summary() << "\n";
    ok = ok && report.ok();
    reports.push_back(ordered_json::parse(report.to_json()));
  }
  if (!a.out_path.empty()) {
    ordered_json j;
    j["schema"] = "flatfloor.verify/1";
    j["manifest"] = m.finish();
    j["suites"] = std::move(reports);
    std::ofstream f(a.out_path);
    if (!f) throw std::invalid_argument("cannot write '" + a.out_path + "'");
    f << j.dump(2) << "\n";
  }
  return ok ? kExitOk : kExitSuiteFailure;
}

// ---- body ----

struct BodyArgs {
  std::string ref;
  int rows = 10;
  std::string format = "text";
};

int cmd_body(const BodyArgs& a, Manifest& m, std::ostream& out) {
  if (a.rows < 1) throw std::invalid_argument("--rows must be >= 1");
  const BodySpec spec = resolve_body(a.ref);
  const Body b = build_body(spec);
  m.flags = {{"body", a.ref}, {"rows", a.rows}, {"format", a.format}};
  const double top = b.max_height();

  if (a.format == "json") {
    ordered_json j;
    j["schema"] = "flatfloor.body/1";
    j["manifest"] = m.finish();
    j["descriptor"] = ordered_json::parse(body_spec_to_json(spec));
    j["kind"] = to_string(b.kind());
    j["dimension"] = b.dimension();
    j["floor_area"] = b.floor_area();
    j["volume"] = b.volume();
    j["max_height"] = top;
    j["mean_height"] = b.mean_height();
    j["q2"] = b.q2_from_layers();
    ordered_json layers = ordered_json::array();
    for (int i = 0; i <= a.rows; ++i) {
      const double t = top * i / a.rows;
      layers.push_back({{"t", t}, {"layer", b.layer_volume(t)}, {"below", b.below_volume(t)}});
    }
    j["layers"] = std::move(layers);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "# manifest " << m.finish().dump() << "\n";
  out << "descriptor  " << body_spec_to_json(spec) << "\n";
  out << "body        " << b.describe() << "\n";
  out << "floor_area  " << real(b.floor_area()) << "\n";
  out << "volume      " << real(b.volume()) << "\n";
  out << "max_height  " << real(top) << "\n";
  out << "mean_height " << real(b.mean_height()) << "\n";
  out << "q2          " << real(b.q2_from_layers()) << "\n";
  out << "t,layer,below\n";
  for (int i = 0; i <= a.rows; ++i) {
    const double t = top * i / a.rows;
    out << real(t) << "," << real(b.layer_volume(t)) << "," << real(b.below_volume(t)) << "\n";
  }
  return kExitOk;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"flatfloor: convex position with a flat floor", "flatfloor"};
  app.set_version_flag("--version", std::string(FLATFLOOR_VERSION));
  app.require_subcommand(1);

  ExactArgs ea;
  auto* exact = app.add_subcommand("exact", "exact rational sequences");
  exact->add_option("--seq", ea.seq, "t, q, p, s, Y, u or ell")->check(CLI::IsMember({"t", "q", "p", "s", "Y", "y", "u", "ell", "l"}));
  exact->add_option("--n", ea.n, "last index");
  exact->add_option("--method", ea.method, "closed-form or recursion")->check(CLI::IsMember({"closed-form", "closed", "recursion"}));
  exact->add_option("--format", ea.format)->check(CLI::IsMember({"csv", "json", "dat"}));

  EstimateArgs sa;
  auto* estimate = app.add_subcommand("estimate", "Monte Carlo estimation");
  estimate->add_option("--body", sa.body, "body file or builtin name");
  estimate->add_option("--estimator", sa.estimator)->check(CLI::IsMember({"Q", "Q2", "P", "beta1", "beta2", "fradius"}));
  estimate->add_option("--n", sa.n, "number of points");
  estimate->add_option("--samples", sa.samples);
  estimate->add_option("--seed", sa.seed);
  estimate->add_option("--workers", sa.workers);
  estimate->add_option("--path", sa.path)->check(CLI::IsMember({"serial", "parallel"}));
  estimate->add_option("--format", sa.format)->check(CLI::IsMember({"csv", "json"}));

  QuadratureArgs qa;
  auto* quad = app.add_subcommand("quadrature", "recursive decomposition formula");
  quad->add_option("--top", qa.top, "triangle, square, parabola or pwl:<file>");
  quad->add_option("--n", qa.n);
  quad->add_option("--tol", qa.tol);
  quad->add_option("--budget", qa.budget, "integrand evaluation budget");
  quad->add_flag("--numeric", qa.numeric, "skip the exact family dispatch");
  quad->add_option("--format", qa.format)->check(CLI::IsMember({"csv", "json"}));

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "inequality suites");
  verify->add_option("--suite", va.suite, "suite name or all");
  verify->add_option("--trials", va.trials);
  verify->add_option("--samples", va.samples);
  verify->add_option("--seed", va.seed);
  verify->add_option("--workers", va.workers);
  verify->add_option("--n-max", va.n_max);
  verify->add_option("--out", va.out_path, "JSON report path");

  BodyArgs ba;
  auto* body = app.add_subcommand("body", "validate a body descriptor and print derived quantities");
  body->add_option("body", ba.ref, "body file or builtin name")->required();
  body->add_option("--rows", ba.rows);
  body->add_option("--format", ba.format)->check(CLI::IsMember({"text", "json"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitInputError;
  }

  Manifest m;
  try {
    if (exact->parsed()) {
      m.subcommand = "exact";
      return cmd_exact(ea, m, out);
    }
    if (estimate->parsed()) {
      m.subcommand = "estimate";
      return cmd_estimate(sa, m, out, err);
    }
    if (quad->parsed()) {
      m.subcommand = "quadrature";
      return cmd_quadrature(qa, m, out);
    }
    if (verify->parsed()) {
      m.subcommand = "verify";
      return cmd_verify(va, m, out, err);
    }
    if (body->parsed()) {
      m.subcommand = "body";
      return cmd_body(ba, m, out);
    }
  } catch (const std::exception& e) {
    err << "error: " << one_line(e.what()) << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace flatfloor
