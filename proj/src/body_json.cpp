#include "flatfloor/body_json.hpp"

#include <stdexcept>

#include "json.hpp"

namespace flatfloor {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument("body descriptor: " + what); }

Rational rational_of(const json& j, const char* field) {
  try {
    if (j.is_object()) return make_rational(j.at("num").get<std::string>(), j.at("den").get<std::string>());
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number()) return rational_from_double(j.get<double>());
  } catch (const json::exception&) {
  } catch (const std::invalid_argument&) {
  }
  fail(std::string("'") + field + "' is not a rational");
}

json rational_json(const Rational& r) { return {{"num", r.get_num().get_str()}, {"den", r.get_den().get_str()}}; }

double real_of(const json& j, const char* field) {
  if (!j.is_number()) fail(std::string("'") + field + "' must be a number");
  return j.get<double>();
}

std::vector<Point2> floor_of(const json& j) {
  if (!j.is_array()) fail("'floor' must be an array of [x, y] pairs");
  std::vector<Point2> out;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2) fail("'floor' must be an array of [x, y] pairs");
    out.push_back({real_of(p[0], "floor"), real_of(p[1], "floor")});
  }
  return out;
}

json floor_json(const std::vector<Point2>& floor) {
  json arr = json::array();
  for (const auto& p : floor) arr.push_back({p.x, p.y});
  return arr;
}

TopFunction top_of(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) fail("'top' needs a string 'type'");
  const std::string type = j["type"];
  if (type == "triangle") return TopFunction::triangle();
  if (type == "square" || type == "constant") return TopFunction::constant();
  if (type == "parabola") return TopFunction::parabola();
  if (type == "linear") {
    if (!j.contains("slope") || !j.contains("intercept")) fail("linear top needs 'slope' and 'intercept'");
    return TopFunction::linear(rational_of(j["slope"], "slope"), rational_of(j["intercept"], "intercept"));
  }
  if (type == "quadratic") {
    if (!j.contains("c2") || !j.contains("c1") || !j.contains("c0")) fail("quadratic top needs 'c2', 'c1', 'c0'");
    return TopFunction::quadratic(rational_of(j["c2"], "c2"), rational_of(j["c1"], "c1"), rational_of(j["c0"], "c0"));
  }
  if (type == "pwl") {
    if (!j.contains("knots") || !j["knots"].is_array()) fail("pwl top needs a 'knots' array");
    std::vector<TopFunction::Knot> knots;
    for (const auto& k : j["knots"]) {
      if (!k.is_array() || k.size() != 2) fail("each knot must be [x, y]");
      knots.push_back({rational_of(k[0], "knot x"), rational_of(k[1], "knot y")});
    }
    return TopFunction::piecewise_linear(std::move(knots));
  }
  fail("unknown top type '" + type + "'");
}

json top_json(const TopFunction& g) {
  const auto& c = g.coefficients();
  switch (g.kind()) {
    case TopFunction::Kind::Constant: return {{"type", "square"}};
    case TopFunction::Kind::Linear:
      if (c[0] == 0) return {{"type", "triangle"}};
      return {{"type", "linear"}, {"slope", rational_json(c[1])}, {"intercept", rational_json(c[0])}};
    case TopFunction::Kind::Quadratic:
      if (c[0] == 0 && c[1] == 6 && c[2] == -6) return {{"type", "parabola"}};
      return {{"type", "quadratic"}, {"c2", rational_json(c[2])}, {"c1", rational_json(c[1])}, {"c0", rational_json(c[0])}};
    case TopFunction::Kind::PiecewiseLinear: {
      json knots = json::array();
      for (const auto& k : g.knots()) knots.push_back({rational_json(k.x), rational_json(k.y)});
      return {{"type", "pwl"}, {"knots", knots}};
    }
  }
  return {};
}

BodyKind kind_of(const std::string& s) {
  if (s == "subprism") return BodyKind::SubPrism2D;
  if (s == "mountain") return BodyKind::Mountain;
  if (s == "prism") return BodyKind::Prism;
  if (s == "frustum") return BodyKind::Frustum;
  if (s == "tetrahedron") return BodyKind::Tetrahedron;
  fail("unknown kind '" + s + "'");
}

BodySpec spec_of(const json& j) {
  if (!j.is_object()) fail("top level must be an object");
  if (!j.contains("kind") || !j["kind"].is_string()) fail("missing string 'kind'");
  BodySpec spec;
  spec.kind = kind_of(j["kind"]);
  if (j.contains("dimension")) {
    if (!j["dimension"].is_number_integer()) fail("'dimension' must be 2 or 3");
    spec.dimension = j["dimension"].get<int>();
  } else {
    spec.dimension = (spec.kind == BodyKind::Tetrahedron) ? 3 : 2;
  }
  if (spec.dimension != 2 && spec.dimension != 3) fail("'dimension' must be 2 or 3");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (key != "kind" && key != "dimension" && key != "top" && key != "floor" && key != "apex" && key != "apex_x" &&
        key != "h")
      fail("unknown field '" + key + "'");
  }

  switch (spec.kind) {
    case BodyKind::SubPrism2D:
      if (spec.dimension != 2) fail("subprism bodies are 2D");
      if (!j.contains("top")) fail("subprism needs 'top'");
      spec.top = top_of(j["top"]);
      break;
    case BodyKind::Mountain:
      if (spec.dimension == 2) {
        if (j.contains("apex_x")) spec.apex_x = real_of(j["apex_x"], "apex_x");
      } else {
        if (!j.contains("floor") || !j.contains("apex")) fail("3D mountain needs 'floor' and 'apex'");
        spec.floor = floor_of(j["floor"]);
        const auto& a = j["apex"];
        if (!a.is_array() || a.size() != 3) fail("'apex' must be [x, y, z]");
        spec.apex = {real_of(a[0], "apex"), real_of(a[1], "apex"), real_of(a[2], "apex")};
      }
      break;
    case BodyKind::Prism:
      if (spec.dimension == 3) {
        if (!j.contains("floor")) fail("3D prism needs 'floor'");
        spec.floor = floor_of(j["floor"]);
      }
      break;
    case BodyKind::Frustum:
      if (!j.contains("h")) fail("frustum needs 'h'");
      spec.h = real_of(j["h"], "h");
      if (spec.dimension == 3 && j.contains("floor")) spec.floor = floor_of(j["floor"]);
      break;
    case BodyKind::Tetrahedron:
      if (spec.dimension != 3) fail("tetrahedron is 3D");
      break;
  }
  return spec;
}

}  // namespace

BodySpec parse_body_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON (") + e.what() + ")");
  }
  try {
    return spec_of(j);
  } catch (const json::exception& e) {
    fail(e.what());
  }
}

std::string body_spec_to_json(const BodySpec& spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  j["dimension"] = spec.dimension;
  switch (spec.kind) {
    case BodyKind::SubPrism2D: j["top"] = top_json(*spec.top); break;
    case BodyKind::Mountain:
      if (spec.dimension == 2) {
        j["apex_x"] = spec.apex_x;
      } else {
        j["floor"] = floor_json(spec.floor);
        j["apex"] = {spec.apex.x, spec.apex.y, spec.apex.z};
      }
      break;
    case BodyKind::Prism:
      if (spec.dimension == 3) j["floor"] = floor_json(spec.floor);
      break;
    case BodyKind::Frustum:
      j["h"] = spec.h;
      if (spec.dimension == 3 && !spec.floor.empty()) j["floor"] = floor_json(spec.floor);
      break;
    case BodyKind::Tetrahedron: break;
  }
  return j.dump();
}

Body build_body(const BodySpec& spec) {
  switch (spec.kind) {
    case BodyKind::SubPrism2D:
      if (!spec.top) fail("subprism needs a top");
      return Body::subprism_2d(*spec.top);
    case BodyKind::Mountain:
      return spec.dimension == 2 ? Body::mountain_2d(spec.apex_x) : Body::mountain(spec.floor, spec.apex);
    case BodyKind::Prism: return spec.dimension == 2 ? Body::prism_2d() : Body::prism(spec.floor);
    case BodyKind::Frustum: return Body::frustum(spec.h, spec.dimension, spec.floor);
    case BodyKind::Tetrahedron: return Body::tetrahedron();
  }
  fail("unsupported body");
}

const std::vector<std::string>& builtin_body_names() {
  static const std::vector<std::string> names{"triangle",  "square", "parabola",    "mountain2", "prism2",
                                              "mountain3", "prism3", "tetrahedron", "frustum"};
  return names;
}

std::optional<BodySpec> builtin_body(const std::string& name) {
  BodySpec s;
  if (name == "triangle" || name == "square" || name == "parabola") {
    s.kind = BodyKind::SubPrism2D;
    s.top = name == "triangle" ? TopFunction::triangle() : name == "square" ? TopFunction::constant() : TopFunction::parabola();
  } else if (name == "mountain2") {
    s.kind = BodyKind::Mountain;
  } else if (name == "prism2") {
    s.kind = BodyKind::Prism;
  } else if (name == "mountain3") {
    s.kind = BodyKind::Mountain;
    s.dimension = 3;
    s.floor = Body::unit_square_floor();
    s.apex = {0.0, 0.0, 3.0};
  } else if (name == "prism3") {
    s.kind = BodyKind::Prism;
    s.dimension = 3;
    s.floor = Body::unit_square_floor();
  } else if (name == "tetrahedron") {
    s.kind = BodyKind::Tetrahedron;
    s.dimension = 3;
  } else if (name == "frustum") {
    s.kind = BodyKind::Frustum;
    s.dimension = 3;
    s.h = 0.5;
    s.floor = Body::unit_square_floor();
  } else {
    return std::nullopt;
  }
  return s;
}

std::string top_to_json(const TopFunction& top) { return top_json(top).dump(); }

TopFunction parse_top(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(std::string("invalid JSON (") + e.what() + ")");
  }
  return top_of(j);
}

}  // namespace flatfloor
