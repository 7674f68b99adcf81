#pragma once

#include <optional>
#include <string>
#include <vector>

#include "flatfloor/bodies.hpp"
#include "flatfloor/top_function.hpp"

namespace flatfloor {

/// Construction parameters of a body, as read from or written to a JSON descriptor:
///
///   {"kind": "subprism", "dimension": 2, "top": {"type": "pwl", "knots": [[x, y], ...]}}
///   {"kind": "mountain", "dimension": 2, "apex_x": 0.5}
///   {"kind": "mountain", "dimension": 3, "floor": [[x, y], ...], "apex": [x, y, z]}
///   {"kind": "prism", "dimension": 2 | 3, "floor": [...]}
///   {"kind": "frustum", "dimension": 2 | 3, "h": 0.5, "floor": [...]}
///   {"kind": "tetrahedron", "dimension": 3}
///
/// Top types: triangle, square, parabola, linear {slope, intercept},
/// quadratic {c2, c1, c0}, pwl {knots}. Rationals are {"num": "..", "den": ".."}
/// (plain numbers and "a/b" strings are also accepted); reals are JSON numbers.
struct BodySpec {
  BodyKind kind = BodyKind::Prism;
  int dimension = 2;
  std::optional<TopFunction> top;
  std::vector<Point2> floor;
  Point3 apex{0.0, 0.0, 1.0};
  double apex_x = 0.5;
  double h = 1.0;
};

/// Throws std::invalid_argument with a one-line message on malformed input.
BodySpec parse_body_spec(const std::string& json_text);
std::string body_spec_to_json(const BodySpec& spec);
Body build_body(const BodySpec& spec);

/// Named bodies: triangle, square, parabola, mountain2, prism2, mountain3, prism3, tetrahedron, frustum.
const std::vector<std::string>& builtin_body_names();
std::optional<BodySpec> builtin_body(const std::string& name);

/// Canonical JSON for a top function.
std::string top_to_json(const TopFunction& top);
TopFunction parse_top(const std::string& json_text);

}  // namespace flatfloor
