#pragma once

#include <span>
#include <vector>

#include "flatfloor/bodies.hpp"
#include "flatfloor/geometry.hpp"
#include "flatfloor/rng.hpp"

namespace flatfloor {

/// Uniform point under G: X by inverse cdf of G, then Y = G(X) V.
Point2 sample_subprism_2d(const TopFunction& top, RngStream& rng);

/// Uniform point in any 2D body (sub-prism, mountain, prism, frustum).
Point2 sample_body_2d(const Body& body, RngStream& rng);
/// Uniform point in any 3D body. Height by inverse cdf of the layer volume,
/// then a uniform point of the (homothetic) layer; the tetrahedron uses
/// normalized exponential barycentric weights.
Point3 sample_body_3d(const Body& body, RngStream& rng);

Point3 sample_mountain_3d(const Body& body, RngStream& rng);
Point3 sample_prism_3d(const Body& body, RngStream& rng);
Point3 sample_tetrahedron(const Body& body, RngStream& rng);
Point3 sample_frustum(const Body& body, RngStream& rng);

/// Uniform point of a convex polygon using a prebuilt triangle-fan cdf.
Point2 sample_polygon(std::span<const Point2> polygon, std::span<const double> fan_cdf, RngStream& rng);

/// Density 2x on [0,1]^2.
Point2 sample_density_g1(RngStream& rng);
/// Density 2x 1{x <= 1 - y/3} on [0,1] x [0,3].
Point2 sample_density_g2(RngStream& rng);

/// Smallest a >= 0 with (z.x, z.y) in a F, for a floor polygon with centroid at
/// the origin. Throws std::invalid_argument when a > 1 (outside every admissible dilate).
double floor_radius(const Point3& z, std::span<const Point2> floor);

/// Random concave piecewise-linear top: decreasing random slopes on random
/// breakpoints, integrated, lifted to nonnegativity and normalized. Knots are
/// kept on a dyadic grid so exact arithmetic stays small.
TopFunction random_concave_top(RngStream& rng, int segments);

/// Counterclockwise polygon inscribed in the unit circle at jittered equispaced angles.
std::vector<Point2> random_convex_polygon(RngStream& rng, int sides);

}  // namespace flatfloor
