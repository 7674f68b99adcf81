#include <cmath>
#include <limits>

#include "flatfloor/geometry.hpp"
#include "flatfloor/rational.hpp"

namespace flatfloor {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;  // 2^-53
constexpr double kOrient2Bound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kOrient3Bound = (7.0 + 56.0 * kEps) * kEps;

int sign_of(const Rational& v) { return sgn(v); }

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

int orient2_exact(const Point2& a, const Point2& b, const Point2& c) {
  const Rational ax(rational_from_double(a.x)), ay(rational_from_double(a.y));
  const Rational bx(rational_from_double(b.x)), by(rational_from_double(b.y));
  const Rational cx(rational_from_double(c.x)), cy(rational_from_double(c.y));
  const Rational det = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
  return sign_of(det);
}

int orient3_exact(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  const Rational ax(rational_from_double(a.x)), ay(rational_from_double(a.y)), az(rational_from_double(a.z));
  const Rational ux = rational_from_double(b.x) - ax, uy = rational_from_double(b.y) - ay,
                 uz = rational_from_double(b.z) - az;
  const Rational vx = rational_from_double(c.x) - ax, vy = rational_from_double(c.y) - ay,
                 vz = rational_from_double(c.z) - az;
  const Rational wx = rational_from_double(d.x) - ax, wy = rational_from_double(d.y) - ay,
                 wz = rational_from_double(d.z) - az;
  const Rational det = ux * (vy * wz - vz * wy) - uy * (vx * wz - vz * wx) + uz * (vx * wy - vy * wx);
  return sign_of(det);
}

int orient2(const Point2& a, const Point2& b, const Point2& c) {
  const double detleft = (a.x - c.x) * (b.y - c.y);
  const double detright = (a.y - c.y) * (b.x - c.x);
  const double det = detleft - detright;
  const double errbound = kOrient2Bound * (std::fabs(detleft) + std::fabs(detright));
  if (det > errbound || -det > errbound) return sign_of(det);
  return orient2_exact(a, b, c);
}

int orient3(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  // Shewchuk's layout: rows relative to d; his sign is the negation of ours.
  const double adx = a.x - d.x, bdx = b.x - d.x, cdx = c.x - d.x;
  const double ady = a.y - d.y, bdy = b.y - d.y, cdy = c.y - d.y;
  const double adz = a.z - d.z, bdz = b.z - d.z, cdz = c.z - d.z;
  // a zero column (e.g. four floor points) makes the determinant exactly zero
  if ((adx == 0.0 && bdx == 0.0 && cdx == 0.0) || (ady == 0.0 && bdy == 0.0 && cdy == 0.0) ||
      (adz == 0.0 && bdz == 0.0 && cdz == 0.0))
    return 0;

  const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
  const double cdxady = cdx * ady, adxcdy = adx * cdy;
  const double adxbdy = adx * bdy, bdxady = bdx * ady;

  const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
  const double permanent = (std::fabs(bdxcdy) + std::fabs(cdxbdy)) * std::fabs(adz) +
                           (std::fabs(cdxady) + std::fabs(adxcdy)) * std::fabs(bdz) +
                           (std::fabs(adxbdy) + std::fabs(bdxady)) * std::fabs(cdz);
  const double errbound = kOrient3Bound * permanent;
  if (det > errbound || -det > errbound) return -sign_of(det);
  return orient3_exact(a, b, c, d);
}

}  // namespace flatfloor
