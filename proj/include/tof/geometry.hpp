#pragma once
// ============================================================================
// Points and the slit-adapted coordinate frame.
//
// Coordinates are (x1, x2, x3); (r, theta) is the polar frame of the
// (x2, x3)-plane with theta in (-pi, pi].  The slit is the half-plane
// S = {x2 <= 0, x3 = 0}, i.e. {theta = pi}.
// ============================================================================

#include <cmath>
#include <numbers>

namespace tof {

struct PolarPoint2 {
  double r = 0.0;      // >= 0
  double theta = 0.0;  // in (-pi, pi]
};

struct Point3 {
  double x1 = 0.0;
  double x2 = 0.0;
  double x3 = 0.0;

  double r() const { return std::hypot(x2, x3); }
  // atan2 convention: theta = pi exactly on {x2 < 0, x3 = +0}.
  double theta() const { return std::atan2(x3, x2); }
  PolarPoint2 polar() const { return {r(), theta()}; }

  static Point3 from_polar(double x1, double r, double theta) {
    return {x1, r * std::cos(theta), r * std::sin(theta)};
  }

  double norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }

  Point3 operator+(const Point3& o) const { return {x1 + o.x1, x2 + o.x2, x3 + o.x3}; }
  Point3 operator-(const Point3& o) const { return {x1 - o.x1, x2 - o.x2, x3 - o.x3}; }
  Point3 operator*(double t) const { return {t * x1, t * x2, t * x3}; }
};

// Rotation in the (x1, x2)-plane by angle tau (the thin plane {x3=0} is
// preserved): U_tau(x) = (x1 cos - x2 sin, x1 sin + x2 cos, x3).
inline Point3 rotate_xy(const Point3& p, double tau) {
  const double c = std::cos(tau), s = std::sin(tau);
  return {p.x1 * c - p.x2 * s, p.x1 * s + p.x2 * c, p.x3};
}

inline constexpr double kPi = std::numbers::pi;

}  // namespace tof
