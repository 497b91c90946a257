#pragma once
// ============================================================================
// Geometric transforms acting on function evaluators.
//
//   rotate3(tau):   U_tau(f)(x) = f(U_{-tau} x), rotation in the (x1,x2)-plane
//   translate2(tau):U_tau(f)(x1,x2) = f(x1 - tau, x2)   (2D problems)
//   kelvin2(R):     K_R(f)(x) = f(R^2 x / |x|^2)        (unweighted
//                   composition; the form used in the uniqueness-at-infinity
//                   argument, an involution by construction)
//   rescale(q,rho): f_{(q,rho)}(x) = f(q + rho x) / rho^{7/2}
// ============================================================================

#include <cmath>
#include <functional>
#include <stdexcept>

#include "tof/geometry.hpp"
#include "tof/slit_function.hpp"

namespace tof {

using Fn2 = std::function<double(double, double)>;

// Composition with the forward rotation: rotate3(tau)(f)(x) = f(U_tau x).
// This is the orientation under which d/dtau|_0 rotate3(tau)(u72) = w52 with
// the positive leading coefficient (7/2) v52.
inline SphereFn rotate3(double tau, SphereFn f) {
  return [tau, f = std::move(f)](const Point3& p) { return f(rotate_xy(p, tau)); };
}

inline Fn2 translate2(double tau, Fn2 f) {
  return [tau, f = std::move(f)](double x1, double x2) { return f(x1 - tau, x2); };
}

inline Fn2 kelvin2(double R, Fn2 f) {
  if (!(R > 0.0)) throw std::domain_error("kelvin2: R > 0 required");
  return [R2 = R * R, f = std::move(f)](double x1, double x2) {
    const double n2 = x1 * x1 + x2 * x2;
    if (n2 == 0.0) throw std::domain_error("kelvin2: evaluation at the origin");
    return f(R2 * x1 / n2, R2 * x2 / n2);
  };
}

inline SphereFn rescale(Point3 q, double rho, SphereFn f) {
  if (!(rho > 0.0)) throw std::domain_error("rescale: rho > 0 required");
  const double scale = std::pow(rho, 3.5);
  return [q, rho, scale, f = std::move(f)](const Point3& p) {
    return f(q + p * rho) / scale;
  };
}

// 2D modes for the plane problems: polar frame of (x1, x2), thin line
// {x2 = 0}, slit = the negative x1-axis (theta = pi).
inline double mode2(double lambda, double x1, double x2) {
  const double r = std::hypot(x1, x2);
  if (r == 0.0) {
    if (lambda < 0.0) throw std::domain_error("mode2: negative mode at r=0");
    return 0.0;
  }
  return std::pow(r, lambda) * std::cos(lambda * std::atan2(x2, x1));
}

}  // namespace tof
