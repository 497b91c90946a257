#pragma once
// ============================================================================
// Quadrature on the unit sphere adapted to the slit geometry.
//
// Chart: colatitude s from the x1-axis and the slit-polar angle theta,
//   x(s, theta) = (cos s, sin s cos theta, sin s sin theta),  dA = sin s ds dtheta.
//
// Product rule: Gauss-Legendre in s  x  uniform (periodic trapezoid) grid in
// theta with the slit theta = pi as a grid line.  The integrands of interest
// are trigonometric polynomials in theta of half-integer frequency times
// smooth-or-mildly-singular profiles in s, so the theta rule is spectrally
// accurate and the s rule converges fast; resolution is doubled until the
// value settles below an absolute tolerance.
//
// Mild pole singularities (total r-order > -2) are integrable here because
// the area element contributes sin s; Gauss nodes never hit the poles.
// ============================================================================

#include <cmath>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "tof/geometry.hpp"
#include "tof/slit_function.hpp"

namespace tof {

struct Quad1D {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Gauss-Legendre nodes/weights by Newton iteration on P_n; cached per n.
inline const Quad1D& gauss_legendre(int n) {
  static std::map<int, Quad1D> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Quad1D q;
  q.x.resize(n);
  q.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.x[i] = -x;
    q.x[n - 1 - i] = x;
    q.w[i] = q.w[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(q)).first->second;
}

class SphereQuad {
public:
  SphereQuad(int ns, int ntheta) : ns_(ns), nt_(ntheta) {}

  double integrate(const SphereFn& f) const {
    const Quad1D& gl = gauss_legendre(ns_);
    const double dtheta = 2.0 * kPi / nt_;
    double acc = 0.0;
    for (int i = 0; i < ns_; ++i) {
      const double s = 0.5 * kPi * (gl.x[i] + 1.0);  // map [-1,1] -> [0,pi]
      const double ws = 0.5 * kPi * gl.w[i] * std::sin(s);
      const double cs = std::cos(s), ss = std::sin(s);
      double ring = 0.0;
      for (int j = 0; j < nt_; ++j) {
        const double theta = -kPi + j * dtheta;  // slit theta=pi == j=0 line
        ring += f({cs, ss * std::cos(theta), ss * std::sin(theta)});
      }
      acc += ws * ring * dtheta;
    }
    return acc;
  }

  int ns() const { return ns_; }
  int ntheta() const { return nt_; }

private:
  int ns_, nt_;
};

// Adaptive sphere integral: double both resolutions until the change drops
// below tol (default 1e-10 absolute).
inline double sphere_integral(const SphereFn& f, double tol = 1e-10,
                              int ns0 = 24, int nt0 = 32, int max_doublings = 8) {
  double prev = SphereQuad(ns0, nt0).integrate(f);
  for (int d = 1; d <= max_doublings; ++d) {
    const double cur = SphereQuad(ns0 << d, nt0 << d).integrate(f);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  return prev;
}

// L2(S2) inner product of two sphere-evaluable functions.
inline double sphere_inner(const SphereFn& f, const SphereFn& g, double tol = 1e-10) {
  return sphere_integral([&](const Point3& p) { return f(p) * g(p); }, tol);
}

// SlitSum overload with the integrability check: the product behaves like
// r^{order_f + order_g} near the poles, and the sphere integrates r^sigma
// only for sigma > -2.
inline double sphere_inner(const SlitSum& f, const SlitSum& g, double tol = 1e-10) {
  if (f.singular_order().twice() + g.singular_order().twice() <= -4)
    throw std::domain_error("sphere_inner: non-integrable pole singularity");
  return sphere_inner([&](const Point3& p) { return f.eval(p); },
                      [&](const Point3& p) { return g.eval(p); }, tol);
}

inline double sphere_norm2(const SlitSum& f, double tol = 1e-10) {
  return sphere_inner(f, f, tol);
}

}  // namespace tof
