#include "tof/cone_family.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tof {

namespace {
Rational branch1(const Rational& a2) { return Rational(4) * a2 * (1 - a2 / 5); }
Rational branch2(const Rational& a2) {
  return rat(24, 25) * a2 * (rat(7, 2) - rat(3, 10) * a2);
}
}  // namespace

Rational gamma_exact(const Rational& a2) {
  const Rational b1 = branch1(a2), b2 = branch2(a2);
  return b1 < b2 ? b1 : b2;
}
double gamma_fn(double a2) {
  return std::min(4.0 * a2 * (1.0 - a2 / 5.0),
                  (24.0 / 25.0) * a2 * (3.5 - 0.3 * a2));
}

RegionTag region_membership(const Rational& a1, const Rational& a2) {
  return region_membership_sq(a1 * a1, a2);
}

RegionTag region_membership_sq(const Rational& s, const Rational& a2) {
  // E1: a1^2/5 + (a2-5/2)^2/(25/4) <= 1;  E2: a1^2/(49/5) + (a2-35/6)^2/(35/6)^2 <= 1.
  const Rational q1 = s / 5 + (a2 - rat(5, 2)) * (a2 - rat(5, 2)) / rat(25, 4);
  const Rational q2 = s / rat(49, 5) +
                      (a2 - rat(35, 6)) * (a2 - rat(35, 6)) / (rat(35, 6) * rat(35, 6));
  RegionTag t;
  if (q1 > 1 || q2 > 1) {
    t.membership = Membership::outside;
  } else if (q1 == 1 && q2 == 1) {
    t.membership = Membership::boundary_both;
  } else if (q1 == 1) {
    t.membership = Membership::boundary_E1;
  } else if (q2 == 1) {
    t.membership = Membership::boundary_E2;
  } else {
    t.membership = Membership::interior;
  }
  return t;
}

RegionTag region_membership(double a1, double a2, double tol) {
  const double q1 = a1 * a1 / 5.0 + (a2 - 2.5) * (a2 - 2.5) / 6.25;
  const double d = 35.0 / 6.0;
  const double q2 = a1 * a1 / 9.8 + (a2 - d) * (a2 - d) / (d * d);
  RegionTag t;
  const bool on1 = std::abs(q1 - 1.0) <= tol, on2 = std::abs(q2 - 1.0) <= tol;
  if ((q1 > 1.0 + tol) || (q2 > 1.0 + tol)) {
    t.membership = Membership::outside;
  } else if (on1 && on2) {
    t.membership = Membership::boundary_both;
  } else if (on1) {
    t.membership = Membership::boundary_E1;
  } else if (on2) {
    t.membership = Membership::boundary_E2;
  } else {
    t.membership = Membership::interior;
  }
  return t;
}

RegionTag classify_subregion(const Rational& a1, const Rational& a2, const Rational& mu) {
  RegionTag t = region_membership(a1, a2);
  if (t.membership == Membership::outside)
    throw std::domain_error("classify_subregion: point outside the region");
  const Rational g = gamma_exact(a2);
  const bool in_a12_band = a2 >= mu;
  const bool a3_band = a2 <= 2 * mu;
  if (in_a12_band) {
    t.subregion = (a1 * a1 < g) ? Subregion::A1 : Subregion::A2;
    t.also_A3 = a3_band;
  } else if (a3_band) {
    t.subregion = Subregion::A3;
  } else {
    t.subregion = Subregion::none;
  }
  return t;
}

Gradient3 ConeProfile::grad(const Point3& p) const {
  if (rot == 0.0) return to_function_unrotated().grad(p);
  const Point3 q = rotate_xy(p, -rot);
  const Gradient3 g = to_function_unrotated().grad(q);
  // chain rule: rotate the gradient forward
  const double c = std::cos(rot), s = std::sin(rot);
  return {c * g.d1 - s * g.d2, s * g.d1 + c * g.d2, g.d3};
}

std::string ConeProfile::json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"a0\":" << a0 << ",\"a1\":" << a1 << ",\"a2\":" << a2 << ",\"a3\":" << a3
     << ",\"eps\":" << eps << ",\"rot\":" << rot << "}";
  return os.str();
}

double eps_p(const ConeProfile& p) {
  if (!(p.a0 > 0.0)) throw std::domain_error("eps_p: a0 > 0 required");
  const auto c = p.effective();
  return std::max(
      {std::abs(c[1] / c[0]), std::sqrt(std::abs(c[2] / c[0])),
       std::cbrt(std::abs(c[3] / c[0]))});
}

Admissibility is_admissible(const ConeProfile& p, double tol) {
  if (!(p.a0 > 0.0)) throw std::domain_error("is_admissible: a0 > 0 required");
  Admissibility out;
  const auto c = p.effective();
  const double r1 = c[1] / c[0], r2 = c[2] / c[0], r3 = c[3] / c[0];
  const double scale = 1.0 + r1 * r1 + std::abs(r2) + std::abs(r3);
  if (std::abs(r3) > tol * scale || r2 < -tol * scale) {
    out.kind = AdmissKind::not_solution;
    return out;
  }
  // The two branches with the eps^2-weighted corrections, in unscaled ratios
  // A1 = a1/a0, A2 = a2/a0:
  //   A1^2 <= min{ 4 A2 (1 - (1/5) A2 eps^2),
  //                (24/25) A2 (7/2 - (3/10) A2 eps^2) }.
  const double A1 = p.a1 / p.a0, A2 = p.a2 / p.a0;
  const double e2 = p.eps * p.eps;
  const double br1 = 4.0 * A2 * (1.0 - 0.2 * A2 * e2);
  const double br2 = (24.0 / 25.0) * A2 * (3.5 - 0.3 * A2 * e2);
  const double rhs = std::min(br1, br2);
  out.tight_E1 = std::abs(A1 * A1 - br1) <= tol * scale;
  out.tight_E2 = std::abs(A1 * A1 - br2) <= tol * scale;
  if (A1 * A1 <= rhs + tol * scale) {
    out.kind = AdmissKind::solves_everywhere;
    return out;
  }
  if (A1 >= 0.0 && A1 * A1 <= br1 + tol * scale) {
    out.kind = AdmissKind::solves_outside_cone;
    out.side = +1;  // exceptional cone near {r=0, x1>0}
    out.opening = std::abs(p.a1 * p.eps / p.a0);
    return out;
  }
  out.kind = AdmissKind::not_solution;
  return out;
}

DegeneracyGeometry degeneracy_geometry(const ConeProfile& p) {
  DegeneracyGeometry g;
  const double a1 = p.a1 / p.a0, a2 = p.a2 / p.a0;
  const double den_p = 14.0 - 1.2 * a2;  // nonzero on 0 <= a2 <= 5
  Point3 rp{1.0, -5.0 * a1 / den_p, 0.0};
  Point3 rm;
  const double den_m = 2.0 - 0.4 * a2;  // vanishes at a2 = 5
  if (std::abs(den_m) < 1e-12) {
    rm = {0.0, 1.0, 0.0};  // limit direction at a2 = 5
  } else {
    rm = {-1.0, a1 / den_m, 0.0};
  }
  const double np = rp.norm(), nm = rm.norm();
  g.ray_plus = rp * (1.0 / np);
  g.ray_minus = rm * (1.0 / nm);
  g.A_plus = g.ray_plus;
  g.A_minus = g.ray_minus;
  g.gap = std::min(std::abs(g.A_plus.x2), std::abs(g.A_minus.x2));
  return g;
}

TraceReport slit_traces(const ConeProfile& p, int samples, double tol) {
  TraceReport rep;
  rep.trace_min = 1e300;
  rep.d3_max_on_slit = -1e300;
  int slit_support = 0, slit_count = 0;
  const double scale = std::abs(p.a0) + std::abs(p.a1) + std::abs(p.a2) + std::abs(p.a3);
  for (int i = 0; i < samples; ++i) {
    // alpha = polar angle of (x1, x2); the slit half-circle is alpha in [-pi, 0]
    // intersected with {x2 <= 0}... the slit is {x2 <= 0, x3 = 0}: alpha in (-pi, 0).
    const double alpha = -kPi + 2.0 * kPi * (i + 0.5) / samples;
    const Point3 x{std::cos(alpha), std::sin(alpha), 0.0};
    const double tr = p.eval(x);
    rep.trace_min = std::min(rep.trace_min, tr);
    if (tr < -tol * scale && x.x2 > 0.0) ++rep.trace_violations;
    if (x.x2 < 0.0) {
      // on the slit: one-sided d3 from the x3 > 0 side (analytic limit)
      ++slit_count;
      if (tr < -tol * scale) ++rep.trace_violations;  // trace should be == 0 here
      const Point3 xe{x.x1, x.x2, 1e-300};  // theta -> pi^- limit
      const double d3 = p.grad(xe).d3;
      rep.slit_alpha.push_back(alpha);
      rep.slit_d3.push_back(d3);
      rep.d3_max_on_slit = std::max(rep.d3_max_on_slit, d3);
      if (d3 > tol * scale) ++rep.d3_violations;
      if (-2.0 * d3 > tol * scale) ++slit_support;
    }
  }
  rep.laplacian_support_fraction =
      slit_count > 0 ? static_cast<double>(slit_support) / slit_count : 0.0;
  return rep;
}

}  // namespace tof
