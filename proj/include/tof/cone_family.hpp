#pragma once
// ============================================================================
// The half-space cone family F1 and its parameter region.
//
// Profiles: p = a0 u72 + a1 eps v52 + a2 eps^2 v32 + a3 eps^3 v12, optionally
// rotated in the (x1,x2)-plane by tau.  The admissible region for (a1, a2)
// (a0 = 1, a3 = 0) is
//
//   A = { 0 <= a2 <= 5,  a1^2 <= Gamma(a2) },
//   Gamma(a2) = min{ 4 a2 (1 - a2/5),  (24/25) a2 (7/2 - (3/10) a2) },
//
// which coincides with the intersection of the two ellipses
//
//   E1: a1^2/5        + (a2 - 5/2)^2 / (25/4)   <= 1
//   E2: a1^2/(49/5)   + (a2 - 35/6)^2 / (35/6)^2 <= 1,
//
// whose boundaries meet at (0,0) and (+-sqrt(15)/2, 5/4).  Both descriptions
// are implemented (exactly, in rational arithmetic) and cross-checked.
//
// On the boundary piece a1^2 = Gamma(a2) the profile degenerates along a ray:
//   R+ = t (1, -5 a1 / (14 - (6/5) a2), 0),  t >= 0   (normal derivative
//        vanishes along R+ when a2 <= 5/4)
//   R- = t (-1, a1 / (2 - (2/5) a2), 0),     t >= 0   (profile vanishes along
//        R- when a2 >= 5/4; for a2 = 5 the ray is {(0, s, 0): s >= 0})
// The "doubly critical" profile p_dc = (1, sqrt(15)/2, 5/4, 0) has both.
// ============================================================================

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tof/named.hpp"
#include "tof/rational.hpp"

namespace tof {

double gamma_fn(double a2);
Rational gamma_exact(const Rational& a2);

enum class Membership { interior, boundary_E1, boundary_E2, boundary_both, outside };
enum class Subregion { A1, A2, A3, none };

struct RegionTag {
  Membership membership = Membership::outside;
  Subregion subregion = Subregion::none;
  bool also_A3 = false;  // overlap band: an A1/A2 point with a2 <= 2 mu
};

// Exact classification against both ellipses.
RegionTag region_membership(const Rational& a1, const Rational& a2);
// Same, with a1^2 supplied directly (both curves depend on a1 only through
// its square, so boundary points with irrational a1 stay exactly testable).
RegionTag region_membership_sq(const Rational& a1_sq, const Rational& a2);
RegionTag region_membership(double a1, double a2, double tol = 1e-9);

// Subregion split at parameter mu (A1/A2 require a2 >= mu; A3 is a2 <= 2 mu).
// Throws std::domain_error outside A.
RegionTag classify_subregion(const Rational& a1, const Rational& a2, const Rational& mu);

struct ConeProfile {
  double a0 = 1.0, a1 = 0.0, a2 = 0.0, a3 = 0.0;
  double eps = 1.0;
  double rot = 0.0;

  // Effective (eps-folded) coefficients of (u72, v52, v32, v12).
  std::array<double, 4> effective() const {
    return {a0, a1 * eps, a2 * eps * eps, a3 * eps * eps * eps};
  }

  SlitSum to_function_unrotated() const {
    const auto c = effective();
    SlitSum s;
    s.add(c[0], named::u72());
    if (c[1] != 0.0) s.add(c[1], named::v52());
    if (c[2] != 0.0) s.add(c[2], named::v32());
    if (c[3] != 0.0) s.add(c[3], named::v12());
    return s;
  }

  double eval(const Point3& p) const {
    return to_function_unrotated().eval(rot == 0.0 ? p : rotate_xy(p, -rot));
  }
  Gradient3 grad(const Point3& p) const;

  std::string json() const;
};

inline ConeProfile p_dc() { return {1.0, std::sqrt(15.0) / 2.0, 1.25, 0.0, 1.0, 0.0}; }

// max{ |a1/a0|, |a2/a0|^{1/2}, |a3/a0|^{1/3} } of the eps-folded coefficients.
double eps_p(const ConeProfile& p);

enum class AdmissKind { solves_everywhere, solves_outside_cone, not_solution };
struct Admissibility {
  AdmissKind kind = AdmissKind::not_solution;
  int side = 0;          // +1: exceptional cone near {r=0, x1>0}
  double opening = 0.0;  // O(a1 eps / a0) opening estimate for the one-sided case
  bool tight_E1 = false, tight_E2 = false;
};
Admissibility is_admissible(const ConeProfile& p, double tol = 1e-12);

struct DegeneracyGeometry {
  Point3 ray_plus, ray_minus;  // unit directions in {x3 = 0}
  Point3 A_plus, A_minus;      // the rays' intersections with S2
  double gap = 0.0;            // min distance of A_+- to the axis {r = 0}
};
DegeneracyGeometry degeneracy_geometry(const ConeProfile& p);

struct TraceReport {
  double trace_min = 0.0;        // min of p over {x3=0} unit-circle samples
  double d3_max_on_slit = 0.0;   // max one-sided normal derivative on the slit
  int trace_violations = 0;      // trace < -tol off the slit
  int d3_violations = 0;         // d3 > +tol on the slit
  double laplacian_support_fraction = 0.0;  // fraction of slit with -2 d3 > tol
  std::vector<double> slit_alpha;           // sample angles on the slit half-circle
  std::vector<double> slit_d3;
};
TraceReport slit_traces(const ConeProfile& p, int samples = 2000, double tol = 1e-10);

}  // namespace tof
