#pragma once
// ============================================================================
// The thin obstacle problem in R^2 with prescribed half-integer expansion at
// infinity.
//
// Data at infinity: p = u_{7/2} + a1 u_{5/2} + a2 u_{3/2} + a3 u_{1/2} in the
// (r, theta) polar coordinates of (x1, x2), slit = the negative x1-axis.  The
// derivative basis w_{7/2-k} = d^k/dx1^k u_{7/2} satisfies
//   w_{5/2} = (7/2) u_{5/2},   w_{3/2} = (35/4) u_{3/2},
//   w_{1/2} = (105/8) u_{1/2}, w_{-1/2} = (105/16) u_{-1/2},
//   w_{-3/2} = -(105/32) u_{-3/2}.
//
// The solver realizes the barrier construction concretely: a translated cone
// Q = U_{-tau}(u_{7/2} + alpha1 w_{5/2} + alpha2 w_{3/2}) with (alpha1,
// alpha2) solving the first two Taylor equations, tau chosen so that
// (alpha1, alpha2) is an admissible 2D cone (alpha2 >= 0, alpha1^2 <=
// (12/5) alpha2) and Q >= p outside a computed radius A.  The truncated
// problem is solved on the disk of radius R >= 4A with an outer-data
// bootstrap: first solves with data p at mesh sizes 2h and h, a tail estimate
// from the Fourier projections that eliminates the truncation-induced growing
// mode (combined with h-extrapolation, since the discretization error is the
// dominant pollution of the projections), then re-solves with data
// p + b1 u_{-1/2} + b2 u_{-3/2}.  With the tail on the boundary the growing
// mode is absent and the decaying-mode extraction is clean.
// ============================================================================

#include <array>
#include <utility>
#include <vector>

#include "tof/vi_solver.hpp"

namespace tof {

// u-basis <-> w-basis conversion factors (frozen; see header comment)
inline constexpr double kW52U = 7.0 / 2.0;
inline constexpr double kW32U = 35.0 / 4.0;
inline constexpr double kW12U = 105.0 / 8.0;
inline constexpr double kWm12U = 105.0 / 16.0;
inline constexpr double kWm32U = -105.0 / 32.0;

// p = u_{7/2} + a1 u_{5/2} + a2 u_{3/2} + a3 u_{1/2} at (x1, x2)
double infinity_data(double a1, double a2, double a3, double x1, double x2);
// b1 u_{-1/2} + b2 u_{-3/2}
double infinity_tail(double b1, double b2, double x1, double x2);
// whether p itself solves the 2D thin obstacle problem:
// a2 >= 0, a3 = 0, a1^2 <= (84/25) a2
bool cond_2d(double a1, double a2, double a3, double tol = 1e-12);

struct BarrierInfo {
  double tau = 0.0, alpha1 = 0.0, alpha2 = 0.0;  // w-basis barrier cone
  double A_radius = 1.0;  // realized localization radius "A"
  double sup_bound = 0.0;  // realized sup bound for |u - p| (max of Q - p)
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;  // the data (u-basis), for eval
  // the barrier Q = U_{-tau}(q) evaluated at (x1, x2)
  double eval_Q(double x1, double x2) const;
};

// Implements the barrier construction; throws std::runtime_error when no
// admissible (tau, A) is found in the search range.
BarrierInfo barrier_estimate(double a1, double a2, double a3);

struct InfinityOpts {
  double h = 1.0 / 32;
  bool cross_validate = true;
  // The stopping tolerance is in update units; the disk solves carry values
  // up to R^{7/2}, and the slowest (whole-disk) error mode is amplified by
  // ~(R/h)^2 relative to the residual, so the default is tighter than the
  // generic solver default.
  SolverOpts solver{.tol = 1e-9};
};

struct InfinityProblem {
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  double R = 0.0, h = 0.0;
  BarrierInfo barrier;         // barrier.A_radius is the A_est of record
  VISolution solution;         // final solve on the disk of radius R
  VISolution solution_coarse;  // same problem at 2h (for h-extrapolation)
  double boot_b1 = 0.0, boot_b2 = 0.0;  // outer tail used by the final solve
  double cross_diff = 0.0;     // sup |u_R - u_2R| on B_{R/2} (if validated)

  double p(double x1, double x2) const {
    return infinity_data(a1, a2, a3, x1, x2);
  }
  double u(double x1, double x2) const;  // bilinear interpolation, even in x2
};

// Solves the truncated problem on B_R.  Requires |a_j| small (the barrier
// search must succeed) and R >= 4 * A_est; cross-validation against the
// (2R, 2h) solve on B_{R/2} throws when the truncation error is too large.
InfinityProblem solve_at_infinity(double a1, double a2, double a3, double R,
                                  const InfinityOpts& opts = {});

struct TailCoeffs {
  double b1 = 0.0, b2 = 0.0;  // u-basis coefficients of u_{-1/2}, u_{-3/2}
  double error_order = 0.0;   // magnitude of the eliminated next-order terms
};

// Fourier projections of (u - p) against cos(theta/2), cos(3 theta/2) at two
// radii rho1 < rho2 < R/2 (defaults 0.3 R and 0.45 R), solving the 2x2
// systems that eliminate the O(rho^{-5/2}) / O(rho^{-7/2}) next-order terms.
// The fit is evaluated on both stored resolutions (h and 2h) and Richardson
// extrapolated; the difference between the two levels feeds error_order.
TailCoeffs extract_tail(const InfinityProblem& prob, double rho1 = 0.0,
                        double rho2 = 0.0);

// The two Cor-type vanishing integrals (d theta measure)
//   I_k = int_{-pi}^{pi} [u - (p + b1 u_{-1/2} + b2 u_{-3/2})](rho, theta)
//         cos((2k-1) theta / 2) d theta,  k = 1, 2.
std::pair<double, double> fourier_vanish_check(const InfinityProblem& prob,
                                               double rho,
                                               const TailCoeffs& tail);
// Convenience overload: uses extract_tail with default radii.
std::pair<double, double> fourier_vanish_check(const InfinityProblem& prob,
                                               double rho);

struct EdgePolyFit {
  std::array<double, 6> coeffs{};  // ascending; coeffs[5] ~ 49/4 for u_{7/2}
  double residual = 0.0;           // sup |P(t) - fit(t)| over the samples
  std::vector<double> t;           // sample locations used
  std::vector<double> P;           // P(t) = (d1 u)^2 - (d2 u)^2 at (t, 0)
};

// Least-squares degree-5 fit of P(t) on |t| <= R/2 off an h-neighborhood of
// the contact set; gradients are one-sided with respect to the slit.
EdgePolyFit edge_polynomial(const InfinityProblem& prob);

struct ContactComponents {
  std::vector<std::pair<double, double>> intervals;  // [x_left, x_right]
  bool half_space = false;  // one component and it reaches the truncation
};

ContactComponents contact_components(const InfinityProblem& prob);

struct SymmetryReduction {
  double alpha1 = 0.0, alpha2 = 0.0, tau = 0.0;  // w-basis, constrained
  double residual = 0.0;  // l2 residual of the five reduction equations
  double defect = 0.0;    // |b1+ - b1-| + |b2+ + b2-|
};

// Constrained least squares for the symmetry reduction: tau scanned on a 1D
// grid with golden-section refinement, (alpha1, alpha2) from the first two
// equations projected onto {alpha2 >= 0, alpha1^2 <= (12/5) alpha2}.
SymmetryReduction symmetry_reduce(double a1, double a2, double a3,
                                  const TailCoeffs& b_plus,
                                  const TailCoeffs& b_minus);

}  // namespace tof
