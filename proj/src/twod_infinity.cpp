#include "tof/twod_infinity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace tof {

namespace {

constexpr double kTiny = 1e-12;

// w-basis coordinates of the data (a0 = 1 normalization)
struct WData {
  double a1, a2, a3;
};
WData to_w(double a1, double a2, double a3) {
  return {a1 / kW52U, a2 / kW32U, a3 / kW12U};
}

// Taylor coefficients of U_{-tau}(u_{7/2} + alpha1 w_{5/2} + alpha2 w_{3/2})
// in the w-basis: entry k is the coefficient of w_{7/2 - k - 1}.
std::array<double, 5> translated_cone_w(double tau, double al1, double al2) {
  const double t2 = tau * tau, t3 = t2 * tau, t4 = t3 * tau, t5 = t4 * tau;
  return {al1 + tau,
          al2 + al1 * tau + t2 / 2.0,
          al2 * tau + al1 * t2 / 2.0 + t3 / 6.0,
          al2 * t2 / 2.0 + al1 * t3 / 6.0 + t4 / 24.0,
          al2 * t3 / 6.0 + al1 * t4 / 24.0 + t5 / 120.0};
}

bool admissible_2d_cone(double al1, double al2, double tol = kTiny) {
  return al2 >= -tol && al1 * al1 <= (12.0 / 5.0) * al2 + tol;
}

// Projection of (a, b) onto {al2 >= max(0, (5/12) al1^2)} in the Euclidean
// metric; the set is convex, the boundary piece is the parabola.
std::pair<double, double> project_cone_constraint(double a, double b) {
  if (b >= std::max(0.0, (5.0 / 12.0) * a * a)) return {a, b};
  auto dist2 = [&](double x) {
    const double y = (5.0 / 12.0) * x * x;
    return (x - a) * (x - a) + (y - b) * (y - b);
  };
  const double X = 2.0 * (std::abs(a) + 1.0) + 2.0 * std::sqrt(std::max(b, 0.0));
  double best_x = 0.0, best = dist2(0.0);
  const int N = 800;
  for (int k = -N; k <= N; ++k) {
    const double x = X * k / N;
    const double d = dist2(x);
    if (d < best) { best = d; best_x = x; }
  }
  // Newton polish on g'(x) = 2(x-a) + (5/6) x (5/12 x^2 - b) * 2
  double x = best_x;
  for (int it = 0; it < 40; ++it) {
    const double y = (5.0 / 12.0) * x * x;
    const double g1 = 2.0 * (x - a) + (5.0 / 3.0) * x * (y - b);
    const double g2 = 2.0 + (5.0 / 3.0) * (y - b) + (5.0 / 3.0) * x * (5.0 / 6.0) * x;
    if (std::abs(g2) < 1e-14) break;
    const double xn = x - g1 / g2;
    if (dist2(xn) <= dist2(x)) x = xn; else break;
  }
  if (dist2(x) > best) x = best_x;
  return {x, (5.0 / 12.0) * x * x};
}

// ---------------------------------------------------------------------------
// Fourier projections on circles
// ---------------------------------------------------------------------------

// (1/pi) int_{-pi}^{pi} g(rho, theta) cos((2k-1) theta/2) dtheta for an even
// integrand; trapezoid on [0, pi].
template <class G>
double circle_proj(const G& g, double rho, int k, int ntheta = 1024) {
  const double halffreq = (2.0 * k - 1.0) / 2.0;
  double acc = 0.0;
  for (int m = 0; m <= ntheta; ++m) {
    const double th = kPi * m / ntheta;
    const double w = (m == 0 || m == ntheta) ? 0.5 : 1.0;
    acc += w * g(rho, th) * std::cos(halffreq * th);
  }
  return acc * (kPi / ntheta) * 2.0 / kPi;
}

// u - p sampled as a node-wise difference field.  Interpolating u and
// subtracting the analytic p would add a bilinear-interpolation error of
// order h^2 |D^2 p| (~1e-2 at these radii), swamping the tail; interpolating
// the difference keeps that error proportional to the small quantity itself.
DiscreteField diff_field(const DiscreteField& f, double a1, double a2,
                         double a3) {
  DiscreteField d = f;
  const GridChart& c = f.chart;
  const int n = c.box_n(), nz = c.box_nz(), d1 = nz + 1;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= nz; ++j)
      d.values[static_cast<std::size_t>(i) * d1 + j] -=
          infinity_data(a1, a2, a3, -c.L + i * c.h, j * c.h);
  return d;
}

double proj_diff(const DiscreteField& df, double rho, int k) {
  return circle_proj(
      [&](double r, double th) {
        return chart_interp(df, r * std::cos(th), r * std::sin(th));
      },
      rho, k);
}

// Solve the 2x2 system F(rho_i) = b rho_i^{e1} + c rho_i^{e2}.
std::pair<double, double> two_radius_fit(double F1v, double F2v, double r1,
                                         double r2, double e1, double e2) {
  const double m11 = std::pow(r1, e1), m12 = std::pow(r1, e2);
  const double m21 = std::pow(r2, e1), m22 = std::pow(r2, e2);
  const double det = m11 * m22 - m12 * m21;
  return {(F1v * m22 - m12 * F2v) / det, (m11 * F2v - F1v * m21) / det};
}

// Solve the 3x3 system F(rho_i) = b rho_i^{e0} + c rho_i^{e1} + d rho_i^{e2};
// returns b.
double three_radius_fit(const double F[3], const double r[3], double e0,
                        double e1, double e2) {
  double M[3][4];
  for (int i = 0; i < 3; ++i) {
    M[i][0] = std::pow(r[i], e0);
    M[i][1] = std::pow(r[i], e1);
    M[i][2] = std::pow(r[i], e2);
    M[i][3] = F[i];
  }
  for (int c = 0; c < 3; ++c) {
    int p = c;
    for (int rr = c + 1; rr < 3; ++rr)
      if (std::abs(M[rr][c]) > std::abs(M[p][c])) p = rr;
    for (int cc = 0; cc < 4; ++cc) std::swap(M[c][cc], M[p][cc]);
    for (int rr = c + 1; rr < 3; ++rr) {
      const double f = M[rr][c] / M[c][c];
      for (int cc = c; cc < 4; ++cc) M[rr][cc] -= f * M[c][cc];
    }
  }
  double x[3];
  for (int rr = 2; rr >= 0; --rr) {
    double s = M[rr][3];
    for (int cc = rr + 1; cc < 3; ++cc) s -= M[rr][cc] * x[cc];
    x[rr] = s / M[rr][rr];
  }
  return x[0];
}

}  // namespace

// ---------------------------------------------------------------------------
// data / barrier
// ---------------------------------------------------------------------------

double infinity_data(double a1, double a2, double a3, double x1, double x2) {
  return mode2(3.5, x1, x2) + a1 * mode2(2.5, x1, x2) +
         a2 * mode2(1.5, x1, x2) + a3 * mode2(0.5, x1, x2);
}

double infinity_tail(double b1, double b2, double x1, double x2) {
  return b1 * mode2(-0.5, x1, x2) + b2 * mode2(-1.5, x1, x2);
}

bool cond_2d(double a1, double a2, double a3, double tol) {
  return a2 >= -tol && std::abs(a3) <= tol &&
         a1 * a1 <= (84.0 / 25.0) * a2 + tol;
}

double BarrierInfo::eval_Q(double x1, double x2) const {
  // U_{-tau}(q)(x) = q(x1 + tau, x2)
  const double y1 = x1 + tau;
  return mode2(3.5, y1, x2) + alpha1 * kW52U * mode2(2.5, y1, x2) +
         alpha2 * kW32U * mode2(1.5, y1, x2);
}

BarrierInfo barrier_estimate(double a1, double a2, double a3) {
  const WData at = to_w(a1, a2, a3);
  BarrierInfo best;
  bool found = false;

  // radius at which the slit-trace cubic t^3 + a1 t^2 + a2 t + a3 is last
  // nonpositive (potential contact off the slit lives inside this radius)
  double A_pos = 0.0;
  for (int k = 0; k <= 400; ++k) {
    const double t = 0.05 * std::pow(1.03, k);
    if (t > 200.0) break;
    if (t * t * t + a1 * t * t + a2 * t + a3 <= 0.0) A_pos = t;
  }

  for (double tau = 0.5; tau <= 8.0 + kTiny; tau += 0.25) {
    const double al1 = at.a1 - tau;
    const double al2 = at.a2 - al1 * tau - tau * tau / 2.0;
    if (!admissible_2d_cone(al1, al2, 1e-10)) continue;
    const auto w = translated_cone_w(tau, al1, al2);
    const double c3 = w[2] - at.a3;  // growth coefficient of Q - p
    // Q - p must be eventually nonnegative: either the w_{1/2} growth term
    // is positive, or it vanishes and the positive-multiple w_{-1/2} tail
    // takes over.
    if (!(c3 > 1e-10 || (c3 > -1e-10 && w[3] > 1e-10))) continue;

    BarrierInfo cand;
    cand.tau = tau;
    cand.alpha1 = al1;
    cand.alpha2 = al2;
    cand.a1 = a1;
    cand.a2 = a2;
    cand.a3 = a3;

    // positivity radius of Q - p: geometric scan of circle minima
    double A_scan = 0.25;
    bool ok = true;
    const int nth = 256;
    double r = 0.25;
    while (r <= 4096.0) {
      double mn = std::numeric_limits<double>::infinity();
      for (int m = 0; m <= nth; ++m) {
        const double th = kPi * m / nth;
        const double x = r * std::cos(th), y = r * std::sin(th);
        mn = std::min(mn, cand.eval_Q(x, y) -
                              infinity_data(a1, a2, a3, x, y));
      }
      if (mn < -1e-10 * std::max(1.0, std::pow(r, 3.5))) {
        A_scan = r * 1.1;
        if (r > 2000.0) { ok = false; break; }
      }
      r *= 1.1;
    }
    if (!ok) continue;
    cand.A_radius = std::max({A_scan, A_pos, 0.5});

    // realized sup bound: max of (Q - p)_+ inside the localization disk
    double sup = 0.0;
    for (int ir = 1; ir <= 48; ++ir) {
      const double rr = cand.A_radius * ir / 48.0;
      for (int m = 0; m <= 96; ++m) {
        const double th = kPi * m / 96.0;
        const double x = rr * std::cos(th), y = rr * std::sin(th);
        sup = std::max(sup, cand.eval_Q(x, y) -
                                infinity_data(a1, a2, a3, x, y));
      }
    }
    cand.sup_bound = sup;

    if (!found || cand.A_radius < best.A_radius - 1e-9 ||
        (std::abs(cand.A_radius - best.A_radius) <= 1e-9 &&
         cand.sup_bound < best.sup_bound)) {
      best = cand;
      found = true;
    }
  }
  if (!found) {
    std::ostringstream os;
    os << "barrier_estimate: no admissible translated cone found for data ("
       << a1 << ", " << a2 << ", " << a3 << "); data too large";
    throw std::runtime_error(os.str());
  }
  return best;
}

// ---------------------------------------------------------------------------
// truncated solve
// ---------------------------------------------------------------------------

double InfinityProblem::u(double x1, double x2) const {
  return chart_interp(solution.field, x1, std::abs(x2));
}

namespace {

GridChart disk_chart(double R, double h) {
  GridChart c;
  c.kind = ChartKind::box2_half;
  c.L = R;
  c.h = h;
  c.disk_radius = R;
  return c;
}

// Nested iteration: solve on grids h * 2^k (coarsest n ~ 64) down to h, each
// level warm-started from the previous one.  When `keep_2h` is non-null the
// level-2h solve is run at full tolerance and stored there.
VISolution cascade_solve(double R, double h, const Fn2& bc,
                         const SolverOpts& sopts,
                         VISolution* keep_2h = nullptr) {
  std::vector<double> levels{h};
  while (levels.size() < 2 || 2.0 * R / (levels.back() * 2.0) >= 63.0)
    levels.push_back(levels.back() * 2.0);
  VISolution sol;
  bool have = false;
  for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
    const GridChart c = disk_chart(R, *it);
    const bool full = (*it == h) || (keep_2h != nullptr && *it == 2.0 * h);
    SolverOpts lo = sopts;
    if (!full) lo.tol = std::max(sopts.tol, 1e-2 * (*it) * (*it));
    sol = have ? solve_signorini_box2(c, bc, sol.field, lo)
               : solve_signorini_box2(c, bc, lo);
    have = true;
    if (keep_2h != nullptr && *it == 2.0 * h) *keep_2h = sol;
  }
  return sol;
}

// Tail read off one resolution level with the spec'd decaying-mode 2x2.
TailCoeffs extract_level(const DiscreteField& df, double rho1, double rho2) {
  const double F11 = proj_diff(df, rho1, 1), F12 = proj_diff(df, rho2, 1);
  const double F31 = proj_diff(df, rho1, 2), F32 = proj_diff(df, rho2, 2);
  TailCoeffs out;
  const auto [b1, c1] = two_radius_fit(F11, F12, rho1, rho2, -0.5, -2.5);
  const auto [b2, c2] = two_radius_fit(F31, F32, rho1, rho2, -1.5, -3.5);
  out.b1 = b1;
  out.b2 = b2;
  out.error_order = std::abs(c1) * std::pow(rho2, -2.5) +
                    std::abs(c2) * std::pow(rho2, -3.5);
  return out;
}

// Growing-mode-aware tail estimate from a plain bc = p solve: the truncation
// error behaves like rho^{+1/2} (rho^{+3/2}) in the two projections, so the
// fit carries the growing exponent alongside the wanted and next decaying one.
std::pair<double, double> boot_estimate(const DiscreteField& df, double R) {
  const double r[3] = {0.30 * R, 0.45 * R, 0.65 * R};
  double F[3], G[3];
  for (int i = 0; i < 3; ++i) {
    F[i] = proj_diff(df, r[i], 1);
    G[i] = proj_diff(df, r[i], 2);
  }
  return {three_radius_fit(F, r, -0.5, -2.5, 0.5),
          three_radius_fit(G, r, -1.5, -3.5, 1.5)};
}

}  // namespace

InfinityProblem solve_at_infinity(double a1, double a2, double a3, double R,
                                  const InfinityOpts& opts) {
  InfinityProblem prob;
  prob.a1 = a1;
  prob.a2 = a2;
  prob.a3 = a3;
  prob.R = R;
  prob.h = opts.h;
  prob.barrier = barrier_estimate(a1, a2, a3);
  if (R < 4.0 * prob.barrier.A_radius - 1e-9) {
    std::ostringstream os;
    os << "solve_at_infinity: R too small (R = " << R
       << ", need R >= 4 * A_est = " << 4.0 * prob.barrier.A_radius << ")";
    throw std::invalid_argument(os.str());
  }

  auto p_fn = [a1, a2, a3](double x, double y) {
    return infinity_data(a1, a2, a3, x, y);
  };
  auto bc_with = [&](double b1, double b2) -> Fn2 {
    return [a1, a2, a3, b1, b2](double x, double y) {
      return infinity_data(a1, a2, a3, x, y) + infinity_tail(b1, b2, x, y);
    };
  };

  // Pass 1: plain data p, cascaded down to h with the 2h level kept.  The
  // truncated solve with bc = p carries the true decaying tail plus a
  // truncation-induced growing mode (the interior nonlinearity pins the
  // decaying coefficients; the mismatch -b.tail on |x| = R excites
  // rho^{+1/2}, rho^{+3/2}), so a growing-mode-aware fit reads off the true
  // b.  The dominant pollution of the fit is the O(h^2) discretization
  // error, which Richardson extrapolation across the two levels removes.
  VISolution pass1_2h;
  VISolution pass1_h = cascade_solve(R, opts.h, p_fn, opts.solver, &pass1_2h);
  {
    const auto [bf1, bf2] =
        boot_estimate(diff_field(pass1_h.field, a1, a2, a3), R);
    const auto [bc1, bc2] =
        boot_estimate(diff_field(pass1_2h.field, a1, a2, a3), R);
    prob.boot_b1 = (4.0 * bf1 - bc1) / 3.0;
    prob.boot_b2 = (4.0 * bf2 - bc2) / 3.0;
  }

  // Pass 2: re-solve with the estimated tail in the outer data (both levels,
  // warm-started).  With the tail on the boundary the growing mode is gone
  // and the decaying-mode extraction below is uncontaminated.
  const Fn2 bc2fn = bc_with(prob.boot_b1, prob.boot_b2);
  prob.solution = solve_signorini_box2(disk_chart(R, opts.h), bc2fn,
                                       pass1_h.field, opts.solver);
  prob.solution_coarse = solve_signorini_box2(disk_chart(R, 2.0 * opts.h),
                                              bc2fn, pass1_2h.field,
                                              opts.solver);

  if (opts.cross_validate) {
    InfinityProblem big;
    big.a1 = a1; big.a2 = a2; big.a3 = a3;
    big.R = 2.0 * R;
    big.h = 2.0 * opts.h;
    big.solution = cascade_solve(2.0 * R, 2.0 * opts.h,
                                 bc_with(prob.boot_b1, prob.boot_b2),
                                 opts.solver);
    double diff = 0.0;
    for (int ir = 1; ir <= 24; ++ir) {
      const double rr = 0.5 * R * ir / 24.0;
      for (int m = 0; m <= 48; ++m) {
        const double th = kPi * m / 48.0;
        const double x = rr * std::cos(th), y = rr * std::sin(th);
        diff = std::max(diff, std::abs(prob.u(x, y) - big.u(x, y)));
      }
    }
    prob.cross_diff = diff;
    const double tol =
        (1.0 + std::abs(a1) + std::abs(a2) + std::abs(a3)) / std::sqrt(R);
    if (diff > tol) {
      std::ostringstream os;
      os << "solve_at_infinity: R too small (cross-validation against the "
            "doubled domain differs by "
         << diff << " > " << tol << " on B_{R/2})";
      throw std::runtime_error(os.str());
    }
  }
  return prob;
}

TailCoeffs extract_tail(const InfinityProblem& prob, double rho1, double rho2) {
  const double R = prob.R;
  if (rho1 <= 0.0) rho1 = 0.30 * R;
  if (rho2 <= 0.0) rho2 = 0.45 * R;
  if (!(rho1 < rho2))
    throw std::invalid_argument("extract_tail: need rho1 < rho2");
  if (rho2 >= 0.5 * R + 1e-9)
    throw std::invalid_argument(
        "extract_tail: radii too close to the truncation radius (need rho2 < R/2)");
  if (rho1 <= prob.barrier.A_radius)
    throw std::invalid_argument(
        "extract_tail: rho1 inside the localization radius A_est");
  const TailCoeffs fine = extract_level(
      diff_field(prob.solution.field, prob.a1, prob.a2, prob.a3), rho1, rho2);
  if (prob.solution_coarse.field.values.empty()) return fine;
  const TailCoeffs coarse = extract_level(
      diff_field(prob.solution_coarse.field, prob.a1, prob.a2, prob.a3), rho1,
      rho2);
  TailCoeffs out;
  out.b1 = (4.0 * fine.b1 - coarse.b1) / 3.0;
  out.b2 = (4.0 * fine.b2 - coarse.b2) / 3.0;
  out.error_order = fine.error_order +
                    (std::abs(fine.b1 - coarse.b1) +
                     std::abs(fine.b2 - coarse.b2)) / 3.0;
  return out;
}

std::pair<double, double> fourier_vanish_check(const InfinityProblem& prob,
                                               double rho,
                                               const TailCoeffs& tail) {
  if (!(rho > prob.barrier.A_radius && rho < 0.5 * prob.R))
    throw std::invalid_argument(
        "fourier_vanish_check: need A_est < rho < R/2");
  // d theta measure: int_{-pi}^{pi} [u - p - tail] cos((2k-1) theta/2) dtheta.
  // The tail term integrates exactly (orthogonality): pi b_k rho^{-(2k-1)/2}.
  const DiscreteField df =
      diff_field(prob.solution.field, prob.a1, prob.a2, prob.a3);
  const double I1 =
      kPi * (proj_diff(df, rho, 1) - tail.b1 * std::pow(rho, -0.5));
  const double I2 =
      kPi * (proj_diff(df, rho, 2) - tail.b2 * std::pow(rho, -1.5));
  return {I1, I2};
}

std::pair<double, double> fourier_vanish_check(const InfinityProblem& prob,
                                               double rho) {
  return fourier_vanish_check(prob, rho, extract_tail(prob));
}

// ---------------------------------------------------------------------------
// edge polynomial
// ---------------------------------------------------------------------------

EdgePolyFit edge_polynomial(const InfinityProblem& prob) {
  const GridChart& c = prob.solution.field.chart;
  const int n = c.box_n(), nz = c.box_nz(), d1 = nz + 1;
  const double h = c.h, R = prob.R;
  const auto& u = prob.solution.field.values;
  const auto& mask = prob.solution.contact_mask;

  EdgePolyFit fit;
  for (int i = 1; i < n; ++i) {
    const double x = -c.L + i * h;
    if (std::abs(x) > 0.5 * R) continue;
    // exclude the h-neighborhood of the contact set
    bool near_contact = false;
    for (int di = -2; di <= 2; ++di) {
      const int ii = i + di;
      if (ii >= 0 && ii <= n && mask[ii] &&
          std::abs(di) * h <= 1.5 * h) near_contact = true;
    }
    if (near_contact) continue;
    const std::size_t idx = static_cast<std::size_t>(i) * d1;
    const double d1u = (u[idx + d1] - u[idx - d1]) / (2.0 * h);
    // one-sided second-order derivative into the upper half plane
    const double d2u = (-3.0 * u[idx] + 4.0 * u[idx + 1] - u[idx + 2]) / (2.0 * h);
    fit.t.push_back(x);
    fit.P.push_back(d1u * d1u - d2u * d2u);
  }
  if (fit.t.size() < 12)
    throw std::runtime_error("edge_polynomial: too few off-contact samples");

  // degree-5 least squares, columns scaled by (R/2)^k for conditioning
  const double S = 0.5 * R;
  Eigen::MatrixXd M(fit.t.size(), 6);
  Eigen::VectorXd rhs(fit.t.size());
  for (std::size_t r = 0; r < fit.t.size(); ++r) {
    double pw = 1.0;
    for (int k = 0; k <= 5; ++k) {
      M(static_cast<Eigen::Index>(r), k) = pw;
      pw *= fit.t[r] / S;
    }
    rhs(static_cast<Eigen::Index>(r)) = fit.P[r];
  }
  const Eigen::VectorXd sol = M.colPivHouseholderQr().solve(rhs);
  double scale = 1.0;
  for (int k = 0; k <= 5; ++k) {
    fit.coeffs[static_cast<std::size_t>(k)] = sol(k) / scale;
    scale *= S;
  }
  double res = 0.0;
  for (std::size_t r = 0; r < fit.t.size(); ++r) {
    double v = 0.0, pw = 1.0;
    for (int k = 0; k <= 5; ++k) { v += fit.coeffs[static_cast<std::size_t>(k)] * pw; pw *= fit.t[r]; }
    res = std::max(res, std::abs(v - fit.P[r]));
  }
  fit.residual = res;
  return fit;
}

// ---------------------------------------------------------------------------
// contact components / symmetry reduction
// ---------------------------------------------------------------------------

ContactComponents contact_components(const InfinityProblem& prob) {
  const GridChart& c = prob.solution.field.chart;
  const int n = c.box_n();
  const double h = c.h, R = prob.R;
  const auto& mask = prob.solution.contact_mask;

  ContactComponents out;
  int first_free = -1, last_free = -1;
  bool in_run = false;
  double run_start = 0.0, run_end = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = -c.L + i * h;
    const bool free_node = (x * x < R * R - 1e-12) && i > 0 && i < n;
    if (free_node && first_free < 0) first_free = i;
    if (free_node) last_free = i;
    const bool contact = free_node && mask[i];
    if (contact && !in_run) { in_run = true; run_start = x; }
    if (contact) run_end = x;
    if (!contact && in_run) {
      in_run = false;
      out.intervals.emplace_back(run_start, run_end);
    }
  }
  if (in_run) out.intervals.emplace_back(run_start, run_end);
  (void)last_free;
  const double left_edge = -c.L + first_free * h;
  int reaching = 0;
  for (const auto& iv : out.intervals)
    if (iv.first <= left_edge + 0.5 * h) ++reaching;
  out.half_space = (out.intervals.size() == 1 && reaching == 1);
  return out;
}

SymmetryReduction symmetry_reduce(double a1, double a2, double a3,
                                  const TailCoeffs& b_plus,
                                  const TailCoeffs& b_minus) {
  const WData at = to_w(a1, a2, a3);
  const double bt1 = b_plus.b1 / kWm12U;   // w-basis tail of the + side
  const double bt2 = b_plus.b2 / kWm32U;

  auto residual_at = [&](double tau, double* out_al1 = nullptr,
                         double* out_al2 = nullptr) {
    double al1 = at.a1 - tau;
    double al2 = at.a2 - al1 * tau - tau * tau / 2.0;
    std::tie(al1, al2) = project_cone_constraint(al1, al2);
    const auto w = translated_cone_w(tau, al1, al2);
    const double r[5] = {at.a1 - w[0], at.a2 - w[1], at.a3 - w[2],
                         bt1 - w[3], bt2 - w[4]};
    double s = 0.0;
    for (double v : r) s += v * v;
    if (out_al1) *out_al1 = al1;
    if (out_al2) *out_al2 = al2;
    return std::sqrt(s);
  };

  double best_tau = 0.0, best = std::numeric_limits<double>::infinity();
  const int N = 3200;
  for (int k = -N; k <= N; ++k) {
    const double tau = 8.0 * k / N;
    const double r = residual_at(tau);
    if (r < best) { best = r; best_tau = tau; }
  }
  // golden-section refinement around the grid optimum
  double lo = best_tau - 8.0 / N, hi = best_tau + 8.0 / N;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = residual_at(x1), f2 = residual_at(x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      hi = x2; x2 = x1; f2 = f1;
      x1 = hi - gr * (hi - lo); f1 = residual_at(x1);
    } else {
      lo = x1; x1 = x2; f1 = f2;
      x2 = lo + gr * (hi - lo); f2 = residual_at(x2);
    }
  }
  best_tau = 0.5 * (lo + hi);

  SymmetryReduction out;
  out.tau = best_tau;
  out.residual = residual_at(best_tau, &out.alpha1, &out.alpha2);
  out.defect = std::abs(b_plus.b1 - b_minus.b1) +
               std::abs(b_plus.b2 + b_minus.b2);
  return out;
}

}  // namespace tof
