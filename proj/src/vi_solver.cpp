#include "tof/vi_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tof {

namespace {

constexpr double kContactEps = 1e-14;

// node classes for box charts
enum : std::uint8_t { kDirichlet = 0, kInterior = 1, kThin = 2 };

double auto_omega(const SolverOpts& o, int nmax) {
  double w = o.omega;
  if (w == 0.0) w = 2.0 / (1.0 + std::sin(kPi / std::max(3, nmax)));
  // The upper clamp must track the grid size: capping omega well below the
  // Young-optimal value makes SOR asymptotically as slow as Gauss-Seidel on
  // large grids (the truncated-disk solves use n ~ 2000).
  return std::clamp(w, 1.0, 1.998);
}

// Shared outer SOR loop.  `sweep(omega)` performs one lexicographic sweep and
// returns the max projected Gauss-Seidel increment; `resid()` recomputes the
// residual record from scratch.  Residuals are re-checked every `check_every`
// sweeps; three consecutive non-improving checks drop omega back to 1.
template <class Sweep, class Resid>
void sor_loop(double omega0, const SolverOpts& o, Sweep&& sweep, Resid&& resid,
              VISolution& sol) {
  double omega = omega0;
  double prev = std::numeric_limits<double>::infinity();
  int stall = 0;
  long it = 0;
  bool conv = false;
  while (it < o.max_sweeps) {
    for (int s = 0; s < o.check_every && it < o.max_sweeps; ++s, ++it)
      sweep(omega);
    const KKTResiduals r = resid();
    sol.residuals = r;
    const double m = r.max_abs();
    if (m <= o.tol) {
      conv = true;
      break;
    }
    if (m >= 0.999 * prev) {
      if (++stall >= 3 && omega > 1.0) {
        omega = 1.0;
        stall = 0;
      }
    } else {
      stall = 0;
    }
    prev = m;
  }
  sol.iterations = it;
  sol.final_omega = omega;
  sol.converged = conv;
  if (!conv && !o.allow_nonconverged)
    throw SolverError("projected SOR did not converge within max_sweeps "
                      "(residual " + std::to_string(sol.residuals.max_abs()) + ")",
                      sol.residuals);
}

void accumulate_thin(KKTResiduals& r, double u, double d, bool obstacle) {
  if (obstacle) {
    r.obstacle = std::max(r.obstacle, -u);
    if (u > kContactEps) {
      r.harmonic = std::max(r.harmonic, std::abs(d));
    } else {
      r.conormal = std::max(r.conormal, std::max(0.0, d));
    }
    r.complementarity = std::max(r.complementarity, std::abs(u * d));
  } else {
    r.harmonic = std::max(r.harmonic, std::abs(d));
  }
}

// ---------------------------------------------------------------------------
// box2_half (optionally disk-masked); also hosts the eps = 0 rescaled solver
// ---------------------------------------------------------------------------

std::vector<std::uint8_t> box2_classes(const GridChart& c) {
  const int n = c.box_n(), nz = c.box_nz(), d1 = nz + 1;
  std::vector<std::uint8_t> cls(static_cast<std::size_t>(n + 1) * d1);
  const double R2 = c.disk_radius * c.disk_radius;
  for (int i = 0; i <= n; ++i) {
    const double x = -c.L + i * c.h;
    for (int j = 0; j <= nz; ++j) {
      const double y = j * c.h;
      bool dir = (i == 0 || i == n || j == nz);
      if (c.disk_radius > 0.0 && x * x + y * y >= R2 - 1e-12) dir = true;
      cls[static_cast<std::size_t>(i) * d1 + j] =
          dir ? kDirichlet : (j == 0 ? kThin : kInterior);
    }
  }
  return cls;
}

// Unconstrained Gauss-Seidel target for the rescaled operator
//   L_eps w = Delta w + eps^2 [x (D^2 w) x - 5 x.grad w + (35/4) w]
// at eps = 0 this is the plain 5-point Laplacian target.
struct Resc2Stencil {
  const GridChart& c;
  double eps;
  int d1;
  double target(const std::vector<double>& u, int i, int j,
                std::uint8_t cl) const {
    const std::size_t idx = static_cast<std::size_t>(i) * d1 + j;
    const double h = c.h, h2 = h * h;
    const double x = -c.L + i * h, y = j * h;
    const double e2 = eps * eps;
    const double cxx = (1.0 + e2 * x * x) / h2;
    const double cyy = (1.0 + e2 * y * y) / h2;
    const double uW = u[idx - d1], uE = u[idx + d1];
    double num = cxx * (uE + uW);
    double diag = 2.0 * (cxx + cyy) - e2 * 35.0 / 4.0;
    if (cl == kThin) {
      // y = 0: even reflection kills the mixed and y-first-derivative terms
      num += 2.0 * cyy * u[idx + 1];
      num += -e2 * 5.0 * x * (uE - uW) / (2.0 * h);
    } else {
      const double uS = u[idx - 1], uN = u[idx + 1];
      num += cyy * (uN + uS);
      if (e2 != 0.0) {
        const double uxy = (u[idx + d1 + 1] - u[idx + d1 - 1] -
                            u[idx - d1 + 1] + u[idx - d1 - 1]) /
                           (4.0 * h2);
        num += e2 * (2.0 * x * y * uxy -
                     5.0 * (x * (uE - uW) + y * (uN - uS)) / (2.0 * h));
      }
    }
    return num / diag;
  }
};

KKTResiduals box2_residual(const GridChart& c, double eps,
                           const std::vector<double>& u,
                           const std::vector<std::uint8_t>& cls, bool obstacle) {
  const int n = c.box_n(), nz = c.box_nz(), d1 = nz + 1;
  const Resc2Stencil st{c, eps, d1};
  KKTResiduals r;
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < nz; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * d1 + j;
      const std::uint8_t cl = cls[idx];
      if (cl == kDirichlet) continue;
      const double d = st.target(u, i, j, cl) - u[idx];
      if (cl == kInterior)
        r.harmonic = std::max(r.harmonic, std::abs(d));
      else
        accumulate_thin(r, u[idx], d, obstacle);
    }
  }
  return r;
}

VISolution solve_box2_impl(const GridChart& chart, double eps, const Fn2& bc,
                           const SolverOpts& opts, bool obstacle,
                           const DiscreteField* init = nullptr) {
  const int n = chart.box_n(), nz = chart.box_nz(), d1 = nz + 1;
  VISolution sol;
  sol.obstacle = obstacle;
  sol.eps_param = eps;
  sol.field.chart = chart;
  auto& u = sol.field.values;
  u.resize(static_cast<std::size_t>(n + 1) * d1);
  const auto cls = box2_classes(chart);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= nz; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * d1 + j;
      const double x = -chart.L + i * chart.h, y = j * chart.h;
      u[idx] = (init != nullptr && cls[idx] != kDirichlet)
                   ? chart_interp(*init, x, y)
                   : bc(x, y);
      if (cls[idx] == kThin && obstacle) u[idx] = std::max(0.0, u[idx]);
    }
  const Resc2Stencil st{chart, eps, d1};
  auto sweep = [&](double w) {
    double maxinc = 0.0;
    for (int i = 1; i < n; ++i) {
      for (int j = 0; j < nz; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * d1 + j;
        const std::uint8_t cl = cls[idx];
        if (cl == kDirichlet) continue;
        const double v = st.target(u, i, j, cl);
        const bool proj = (cl == kThin) && obstacle;
        const double tgt = proj ? std::max(0.0, v) : v;
        maxinc = std::max(maxinc, std::abs(tgt - u[idx]));
        double un = u[idx] + w * (v - u[idx]);
        if (proj) un = std::max(0.0, un);
        u[idx] = un;
      }
    }
    return maxinc;
  };
  auto resid = [&] { return box2_residual(chart, eps, u, cls, obstacle); };
  sor_loop(auto_omega(opts, std::max(n, nz)), opts, sweep, resid, sol);
  sol.contact_mask.resize(n + 1);
  for (int i = 0; i <= n; ++i)
    sol.contact_mask[i] =
        (u[static_cast<std::size_t>(i) * d1] <= kContactEps) ? 1 : 0;
  return sol;
}

// ---------------------------------------------------------------------------
// box3_half
// ---------------------------------------------------------------------------

KKTResiduals box3_residual(const GridChart& c, const std::vector<double>& u,
                           bool obstacle) {
  const int n = c.box_n(), nz = c.box_nz();
  const std::size_t d2 = nz + 1, d12 = static_cast<std::size_t>(n + 1) * d2;
  KKTResiduals r;
  for (int i = 1; i < n; ++i) {
    for (int j = 1; j < n; ++j) {
      const std::size_t base =
          (static_cast<std::size_t>(i) * (n + 1) + j) * d2;
      {
        const double v = (u[base - d2] + u[base + d2] + u[base - d12] +
                          u[base + d12] + 2.0 * u[base + 1]) /
                         6.0;
        accumulate_thin(r, u[base], v - u[base], obstacle);
      }
      for (int k = 1; k < nz; ++k) {
        const std::size_t idx = base + k;
        const double v = (u[idx - d2] + u[idx + d2] + u[idx - d12] +
                          u[idx + d12] + u[idx - 1] + u[idx + 1]) /
                         6.0;
        r.harmonic = std::max(r.harmonic, std::abs(v - u[idx]));
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// cap / annulus stencil (finite-volume form of Delta_S + lambda in geodesic
// polar coordinates, cell-centered in s)
// ---------------------------------------------------------------------------

struct CapStencil {
  std::vector<double> AE, AW, AN, diag;  // per radial cell
  int ns = 0, npsi = 0, d1 = 0;
  bool has_inner = false;  // annulus: Dirichlet ghost at s_min - hs/2

  CapStencil(const GridChart& c, double lambda) {
    ns = c.ns;
    npsi = c.npsi;
    d1 = npsi + 1;
    has_inner = c.s_min > 0.0;
    const double hs = c.cap_hs(), hp = c.cap_hpsi();
    AE.resize(ns);
    AW.resize(ns);
    AN.resize(ns);
    diag.resize(ns);
    for (int i = 0; i < ns; ++i) {
      const double s = c.cap_s(i);
      AE[i] = std::sin(s + 0.5 * hs) / (std::sin(s) * hs * hs);
      AW[i] = std::sin(s - 0.5 * hs) / (std::sin(s) * hs * hs);
      AN[i] = 1.0 / (std::sin(s) * std::sin(s) * hp * hp);
      diag[i] = AE[i] + AW[i] + 2.0 * AN[i] - lambda;
      if (!(diag[i] > 0.0))
        throw SolverError("cap too large for maximum principle "
                          "(nonpositive stencil diagonal)",
                          {});
    }
  }

  // u: ns x (npsi+1); ig/og: ghost rings (size npsi+1 each)
  double target(const std::vector<double>& u, const std::vector<double>& ig,
                const std::vector<double>& og, int i, int j) const {
    const std::size_t idx = static_cast<std::size_t>(i) * d1 + j;
    const double uW = (i == 0) ? (has_inner ? ig[j] : 0.0) : u[idx - d1];
    const double uE = (i == ns - 1) ? og[j] : u[idx + d1];
    double num = AE[i] * uE + AW[i] * uW;
    if (j == 0)
      num += 2.0 * AN[i] * u[idx + 1];
    else if (j == npsi)
      num += 2.0 * AN[i] * u[idx - 1];
    else
      num += AN[i] * (u[idx + 1] + u[idx - 1]);
    return num / diag[i];
  }
};

KKTResiduals cap_residual(const GridChart& c, double lambda,
                          const std::vector<double>& u,
                          const std::vector<double>& ig,
                          const std::vector<double>& og, bool obstacle) {
  const CapStencil st(c, lambda);
  KKTResiduals r;
  for (int i = 0; i < st.ns; ++i) {
    for (int j = 0; j <= st.npsi; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * st.d1 + j;
      const double d = st.target(u, ig, og, i, j) - u[idx];
      if (j == 0 || j == st.npsi)
        accumulate_thin(r, u[idx], d, obstacle);
      else
        r.harmonic = std::max(r.harmonic, std::abs(d));
    }
  }
  return r;
}

// Operational maximum-principle check: on a coarsened copy of the chart,
// Gauss-Seidel must converge for the shifted linear problem with constant
// source and zero boundary data, and the solution must be nonnegative
// (inverse positivity).  Divergence or a sign change means lambda exceeds
// the principal Dirichlet eigenvalue of the chart.
void cap_max_principle_probe(const GridChart& chart, double lambda) {
  GridChart c = chart;
  c.ns = std::min(c.ns, 24);
  c.npsi = std::min(c.npsi, 24);
  const CapStencil st(c, lambda);
  const int d1 = st.d1;
  std::vector<double> w(static_cast<std::size_t>(c.ns) * d1, 0.0);
  const std::vector<double> ghost(d1, 0.0);
  double inc = 1.0;
  for (int sweep = 0; sweep < 20000 && inc > 1e-9; ++sweep) {
    inc = 0.0;
    for (int i = 0; i < c.ns; ++i)
      for (int j = 0; j <= c.npsi; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * d1 + j;
        const double v = st.target(w, ghost, ghost, i, j) + 1.0 / st.diag[i];
        inc = std::max(inc, std::abs(v - w[idx]));
        w[idx] = v;
      }
    if (!(inc < 1e8))
      throw SolverError("cap too large for maximum principle "
                        "(probe solve diverged)",
                        {});
  }
  double wmin = 0.0, wmax = 0.0;
  for (double x : w) { wmin = std::min(wmin, x); wmax = std::max(wmax, x); }
  if (inc > 1e-9 || wmin < -1e-8 * std::max(1.0, wmax))
    throw SolverError("cap too large for maximum principle "
                      "(probe solve not inverse-positive)",
                      {});
}

// ---------------------------------------------------------------------------
// layer band: d/dt((1-t^2) d/dt) + (1-t^2)^{-1} d^2/dtheta^2 + lambda
// ---------------------------------------------------------------------------

struct LayerStencil {
  std::vector<double> BE, BW, C, diag;  // per t node (interior)
  int nt = 0, ntheta = 0, d1 = 0;

  LayerStencil(const GridChart& c, double lambda) {
    nt = c.nt;
    ntheta = c.ntheta;
    d1 = ntheta + 1;
    const double ht = c.layer_ht(), hth = c.layer_htheta();
    BE.resize(nt + 1);
    BW.resize(nt + 1);
    C.resize(nt + 1);
    diag.resize(nt + 1);
    for (int a = 1; a < nt; ++a) {
      const double t = -c.eta + a * ht;
      BE[a] = (1.0 - (t + 0.5 * ht) * (t + 0.5 * ht)) / (ht * ht);
      BW[a] = (1.0 - (t - 0.5 * ht) * (t - 0.5 * ht)) / (ht * ht);
      C[a] = 1.0 / ((1.0 - t * t) * hth * hth);
      diag[a] = BE[a] + BW[a] + 2.0 * C[a] - lambda;
      if (!(diag[a] > 0.0))
        throw SolverError("layer band too wide for maximum principle "
                          "(nonpositive stencil diagonal)",
                          {});
    }
  }

  double target(const std::vector<double>& u, int a, int b) const {
    const std::size_t idx = static_cast<std::size_t>(a) * d1 + b;
    double num = BE[a] * u[idx + d1] + BW[a] * u[idx - d1];
    if (b == 0)
      num += 2.0 * C[a] * u[idx + 1];  // even reflection at theta = 0
    else
      num += C[a] * (u[idx + 1] + u[idx - 1]);
    return num / diag[a];
  }
};

void layer_max_principle_probe(const GridChart& chart, double lambda) {
  GridChart c = chart;
  c.nt = std::min(c.nt, 24);
  c.ntheta = std::min(c.ntheta, 24);
  const LayerStencil st(c, lambda);
  const int d1 = st.d1;
  std::vector<double> w(static_cast<std::size_t>(c.nt + 1) * d1, 0.0);
  double inc = 1.0;
  for (int sweep = 0; sweep < 20000 && inc > 1e-9; ++sweep) {
    inc = 0.0;
    for (int a = 1; a < c.nt; ++a)
      for (int b = 0; b < c.ntheta; ++b) {
        const std::size_t idx = static_cast<std::size_t>(a) * d1 + b;
        const double v = st.target(w, a, b) + 1.0 / st.diag[a];
        inc = std::max(inc, std::abs(v - w[idx]));
        w[idx] = v;
      }
    if (!(inc < 1e8))
      throw SolverError("layer band too wide for maximum principle "
                        "(probe solve diverged)",
                        {});
  }
  double wmin = 0.0, wmax = 0.0;
  for (double x : w) { wmin = std::min(wmin, x); wmax = std::max(wmax, x); }
  if (inc > 1e-9 || wmin < -1e-8 * std::max(1.0, wmax))
    throw SolverError("layer band too wide for maximum principle "
                      "(probe solve not inverse-positive)",
                      {});
}

}  // namespace

// ---------------------------------------------------------------------------
// public entry points
// ---------------------------------------------------------------------------

VISolution solve_signorini_box2(const GridChart& chart, const Fn2& bc,
                                const SolverOpts& opts, bool obstacle) {
  if (chart.kind != ChartKind::box2_half)
    throw std::invalid_argument("solve_signorini_box2: wrong chart kind");
  return solve_box2_impl(chart, 0.0, bc, opts, obstacle);
}

VISolution solve_signorini_box2(const GridChart& chart, const Fn2& bc,
                                const DiscreteField& init,
                                const SolverOpts& opts, bool obstacle) {
  if (chart.kind != ChartKind::box2_half)
    throw std::invalid_argument("solve_signorini_box2: wrong chart kind");
  return solve_box2_impl(chart, 0.0, bc, opts, obstacle, &init);
}

VISolution solve_rescaled_cap(double eps, double R, double h, const Fn2& bc,
                              const SolverOpts& opts) {
  if (eps < 0.0 || R <= 0.0 || h <= 0.0)
    throw std::invalid_argument("solve_rescaled_cap: bad parameters");
  if (eps * R > 1.0)
    throw SolverError("rescaled chart too large for the stencil sign test "
                      "(eps*R > 1)",
                      {});
  GridChart c;
  c.kind = ChartKind::box2_half;
  c.L = R;
  c.h = h;
  c.disk_radius = R;
  return solve_box2_impl(c, eps, bc, opts, true);
}

VISolution solve_signorini_box3(const GridChart& chart, const SphereFn& bc,
                                const SolverOpts& opts, bool obstacle) {
  if (chart.kind != ChartKind::box3_half)
    throw std::invalid_argument("solve_signorini_box3: wrong chart kind");
  const int n = chart.box_n(), nz = chart.box_nz();
  const std::size_t d2 = nz + 1, d12 = static_cast<std::size_t>(n + 1) * d2;
  VISolution sol;
  sol.obstacle = obstacle;
  sol.field.chart = chart;
  auto& u = sol.field.values;
  u.resize(static_cast<std::size_t>(n + 1) * d12);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      for (int k = 0; k <= nz; ++k) {
        const std::size_t idx =
            (static_cast<std::size_t>(i) * (n + 1) + j) * d2 + k;
        const Point3 x{-chart.L + i * chart.h, -chart.L + j * chart.h,
                       k * chart.h};
        u[idx] = bc(x);
        const bool thin_free =
            k == 0 && i > 0 && i < n && j > 0 && j < n;
        if (thin_free && obstacle) u[idx] = std::max(0.0, u[idx]);
      }
  auto sweep = [&](double w) {
    double maxinc = 0.0;
    for (int i = 1; i < n; ++i) {
      for (int j = 1; j < n; ++j) {
        const std::size_t base =
            (static_cast<std::size_t>(i) * (n + 1) + j) * d2;
        {
          const double v = (u[base - d2] + u[base + d2] + u[base - d12] +
                            u[base + d12] + 2.0 * u[base + 1]) /
                           6.0;
          const double tgt = obstacle ? std::max(0.0, v) : v;
          maxinc = std::max(maxinc, std::abs(tgt - u[base]));
          double un = u[base] + w * (v - u[base]);
          if (obstacle) un = std::max(0.0, un);
          u[base] = un;
        }
        for (int k = 1; k < nz; ++k) {
          const std::size_t idx = base + k;
          const double v = (u[idx - d2] + u[idx + d2] + u[idx - d12] +
                            u[idx + d12] + u[idx - 1] + u[idx + 1]) /
                           6.0;
          maxinc = std::max(maxinc, std::abs(v - u[idx]));
          u[idx] += w * (v - u[idx]);
        }
      }
    }
    return maxinc;
  };
  auto resid = [&] { return box3_residual(chart, u, obstacle); };
  sor_loop(auto_omega(opts, n), opts, sweep, resid, sol);
  sol.contact_mask.resize(static_cast<std::size_t>(n + 1) * (n + 1));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      sol.contact_mask[static_cast<std::size_t>(i) * (n + 1) + j] =
          (u[(static_cast<std::size_t>(i) * (n + 1) + j) * d2] <= kContactEps)
              ? 1
              : 0;
  return sol;
}

VISolution solve_cap(const GridChart& chart, double lambda_shift,
                     const SphereFn& bc, bool obstacle, const SolverOpts& opts) {
  if (chart.kind != ChartKind::cap_geodesic &&
      chart.kind != ChartKind::annulus2)
    throw std::invalid_argument("solve_cap: wrong chart kind");
  cap_max_principle_probe(chart, lambda_shift);
  const CapStencil st(chart, lambda_shift);
  const int ns = st.ns, npsi = st.npsi, d1 = st.d1;
  const double hs = chart.cap_hs(), hp = chart.cap_hpsi();

  VISolution sol;
  sol.obstacle = obstacle;
  sol.lambda_shift = lambda_shift;
  sol.field.chart = chart;
  auto& u = sol.field.values;
  u.resize(static_cast<std::size_t>(ns) * d1);
  std::vector<double> ig(d1, 0.0), og(d1, 0.0);
  for (int j = 0; j <= npsi; ++j) {
    const double psi = j * hp;
    og[j] = bc(chart.cap_point(chart.s_max + 0.5 * hs, psi));
    if (st.has_inner)
      ig[j] = bc(chart.cap_point(chart.s_min - 0.5 * hs, psi));
    for (int i = 0; i < ns; ++i) {
      const std::size_t idx = static_cast<std::size_t>(i) * d1 + j;
      u[idx] = bc(chart.cap_point(chart.cap_s(i), psi));
      if ((j == 0 || j == npsi) && obstacle) u[idx] = std::max(0.0, u[idx]);
    }
  }
  sol.field.boundary_data = ig;
  sol.field.boundary_data.insert(sol.field.boundary_data.end(), og.begin(),
                                 og.end());
  auto sweep = [&](double w) {
    double maxinc = 0.0;
    for (int i = 0; i < ns; ++i) {
      for (int j = 0; j <= npsi; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * d1 + j;
        const double v = st.target(u, ig, og, i, j);
        const bool proj = (j == 0 || j == npsi) && obstacle;
        const double tgt = proj ? std::max(0.0, v) : v;
        maxinc = std::max(maxinc, std::abs(tgt - u[idx]));
        double un = u[idx] + w * (v - u[idx]);
        if (proj) un = std::max(0.0, un);
        u[idx] = un;
      }
    }
    return maxinc;
  };
  auto resid = [&] {
    return cap_residual(chart, lambda_shift, u, ig, og, obstacle);
  };
  sor_loop(auto_omega(opts, std::max(ns, npsi)), opts, sweep, resid, sol);
  sol.contact_mask.resize(2 * ns);
  for (int i = 0; i < ns; ++i) {
    sol.contact_mask[i] =
        (u[static_cast<std::size_t>(i) * d1] <= kContactEps) ? 1 : 0;
    sol.contact_mask[ns + i] =
        (u[static_cast<std::size_t>(i) * d1 + npsi] <= kContactEps) ? 1 : 0;
  }
  return sol;
}

DiscreteField solve_layer(const GridChart& chart, double lambda_shift,
                          const SphereFn& bc, const SolverOpts& opts) {
  if (chart.kind != ChartKind::layer_band)
    throw std::invalid_argument("solve_layer: wrong chart kind");
  layer_max_principle_probe(chart, lambda_shift);
  const LayerStencil st(chart, lambda_shift);
  const int nt = st.nt, ntheta = st.ntheta, d1 = st.d1;
  const double ht = chart.layer_ht(), hth = chart.layer_htheta();

  VISolution sol;
  sol.obstacle = false;
  sol.lambda_shift = lambda_shift;
  sol.field.chart = chart;
  auto& u = sol.field.values;
  u.resize(static_cast<std::size_t>(nt + 1) * d1);
  for (int a = 0; a <= nt; ++a)
    for (int b = 0; b <= ntheta; ++b)
      u[static_cast<std::size_t>(a) * d1 + b] =
          bc(chart.layer_point(-chart.eta + a * ht, b * hth));
  auto sweep = [&](double w) {
    double maxinc = 0.0;
    for (int a = 1; a < nt; ++a) {
      for (int b = 0; b < ntheta; ++b) {
        const std::size_t idx = static_cast<std::size_t>(a) * d1 + b;
        const double v = st.target(u, a, b);
        maxinc = std::max(maxinc, std::abs(v - u[idx]));
        u[idx] += w * (v - u[idx]);
      }
    }
    return maxinc;
  };
  auto resid = [&] {
    KKTResiduals r;
    for (int a = 1; a < nt; ++a)
      for (int b = 0; b < ntheta; ++b) {
        const std::size_t idx = static_cast<std::size_t>(a) * d1 + b;
        r.harmonic =
            std::max(r.harmonic, std::abs(st.target(u, a, b) - u[idx]));
      }
    return r;
  };
  sor_loop(auto_omega(opts, std::max(nt, ntheta)), opts, sweep, resid, sol);
  return sol.field;
}

KKTResiduals kkt_report(const VISolution& sol) {
  const GridChart& c = sol.field.chart;
  switch (c.kind) {
    case ChartKind::box2_half:
      return box2_residual(c, sol.eps_param, sol.field.values, box2_classes(c),
                           sol.obstacle);
    case ChartKind::box3_half:
      return box3_residual(c, sol.field.values, sol.obstacle);
    case ChartKind::cap_geodesic:
    case ChartKind::annulus2: {
      const int d1 = c.npsi + 1;
      const auto& bdata = sol.field.boundary_data;
      if (bdata.size() != static_cast<std::size_t>(2 * d1))
        throw std::invalid_argument("kkt_report: missing cap ghost data");
      std::vector<double> ig(bdata.begin(), bdata.begin() + d1);
      std::vector<double> og(bdata.begin() + d1, bdata.end());
      return cap_residual(c, sol.lambda_shift, sol.field.values, ig, og,
                          sol.obstacle);
    }
    case ChartKind::layer_band: {
      const LayerStencil st(c, sol.lambda_shift);
      KKTResiduals r;
      for (int a = 1; a < c.nt; ++a)
        for (int b = 0; b < c.ntheta; ++b) {
          const std::size_t idx = static_cast<std::size_t>(a) * st.d1 + b;
          r.harmonic = std::max(
              r.harmonic,
              std::abs(st.target(sol.field.values, a, b) -
                       sol.field.values[idx]));
        }
      return r;
    }
  }
  throw std::logic_error("kkt_report: bad chart kind");
}

double box_dirichlet_energy(const DiscreteField& f) {
  const GridChart& c = f.chart;
  const auto& u = f.values;
  double e = 0.0;
  if (c.kind == ChartKind::box2_half) {
    const int n = c.box_n(), nz = c.box_nz(), d1 = nz + 1;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= nz; ++j) {
        const std::size_t idx = static_cast<std::size_t>(i) * d1 + j;
        if (i < n) e += (u[idx + d1] - u[idx]) * (u[idx + d1] - u[idx]);
        if (j < nz) e += (u[idx + 1] - u[idx]) * (u[idx + 1] - u[idx]);
      }
  } else if (c.kind == ChartKind::box3_half) {
    const int n = c.box_n(), nz = c.box_nz();
    const std::size_t d2 = nz + 1, d12 = static_cast<std::size_t>(n + 1) * d2;
    for (int i = 0; i <= n; ++i)
      for (int j = 0; j <= n; ++j)
        for (int k = 0; k <= nz; ++k) {
          const std::size_t idx =
              (static_cast<std::size_t>(i) * (n + 1) + j) * d2 + k;
          if (i < n) e += (u[idx + d12] - u[idx]) * (u[idx + d12] - u[idx]);
          if (j < n) e += (u[idx + d2] - u[idx]) * (u[idx + d2] - u[idx]);
          if (k < nz) e += (u[idx + 1] - u[idx]) * (u[idx + 1] - u[idx]);
        }
  } else {
    throw std::invalid_argument("box_dirichlet_energy: box charts only");
  }
  // even-extension factor: the stored half-domain represents both sides
  return 2.0 * e;
}

}  // namespace tof
