#pragma once
// ============================================================================
// Finite-difference solvers for the thin obstacle (Signorini) variational
// inequality and the associated linear problems.
//
// All solvers use projected Gauss-Seidel / SOR with deterministic
// lexicographic sweeps:
//   - interior nodes: SOR relaxation of the discrete equation;
//   - thin-set nodes: even-reflection ghost stencil and pointwise projection
//     u <- max(0, relaxed value) (obstacle on).
// omega is chosen automatically from the grid size (clamped to [1, 1.9]) and
// falls back to 1 on residual stall.  Stopping: normalized update residual
// <= tol or the sweep cap.
//
// The spherical solves use the shifted operator Delta_S + lambda with
// lambda = 63/4 by default.  The classical "small cap" hypothesis for the
// maximum principle is enforced operationally: the assembled stencil must
// have nonnegative neighbor weights (finite-volume form guarantees this) and
// the shifted linear operator must be inverse-positive, which is checked by
// solving A w = 1 with zero boundary data and requiring convergence with
// w >= 0.  (Literal diagonal dominance is impossible for any positive
// spectral shift, so inverse-positivity is the faithful discrete stand-in.)
// ============================================================================

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tof/grid.hpp"
#include "tof/transforms.hpp"

namespace tof {

struct SolverOpts {
  double omega = 0.0;  // 0 = auto from grid size; clamped to [1, 1.9]
  double tol = 1e-8;
  long max_sweeps = 100000;
  int check_every = 16;
  // When true, hitting the sweep cap returns the best field instead of
  // throwing (used by property tests that examine partial sweeps).
  bool allow_nonconverged = false;
};

struct KKTResiduals {
  double harmonic = 0.0;      // max |L_h u| off contact (update units)
  double obstacle = 0.0;      // max (-u) on the thin set
  double complementarity = 0.0;  // max |u * multiplier| (normalized)
  double conormal = 0.0;      // max positive part of the discrete multiplier
  double max_abs() const {
    return std::max(std::max(harmonic, obstacle), std::max(complementarity, conormal));
  }
};

struct VISolution {
  DiscreteField field;
  // Thin-set node order: box2 = the j=0 row; box3 = the k=0 sheet (row-major
  // in (i,j)); cap = the psi=0 row followed by the psi=pi row.
  std::vector<std::uint8_t> contact_mask;
  KKTResiduals residuals;
  long iterations = 0;
  double final_omega = 1.0;
  bool converged = false;
  // problem context, kept so kkt_report can rebuild the stencil from scratch
  double lambda_shift = 0.0;
  double eps_param = 0.0;
  bool obstacle = true;
};

class SolverError : public std::runtime_error {
public:
  SolverError(const std::string& what, KKTResiduals last)
      : std::runtime_error(what), last_residuals(last) {}
  KKTResiduals last_residuals;
};

// --- box charts -------------------------------------------------------------

// 2D: domain [-L,L] x [0,L] (optionally masked to the disk of radius
// chart.disk_radius), thin line {x2=0}, bc(x1,x2) on Dirichlet nodes.
VISolution solve_signorini_box2(const GridChart& chart, const Fn2& bc,
                                const SolverOpts& opts = {}, bool obstacle = true);
// Warm-started variant: free nodes initialize by interpolating `init` (any
// box2 field, typically a coarser solve), Dirichlet nodes take bc.
VISolution solve_signorini_box2(const GridChart& chart, const Fn2& bc,
                                const DiscreteField& init,
                                const SolverOpts& opts = {}, bool obstacle = true);

// 3D: domain [-L,L]^2 x [0,L], thin plane {x3=0}, bc on the outer boundary.
VISolution solve_signorini_box3(const GridChart& chart, const SphereFn& bc,
                                const SolverOpts& opts = {}, bool obstacle = true);

// --- spherical charts -------------------------------------------------------

// Cap / annulus thin obstacle problem for (Delta_S + lambda_shift).
// bc supplies the Dirichlet data on s = s_max (and s = s_min for annuli).
VISolution solve_cap(const GridChart& chart, double lambda_shift, const SphereFn& bc,
                     bool obstacle, const SolverOpts& opts = {});

// Linear Dirichlet solve on the layer band; bc supplies both the t = +-eta
// data and the slit row theta = pi.
DiscreteField solve_layer(const GridChart& chart, double lambda_shift,
                          const SphereFn& bc, const SolverOpts& opts = {});

// --- rescaled 2D operator ---------------------------------------------------

// L_eps w = Delta w + eps^2 [ x (D^2 w) x - 5 x . grad w + (35/4) w ] on the
// 2D disk of radius R (half grid, thin line {x2=0}); at eps = 0 this is the
// planar Signorini solver.
VISolution solve_rescaled_cap(double eps, double R, double h, const Fn2& bc,
                              const SolverOpts& opts = {});

// Recompute all residual families from scratch for an existing solution.
KKTResiduals kkt_report(const VISolution& sol);

// Discrete Dirichlet energy (with the even-symmetry factor 2) of a box field;
// used by the energy-descent property test.
double box_dirichlet_energy(const DiscreteField& f);

}  // namespace tof
