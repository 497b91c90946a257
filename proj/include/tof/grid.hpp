#pragma once
// ============================================================================
// Structured grids and discrete fields.
//
// Charts:
//   box2_half  : [-L,L] x [0,L], thin line {x2=0} on the j=0 row; optional
//                disk mask of radius R (nodes outside the disk are Dirichlet)
//   box3_half  : [-L,L]^2 x [0,L], thin plane {x3=0} on the k=0 sheet
//   cap_geodesic / annulus2 : geodesic polar chart (s, psi) about a center
//                A in S2 \cap {x3=0}; x(s,psi) = cos s A + sin s (cos psi T +
//                sin psi N) with T the tangent of the great circle {x3=0} at A
//                and N = (0,0,1).  Radial nodes at cell centers
//                s_i = s_min + (i+1/2) hs (no center node; the finite-volume
//                flux through s=0 vanishes).  psi in [0,pi] with even
//                reflection at psi = 0 and psi = pi (the thin rows).
//   layer_band : (t, theta) = (x1, slit angle), t in [-eta, eta], theta in
//                [0, pi]; even reflection at theta=0, Dirichlet slit row at
//                theta=pi.
//
// Even symmetry in x3 is built into every chart: the stored half-domain
// represents the even extension.
// ============================================================================

#include <cstdint>
#include <string>
#include <vector>

#include "tof/geometry.hpp"

namespace tof {

enum class ChartKind : std::uint8_t {
  box2_half = 0,
  box3_half = 1,
  cap_geodesic = 2,
  layer_band = 3,
  annulus2 = 4,
};

struct GridChart {
  ChartKind kind = ChartKind::box2_half;

  // box charts
  double L = 1.0;
  double h = 1.0 / 64.0;
  double disk_radius = 0.0;  // 2D only; 0 = no mask

  // cap / annulus charts
  Point3 center{1.0, 0.0, 0.0};
  double s_min = 0.0, s_max = 0.3;
  int ns = 64, npsi = 64;  // radial cells, angular cells on [0, pi]

  // layer chart
  double eta = 0.1;
  int nt = 64, ntheta = 128;  // nodes: (nt+1) x (ntheta+1) on [-eta,eta]x[0,pi]

  // --- derived sizes -------------------------------------------------------
  int box_n() const { return static_cast<int>(std::lround(2.0 * L / h)); }
  int box_nz() const { return static_cast<int>(std::lround(L / h)); }

  // cap frame
  Point3 cap_T() const { return {-center.x2, center.x1, 0.0}; }
  Point3 cap_point(double s, double psi) const {
    const Point3 T = cap_T();
    const double cs = std::cos(s), ss = std::sin(s);
    const double cp = std::cos(psi), sp = std::sin(psi);
    return {cs * center.x1 + ss * cp * T.x1, cs * center.x2 + ss * cp * T.x2,
            ss * sp};
  }
  double cap_s(int i) const { return s_min + (i + 0.5) * cap_hs(); }
  double cap_hs() const { return (s_max - s_min) / ns; }
  double cap_hpsi() const { return kPi / npsi; }

  double layer_ht() const { return 2.0 * eta / nt; }
  double layer_htheta() const { return kPi / ntheta; }
  Point3 layer_point(double t, double theta) const {
    const double rho = std::sqrt(std::max(0.0, 1.0 - t * t));
    return {t, rho * std::cos(theta), rho * std::sin(theta)};
  }

  std::vector<std::uint32_t> dims() const;
  std::vector<double> spacings() const;
};

struct DiscreteField {
  GridChart chart;
  std::vector<double> values;  // row-major over chart dims
  // Dirichlet data living outside the node array (cell-centered charts only):
  // for cap/annulus charts this holds the ghost-ring values, inner ring first
  // (annulus) then outer ring, one value per psi node.  Box/layer charts keep
  // their Dirichlet values inside `values` and leave this empty.
  std::vector<double> boundary_data;

  double& at(std::size_t idx) { return values[idx]; }
  double at(std::size_t idx) const { return values[idx]; }
};

// Binary dump: magic "TOFLD1", chart kind u8, ndims u8, dims u32[],
// spacings f64[] (one per dim), symmetry u8 (1 = even in x3), then values as
// little-endian f64 row-major.  Writes are atomic (temp file + rename).
void write_field(const DiscreteField& f, const std::string& path);
DiscreteField read_field(const std::string& path);

// Bilinear interpolation in chart coordinates for the 2D charts:
// box2 (a = x1, b = x2), cap/annulus (a = s, b = psi), layer (a = t,
// b = theta).  Coordinates are clamped to the node hull.
double chart_interp(const DiscreteField& f, double a, double b);
// Trilinear interpolation for box3 charts (clamped likewise).
double chart_interp3(const DiscreteField& f, double x1, double x2, double x3);

}  // namespace tof
