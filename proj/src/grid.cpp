#include "tof/grid.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace tof {

std::vector<std::uint32_t> GridChart::dims() const {
  switch (kind) {
    case ChartKind::box2_half:
      return {static_cast<std::uint32_t>(box_n() + 1),
              static_cast<std::uint32_t>(box_nz() + 1)};
    case ChartKind::box3_half:
      return {static_cast<std::uint32_t>(box_n() + 1),
              static_cast<std::uint32_t>(box_n() + 1),
              static_cast<std::uint32_t>(box_nz() + 1)};
    case ChartKind::cap_geodesic:
    case ChartKind::annulus2:
      return {static_cast<std::uint32_t>(ns), static_cast<std::uint32_t>(npsi + 1)};
    case ChartKind::layer_band:
      return {static_cast<std::uint32_t>(nt + 1),
              static_cast<std::uint32_t>(ntheta + 1)};
  }
  throw std::logic_error("GridChart::dims: bad kind");
}

std::vector<double> GridChart::spacings() const {
  switch (kind) {
    case ChartKind::box2_half:
      return {h, h};
    case ChartKind::box3_half:
      return {h, h, h};
    case ChartKind::cap_geodesic:
    case ChartKind::annulus2:
      return {cap_hs(), cap_hpsi()};
    case ChartKind::layer_band:
      return {layer_ht(), layer_htheta()};
  }
  throw std::logic_error("GridChart::spacings: bad kind");
}

void write_field(const DiscreteField& f, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    if (!os) throw std::runtime_error("write_field: cannot open " + tmp);
    os.write("TOFLD1", 6);
    const std::uint8_t kind = static_cast<std::uint8_t>(f.chart.kind);
    os.write(reinterpret_cast<const char*>(&kind), 1);
    const auto dims = f.chart.dims();
    const auto spac = f.chart.spacings();
    const std::uint8_t nd = static_cast<std::uint8_t>(dims.size());
    os.write(reinterpret_cast<const char*>(&nd), 1);
    os.write(reinterpret_cast<const char*>(dims.data()),
             static_cast<std::streamsize>(dims.size() * sizeof(std::uint32_t)));
    os.write(reinterpret_cast<const char*>(spac.data()),
             static_cast<std::streamsize>(spac.size() * sizeof(double)));
    const std::uint8_t sym = 1;  // even in x3
    os.write(reinterpret_cast<const char*>(&sym), 1);
    os.write(reinterpret_cast<const char*>(f.values.data()),
             static_cast<std::streamsize>(f.values.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write_field: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("write_field: rename failed for " + path);
}

DiscreteField read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("read_field: cannot open " + path);
  char magic[6];
  is.read(magic, 6);
  if (std::memcmp(magic, "TOFLD1", 6) != 0)
    throw std::runtime_error("read_field: bad magic in " + path);
  std::uint8_t kind = 0, nd = 0, sym = 0;
  is.read(reinterpret_cast<char*>(&kind), 1);
  is.read(reinterpret_cast<char*>(&nd), 1);
  std::vector<std::uint32_t> dims(nd);
  std::vector<double> spac(nd);
  is.read(reinterpret_cast<char*>(dims.data()), nd * sizeof(std::uint32_t));
  is.read(reinterpret_cast<char*>(spac.data()), nd * sizeof(double));
  is.read(reinterpret_cast<char*>(&sym), 1);
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  DiscreteField f;
  f.chart.kind = static_cast<ChartKind>(kind);
  // Reconstruct the few chart parameters encoded by dims/spacings.
  switch (f.chart.kind) {
    case ChartKind::box2_half:
    case ChartKind::box3_half:
      f.chart.h = spac[0];
      f.chart.L = spac[0] * (dims.back() - 1);
      break;
    case ChartKind::cap_geodesic:
    case ChartKind::annulus2:
      f.chart.ns = static_cast<int>(dims[0]);
      f.chart.npsi = static_cast<int>(dims[1]) - 1;
      f.chart.s_max = f.chart.s_min + spac[0] * dims[0];
      break;
    case ChartKind::layer_band:
      f.chart.nt = static_cast<int>(dims[0]) - 1;
      f.chart.ntheta = static_cast<int>(dims[1]) - 1;
      f.chart.eta = spac[0] * f.chart.nt / 2.0;
      break;
  }
  f.values.resize(total);
  is.read(reinterpret_cast<char*>(f.values.data()),
          static_cast<std::streamsize>(total * sizeof(double)));
  if (!is) throw std::runtime_error("read_field: truncated file " + path);
  return f;
}

namespace {
// fractional index clamped to [0, count-1]; returns (base index, weight)
std::pair<std::size_t, double> frac_index(double fi, std::size_t count) {
  fi = std::max(0.0, std::min(fi, static_cast<double>(count - 1)));
  std::size_t i0 = static_cast<std::size_t>(fi);
  if (i0 >= count - 1) i0 = count - 2;
  if (count == 1) return {0, 0.0};
  return {i0, fi - static_cast<double>(i0)};
}
}  // namespace

double chart_interp(const DiscreteField& f, double a, double b) {
  const GridChart& c = f.chart;
  double fi = 0.0, fj = 0.0;
  switch (c.kind) {
    case ChartKind::box2_half:
      fi = (a + c.L) / c.h;
      fj = b / c.h;
      break;
    case ChartKind::cap_geodesic:
    case ChartKind::annulus2:
      fi = (a - c.s_min) / c.cap_hs() - 0.5;
      fj = b / c.cap_hpsi();
      break;
    case ChartKind::layer_band:
      fi = (a + c.eta) / c.layer_ht();
      fj = b / c.layer_htheta();
      break;
    default:
      throw std::invalid_argument("chart_interp: 2D charts only");
  }
  const auto dims = c.dims();
  const auto [i0, wi] = frac_index(fi, dims[0]);
  const auto [j0, wj] = frac_index(fj, dims[1]);
  const std::size_t d1 = dims[1];
  const auto& u = f.values;
  const double v00 = u[i0 * d1 + j0], v01 = u[i0 * d1 + j0 + 1];
  const double v10 = u[(i0 + 1) * d1 + j0], v11 = u[(i0 + 1) * d1 + j0 + 1];
  return (1 - wi) * ((1 - wj) * v00 + wj * v01) +
         wi * ((1 - wj) * v10 + wj * v11);
}

double chart_interp3(const DiscreteField& f, double x1, double x2, double x3) {
  const GridChart& c = f.chart;
  if (c.kind != ChartKind::box3_half)
    throw std::invalid_argument("chart_interp3: box3 charts only");
  const auto dims = c.dims();
  const auto [i0, wi] = frac_index((x1 + c.L) / c.h, dims[0]);
  const auto [j0, wj] = frac_index((x2 + c.L) / c.h, dims[1]);
  const auto [k0, wk] = frac_index(std::abs(x3) / c.h, dims[2]);
  const std::size_t d2 = dims[2], d12 = static_cast<std::size_t>(dims[1]) * d2;
  const auto& u = f.values;
  double out = 0.0;
  for (int di = 0; di <= 1; ++di)
    for (int dj = 0; dj <= 1; ++dj)
      for (int dk = 0; dk <= 1; ++dk) {
        const double w = (di ? wi : 1 - wi) * (dj ? wj : 1 - wj) *
                         (dk ? wk : 1 - wk);
        out += w * u[(i0 + di) * d12 + (j0 + dj) * d2 + (k0 + dk)];
      }
  return out;
}

}  // namespace tof
