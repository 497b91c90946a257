#include "tof/slit_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace tof {

double H72Coeffs::sup_norm_s2() const {
  // Dense sample of |phi| over the sphere (phi is a fixed trig polynomial,
  // so a moderate grid suffices; refined once as a guard).
  const SlitSum phi = to_function();
  if (phi.empty()) return 0.0;
  double best = 0.0;
  for (int ns : {96, 192}) {
    double cur = 0.0;
    for (int i = 1; i < ns; ++i) {
      const double s = kPi * i / ns;
      for (int j = 0; j < 2 * ns; ++j) {
        const double th = -kPi + 2.0 * kPi * j / (2 * ns);
        cur = std::max(cur, std::abs(phi.eval_polar(std::cos(s), std::sin(s), th)));
      }
    }
    best = std::max(best, cur);
  }
  return best;
}

std::vector<SlitSum> build_slit_basis(int m) {
  if (m < 0) throw std::invalid_argument("build_slit_basis: m >= 0 required");
  // Chain-generated spanning set: x1^k u_{m+1/2-k}, k = 0..m.
  std::vector<SlitSum> raw;
  for (int k = 0; k <= m; ++k) {
    raw.emplace_back(SlitFunction::harmonic_chain(
        Poly::monomial(Rational(1), static_cast<std::size_t>(k)),
        HalfInt{2 * (m - k) + 1}));
  }
  // Gram-Schmidt with sphere inner products.
  std::vector<SlitSum> ortho;
  for (int k = 0; k <= m; ++k) {
    std::vector<std::pair<double, SlitSum>> parts{{1.0, raw[k]}};
    for (const auto& e : ortho) parts.push_back({-sphere_inner(raw[k], e), e});
    SlitSum g = SlitSum::combine(parts);
    const double nrm = std::sqrt(sphere_norm2(g));
    if (!(nrm > 0.0)) throw std::runtime_error("build_slit_basis: degenerate span");
    std::vector<std::pair<double, SlitSum>> scaled{{1.0 / nrm, g}};
    ortho.push_back(SlitSum::combine(scaled));
  }
  return ortho;
}

}  // namespace tof
