#pragma once
// ============================================================================
// Homogeneous harmonic functions on the slit domain.
//
// The 2D modes are u_lambda(r, theta) = r^lambda cos(lambda*theta) with
// half-integer lambda; they are harmonic in the plane minus the ray theta=pi
// and (for lambda > 0) vanish on that ray.
//
// A SlitFunction is the 3D object
//
//   f(x) = sum_k q_k(x1) r^{2k} u_{lambda0}(r, theta),
//
// a "polynomial chain" over a base mode.  Writing the 3D Laplacian in
// (x1, r, theta) and using that u_lambda is 2D-harmonic gives
//
//   Delta f = sum_k [ q_k'' + 4(k+1)(k+1+lambda0) q_{k+1} ] r^{2k} u_{lambda0},
//
// so f is harmonic away from the slit iff the chain satisfies the recurrence
//
//   q_{k+1} = - q_k'' / (4(k+1)(k+1+lambda0)),
//
// which terminates because each step lowers the degree by two.  All the named
// basis functions, the singular functions, and the annular-cap generators f_n
// are instances of this one construction.
// ============================================================================

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tof/geometry.hpp"
#include "tof/halfint.hpp"
#include "tof/polynomial.hpp"

namespace tof {

// r^lambda cos(lambda*theta).  Negative lambda requires r > 0.
inline double eval_mode(HalfInt lambda, const PolarPoint2& p) {
  const double lv = lambda.value();
  if (p.r == 0.0) {
    if (lambda.twice() < 0) throw std::domain_error("eval_mode: negative mode at r=0");
    return 0.0;  // lambda is a nonzero half-integer, so r^lambda -> 0
  }
  return std::pow(p.r, lv) * std::cos(lv * p.theta);
}

struct Gradient3 {
  double d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

class SlitFunction {
public:
  SlitFunction() = default;
  SlitFunction(HalfInt lambda0, std::vector<Poly> chain)
      : lambda0_(lambda0), chain_(std::move(chain)) {
    while (!chain_.empty() && chain_.back().is_zero()) chain_.pop_back();
  }

  // The unique harmonic chain with leading polynomial q0 over base mode
  // u_{lambda0}.
  static SlitFunction harmonic_chain(const Poly& q0, HalfInt lambda0) {
    std::vector<Poly> chain{q0};
    for (std::size_t k = 0; !chain.back().is_zero(); ++k) {
      // 4(k+1)(k+1+lambda0) as an exact rational; never zero for
      // half-integer lambda0.
      const auto kk = static_cast<std::int64_t>(k);
      Rational denom = Rational(4 * (kk + 1)) *
                       (Rational(kk + 1) + Rational(lambda0.twice()) / 2);
      Poly next = chain.back().derivative().derivative() * (Rational(-1) / denom);
      if (next.is_zero()) break;
      chain.push_back(std::move(next));
    }
    return SlitFunction(lambda0, std::move(chain));
  }

  HalfInt lambda0() const { return lambda0_; }
  const std::vector<Poly>& chain() const { return chain_; }
  bool is_zero() const { return chain_.empty(); }

  // Homogeneity of the whole function: deg(q0) + lambda0.
  HalfInt total_degree() const {
    if (chain_.empty()) return HalfInt{0};
    return lambda0_ + static_cast<std::int64_t>(chain_.front().degree());
  }

  // Most singular r-power appearing (the base mode's lambda0).
  HalfInt singular_order() const { return lambda0_; }

  double eval_polar(double x1, double r, double theta) const {
    if (r == 0.0 && lambda0_.twice() < 0)
      throw std::domain_error("SlitFunction: singular evaluation at r=0");
    if (r == 0.0) return 0.0;  // every r-power is a positive half-integer
    const double l0 = lambda0_.value();
    const double ct = std::cos(l0 * theta);
    double acc = 0.0, rp = std::pow(r, l0);
    const double r2 = r * r;
    for (const auto& q : chain_) {
      acc += q.eval(x1) * rp;
      rp *= r2;
    }
    return acc * ct;
  }
  double eval(const Point3& p) const { return eval_polar(p.x1, p.r(), p.theta()); }

  // Cartesian gradient, valid off the slit and off {r=0}.
  Gradient3 grad(const Point3& p) const {
    const double r = p.r(), theta = p.theta();
    if (r == 0.0) throw std::domain_error("SlitFunction::grad at r=0");
    const double l0 = lambda0_.value();
    const double ct = std::cos(l0 * theta), st = std::sin(l0 * theta);
    double f1 = 0.0;   // d/dx1 (cos factor deferred)
    double fr = 0.0;   // d/dr  (cos factor deferred)
    double fth = 0.0;  // d/dtheta / r (sin factor deferred)
    double rp = std::pow(r, l0);
    const double r2 = r * r;
    for (std::size_t k = 0; k < chain_.size(); ++k) {
      const double qv = chain_[k].eval(p.x1);
      const double e = 2.0 * static_cast<double>(k) + l0;
      f1 += chain_[k].derivative().eval(p.x1) * rp;
      fr += qv * e * rp / r;
      fth += qv * rp / r;
      rp *= r2;
    }
    const double d_r = fr * ct;            // d/dr
    const double d_t = -l0 * fth * st;     // (1/r) d/dtheta
    const double c = std::cos(theta), s = std::sin(theta);
    return {f1 * ct, c * d_r - s * d_t, s * d_r + c * d_t};
  }

  SlitFunction operator*(const Rational& a) const {
    std::vector<Poly> ch;
    ch.reserve(chain_.size());
    for (const auto& q : chain_) ch.push_back(q * a);
    return SlitFunction(lambda0_, std::move(ch));
  }

  std::string str() const {
    std::string out = "[lambda0=" + lambda0_.str();
    for (const auto& q : chain_) out += "; " + q.str();
    return out + "]";
  }

private:
  HalfInt lambda0_{0};
  std::vector<Poly> chain_;
};

// A finite linear combination of SlitFunctions (needed because e.g. the
// rotational-derivative basis mixes base modes).
class SlitSum {
public:
  struct Term {
    double coef;
    SlitFunction fn;
  };

  SlitSum() = default;
  SlitSum(std::initializer_list<Term> terms) : terms_(terms) {}
  explicit SlitSum(SlitFunction f) : terms_{{1.0, std::move(f)}} {}

  static SlitSum combine(const std::vector<std::pair<double, SlitSum>>& parts) {
    SlitSum out;
    for (const auto& [c, s] : parts)
      for (const auto& t : s.terms_) out.terms_.push_back({c * t.coef, t.fn});
    return out;
  }

  const std::vector<Term>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  void add(double coef, SlitFunction f) { terms_.push_back({coef, std::move(f)}); }

  double eval(const Point3& p) const {
    double acc = 0.0;
    for (const auto& t : terms_) acc += t.coef * t.fn.eval(p);
    return acc;
  }
  double eval_polar(double x1, double r, double theta) const {
    double acc = 0.0;
    for (const auto& t : terms_) acc += t.coef * t.fn.eval_polar(x1, r, theta);
    return acc;
  }
  Gradient3 grad(const Point3& p) const {
    Gradient3 g;
    for (const auto& t : terms_) {
      const Gradient3 gt = t.fn.grad(p);
      g.d1 += t.coef * gt.d1;
      g.d2 += t.coef * gt.d2;
      g.d3 += t.coef * gt.d3;
    }
    return g;
  }

  // Most singular r-power over all terms (for integrability checks).
  HalfInt singular_order() const {
    HalfInt m{1 << 20};
    for (const auto& t : terms_)
      if (t.fn.singular_order() < m) m = t.fn.singular_order();
    return m;
  }

  // Common homogeneity if all terms share one; throws otherwise.
  HalfInt total_degree() const {
    if (terms_.empty()) return HalfInt{0};
    HalfInt d = terms_.front().fn.total_degree();
    for (const auto& t : terms_)
      if (t.fn.total_degree() != d)
        throw std::logic_error("SlitSum: mixed homogeneity");
    return d;
  }

private:
  std::vector<Term> terms_;
};

using SphereFn = std::function<double(const Point3&)>;

}  // namespace tof
