#pragma once
// ============================================================================
// Univariate polynomials in x1 with exact rational coefficients.
//
// These are the building blocks of the polynomial chains: evaluation happens
// in double precision, but all chain algebra (derivatives, the harmonicity
// recurrence) is exact.
// ============================================================================

#include <cstddef>
#include <string>
#include <vector>

#include "tof/rational.hpp"

namespace tof {

class Poly {
public:
  Poly() = default;
  explicit Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  // Monomial a*x^k.
  static Poly monomial(Rational a, std::size_t k) {
    std::vector<Rational> c(k + 1, Rational(0));
    c[k] = std::move(a);
    return Poly(std::move(c));
  }
  static Poly constant(Rational a) { return monomial(std::move(a), 0); }
  static Poly zero() { return Poly(); }

  bool is_zero() const { return c_.empty(); }
  // Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }

  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(std::size_t k) const {
    return k < c_.size() ? c_[k] : Rational(0);
  }

  double eval(double x) const {
    double acc = 0.0;
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + to_double(c_[i]);
    return acc;
  }
  Rational eval_exact(const Rational& x) const {
    Rational acc(0);
    for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return Poly(std::move(d));
  }

  Poly operator*(const Rational& a) const {
    std::vector<Rational> d(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) d[i] = c_[i] * a;
    return Poly(std::move(d));
  }
  Poly operator+(const Poly& o) const {
    std::vector<Rational> d(std::max(c_.size(), o.c_.size()), Rational(0));
    for (std::size_t i = 0; i < c_.size(); ++i) d[i] += c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) d[i] += o.c_[i];
    return Poly(std::move(d));
  }
  Poly operator-(const Poly& o) const { return *this + o * Rational(-1); }

  bool operator==(const Poly& o) const { return c_ == o.c_; }

  std::string str() const {
    if (c_.empty()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (c_[i] == 0) continue;
      if (!out.empty()) out += " + ";
      out += c_[i].str();
      if (i >= 1) out += "*x1";
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out.empty() ? "0" : out;
  }

private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;  // ascending powers
};

}  // namespace tof
