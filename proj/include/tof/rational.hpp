#pragma once
// ============================================================================
// Exact rational arithmetic (arbitrary precision).
//
// Region-membership tests and the polynomial chains are specified exactly;
// boost::multiprecision::cpp_rational gives overflow-free rationals without
// an extra dependency beyond the pre-installed Boost headers.
// ============================================================================

#include <boost/multiprecision/cpp_int.hpp>

namespace tof {

using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline Rational rat(std::int64_t num, std::int64_t den = 1) {
  return Rational(num) / Rational(den);
}

}  // namespace tof
