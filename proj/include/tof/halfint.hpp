#pragma once
// ============================================================================
// Half-integer arithmetic.
//
// Homogeneity degrees in this code base live in (1/2)Z.  To avoid float
// classification bugs ("is lambda == 3/2?") a half-integer is stored as its
// exact doubled value: HalfInt{7} means 7/2, HalfInt{-1} means -1/2.
// ============================================================================

#include <compare>
#include <cstdint>
#include <string>

namespace tof {

class HalfInt {
public:
  constexpr HalfInt() : twice_(0) {}
  constexpr explicit HalfInt(std::int64_t twice) : twice_(twice) {}

  static constexpr HalfInt from_int(std::int64_t n) { return HalfInt{2 * n}; }

  constexpr std::int64_t twice() const { return twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  constexpr double value() const { return 0.5 * static_cast<double>(twice_); }

  constexpr HalfInt operator+(HalfInt o) const { return HalfInt{twice_ + o.twice_}; }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt{twice_ - o.twice_}; }
  constexpr HalfInt operator-() const { return HalfInt{-twice_}; }
  constexpr HalfInt operator+(std::int64_t n) const { return HalfInt{twice_ + 2 * n}; }
  constexpr HalfInt operator-(std::int64_t n) const { return HalfInt{twice_ - 2 * n}; }

  constexpr auto operator<=>(const HalfInt&) const = default;

  std::string str() const {
    if (is_integer()) return std::to_string(twice_ / 2);
    return std::to_string(twice_) + "/2";
  }

private:
  std::int64_t twice_;
};

// (m+1/2)(m+3/2): the Laplace-Beltrami eigenvalue of the degree-(m+1/2)
// homogeneous harmonic functions on the slit sphere.
constexpr double sphere_eigenvalue(int m) {
  return (m + 0.5) * (m + 1.5);
}

// lambda_{7/2} = 63/4, the shift used throughout the spherical solves.
inline constexpr double kLambda72 = 63.0 / 4.0;

}  // namespace tof
