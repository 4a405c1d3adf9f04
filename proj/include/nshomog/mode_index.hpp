#pragma once

#include <compare>
#include <cstdlib>
#include <string>

namespace nshomog {

/// Wavevector s = (s1, s2) in Z^2 \ {0}.
struct ModeIndex {
  int s1 = 0;
  int s2 = 0;

  friend constexpr bool operator==(ModeIndex, ModeIndex) = default;
  friend constexpr auto operator<=>(ModeIndex, ModeIndex) = default;

  constexpr ModeIndex operator-() const { return {-s1, -s2}; }
  constexpr bool is_zero() const { return s1 == 0 && s2 == 0; }
  constexpr int norm_squared() const { return s1 * s1 + s2 * s2; }
  constexpr int sup_norm() const {
    const int a = s1 < 0 ? -s1 : s1;
    const int b = s2 < 0 ? -s2 : s2;
    return a > b ? a : b;
  }
  /// s^perp = (-s2, s1).
  constexpr ModeIndex perp() const { return {-s2, s1}; }
};

/// Z^2_+ : s1 > 0, or s1 = 0 and s2 > 0. Exactly one of s, -s lies in it.
constexpr bool in_half_lattice(ModeIndex s) {
  return s.s1 > 0 || (s.s1 == 0 && s.s2 > 0);
}

inline std::string to_string(ModeIndex s) {
  return "(" + std::to_string(s.s1) + "," + std::to_string(s.s2) + ")";
}

}  // namespace nshomog
