#include <doctest.h>

#include <cmath>
#include <set>

#include "nshomog/rng.hpp"

using namespace nshomog;

TEST_CASE("philox4x32-10 known-answer vectors") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) ==
        PhiloxCounter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                   {0xffffffff, 0xffffffff}) ==
        PhiloxCounter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                   {0xa4093822, 0x299f31d0}) ==
        PhiloxCounter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("keyed draws are pure functions of their address") {
  const KeyedRandom a(42, Stream::Noise);
  const KeyedRandom b(42, Stream::Noise);
  const KeyedRandom c(42, Stream::Medium);
  CHECK(a.normal(3, 9) == b.normal(3, 9));
  CHECK(a.normal(3, 9) != c.normal(3, 9));
  CHECK(a.normal(3, 9) != a.normal(3, 10));
}

TEST_CASE("uniform and normal moments") {
  const KeyedRandom r(7, Stream::Fields);
  const int n = 200000;
  double su = 0, su2 = 0, sn = 0, sn2 = 0;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform(static_cast<std::uint32_t>(i), 0);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    su += u;
    su2 += u * u;
    const double z = r.normal(static_cast<std::uint32_t>(i), 1);
    sn += z;
    sn2 += z * z;
  }
  // 5 standard errors
  CHECK(std::abs(su / n - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(su2 / n - 1.0 / 3) < 5 * std::sqrt(4.0 / 45 / n));
  CHECK(std::abs(sn / n) < 5 / std::sqrt(n));
  CHECK(std::abs(sn2 / n - 1.0) < 5 * std::sqrt(2.0 / n));
}

TEST_CASE("pack_mode is injective on the cutoff box") {
  std::set<std::uint32_t> seen;
  for (int s1 = -64; s1 <= 64; ++s1) {
    for (int s2 = -64; s2 <= 64; ++s2) {
      CHECK(seen.insert(pack_mode(s1, s2)).second);
    }
  }
}
