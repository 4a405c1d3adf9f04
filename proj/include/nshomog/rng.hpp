#pragma once

#include <array>
#include <cstdint>

namespace nshomog {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). A draw is a
/// pure function of (key, counter), so streams keyed by (seed, mode, step)
/// do not depend on evaluation order or thread count.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter counter, PhiloxKey key);

/// Stream tags separating independent uses of the same seed.
enum class Stream : std::uint32_t {
  Noise = 1,
  Medium = 2,
  Permutation = 3,
  Fields = 4,
};

/// Keyed random source: every draw is addressed by two 32-bit indices.
class KeyedRandom {
 public:
  KeyedRandom(std::uint64_t seed, Stream stream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        stream_(static_cast<std::uint32_t>(stream)) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint32_t a, std::uint32_t b, std::uint32_t c = 0) const;
  /// Standard normal via Box-Muller on one Philox block.
  double normal(std::uint32_t a, std::uint32_t b, std::uint32_t c = 0) const;
  /// Raw 64 bits.
  std::uint64_t bits(std::uint32_t a, std::uint32_t b,
                     std::uint32_t c = 0) const;

 private:
  PhiloxKey key_;
  std::uint32_t stream_;
};

/// Packs a signed lattice coordinate pair into one counter word.
constexpr std::uint32_t pack_mode(int s1, int s2) {
  return (static_cast<std::uint32_t>(s1 + 32768) << 16) |
         (static_cast<std::uint32_t>(s2 + 32768) & 0xffffu);
}

}  // namespace nshomog
