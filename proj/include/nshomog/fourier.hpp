#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "nshomog/spectral_field.hpp"

namespace nshomog {

struct FftwPlans;

/// Smallest n' >= n whose prime factors are all in {2, 3, 5}.
int fft_friendly_size(int n);

/// Real 2D discrete Fourier pair on an M x M grid of [0, 2 pi)^2.
///
/// Grid samples are stored row-major with x1 = 2 pi j1 / M along rows.
/// Synthesis evaluates sum_s c_s e^{i s.x} exactly at the grid points for any
/// M (modes beyond the Nyquist band fold onto their aliases). Analysis
/// returns (1/M^2) sum_j u(x_j) e^{-i s.x_j}. Backed by FFTW with estimate
/// plans, so results are deterministic for a given M.
class FourierGrid {
 public:
  explicit FourierGrid(int resolution);

  int resolution() const { return m_; }
  std::size_t points() const { return static_cast<std::size_t>(m_) * m_; }
  std::size_t half_points() const {
    return static_cast<std::size_t>(m_) * (m_ / 2 + 1);
  }

  /// Synthesizes one real component. coeff(i) is the stored half-lattice
  /// coefficient of mode i of `lattice`.
  template <class Coeff>
  void synthesize(const HalfLattice& lattice, Coeff&& coeff,
                  std::span<double> out) {
    clear_half();
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      const Complex c = coeff(i);
      if (c == Complex{}) continue;
      const ModeIndex s = lattice.mode(i);
      accumulate(s, c);
      accumulate(-s, std::conj(c));
    }
    inverse(out);
  }

  /// Analyzes a real component into the stored modes of `lattice`.
  /// sink(i, c) receives the coefficient of mode i.
  template <class Sink>
  void analyze(std::span<const double> in, const HalfLattice& lattice,
               Sink&& sink) {
    forward(in);
    const double scale = 1.0 / static_cast<double>(points());
    for (std::size_t i = 0; i < lattice.size(); ++i) {
      sink(i, scale * bin(lattice.mode(i)));
    }
  }

 private:
  void clear_half();
  void accumulate(ModeIndex s, Complex c);
  Complex bin(ModeIndex s) const;
  void inverse(std::span<double> out);
  void forward(std::span<const double> in);

  int m_;
  const FftwPlans* plans_;
  std::vector<Complex> half_;
  std::vector<double> real_scratch_;
};

}  // namespace nshomog
