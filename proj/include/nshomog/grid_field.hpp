#pragma once

#include <cstddef>
#include <vector>

#include "nshomog/spectral_field.hpp"

namespace nshomog {

/// Velocity samples on the uniform M x M grid x_j = 2 pi j / M of [0, 2 pi)^2.
struct GridField {
  explicit GridField(int resolution)
      : resolution(resolution),
        u1(static_cast<std::size_t>(resolution) * resolution, 0.0),
        u2(static_cast<std::size_t>(resolution) * resolution, 0.0) {}

  int resolution;
  std::vector<double> u1;
  std::vector<double> u2;

  std::size_t index(int j1, int j2) const {
    return static_cast<std::size_t>(j1) * resolution + j2;
  }
};

/// Smallest grid for a loss-free round trip at cutoff N.
constexpr int min_round_trip_resolution(int cutoff) { return 2 * cutoff + 2; }

/// Exact evaluation of u at the grid points. Throws ResolutionError when
/// M < 2N + 2.
GridField to_grid(const Spectrum& u, int resolution);
GridField to_grid(const SpectralField& u, int resolution);

/// Discrete Fourier analysis onto modes with max(|s1|,|s2|) <= N; the mean is
/// dropped. Throws ResolutionError when M < 2N + 2.
Spectrum to_spectral(const GridField& g, int cutoff);

/// to_spectral followed by the Leray projection.
SpectralField to_velocity(const GridField& g, int cutoff);

/// Closed-form samples of the basis vector e_s.
GridField synthesize_basis(ModeIndex s, int resolution);

/// (1/M^2) sum_j |u(x_j)|^2, the trapezoid rule for the torus average.
double grid_mean_square(const GridField& g);

/// int_{T^2} f . g dx by the trapezoid rule.
double grid_integral_dot(const GridField& f, const GridField& g);

/// (torus average of |u|^4)^{1/4} on a 2x oversampled grid (M = 4N + 4),
/// exact for the band-limited quartic integrand.
double l4_norm(const SpectralField& u);

}  // namespace nshomog
