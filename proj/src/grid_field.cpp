#include "nshomog/grid_field.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nshomog/errors.hpp"
#include "nshomog/fourier.hpp"

namespace nshomog {

namespace {

void require_resolution(int resolution, int cutoff) {
  if (resolution < min_round_trip_resolution(cutoff)) {
    throw ResolutionError("grid resolution " + std::to_string(resolution) +
                          " too small for cutoff " + std::to_string(cutoff) +
                          " (need M >= 2N + 2 = " +
                          std::to_string(min_round_trip_resolution(cutoff)) +
                          ")");
  }
}

}  // namespace

GridField to_grid(const Spectrum& u, int resolution) {
  require_resolution(resolution, u.cutoff());
  GridField g(resolution);
  FourierGrid fft(resolution);
  fft.synthesize(u.lattice(), [&](std::size_t i) { return u[i][0]; }, g.u1);
  fft.synthesize(u.lattice(), [&](std::size_t i) { return u[i][1]; }, g.u2);
  return g;
}

GridField to_grid(const SpectralField& u, int resolution) {
  return to_grid(u.spectrum(), resolution);
}

Spectrum to_spectral(const GridField& g, int cutoff) {
  require_resolution(g.resolution, cutoff);
  Spectrum out(cutoff);
  FourierGrid fft(g.resolution);
  fft.analyze(g.u1, out.lattice(),
              [&](std::size_t i, Complex c) { out[i][0] = c; });
  fft.analyze(g.u2, out.lattice(),
              [&](std::size_t i, Complex c) { out[i][1] = c; });
  return out;
}

SpectralField to_velocity(const GridField& g, int cutoff) {
  return leray_project(to_spectral(g, cutoff));
}

GridField synthesize_basis(ModeIndex s, int resolution) {
  if (s.is_zero()) {
    throw std::invalid_argument("basis mode must be nonzero");
  }
  GridField g(resolution);
  const double cs = 1.0 / (std::numbers::sqrt2 * std::numbers::pi *
                           std::sqrt(static_cast<double>(s.norm_squared())));
  const ModeIndex sp = s.perp();
  const bool upper = in_half_lattice(s);
  const double h = 2.0 * std::numbers::pi / resolution;
  for (int j1 = 0; j1 < resolution; ++j1) {
    for (int j2 = 0; j2 < resolution; ++j2) {
      const double phase = s.s1 * (j1 * h) + s.s2 * (j2 * h);
      const double w = cs * (upper ? std::sin(phase) : std::cos(phase));
      g.u1[g.index(j1, j2)] = w * sp.s1;
      g.u2[g.index(j1, j2)] = w * sp.s2;
    }
  }
  return g;
}

double grid_mean_square(const GridField& g) {
  double sum = 0.0;
  for (std::size_t k = 0; k < g.u1.size(); ++k) {
    sum += g.u1[k] * g.u1[k] + g.u2[k] * g.u2[k];
  }
  return sum / static_cast<double>(g.u1.size());
}

double grid_integral_dot(const GridField& f, const GridField& g) {
  if (f.resolution != g.resolution) {
    throw std::invalid_argument("grid_integral_dot: resolution mismatch");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < f.u1.size(); ++k) {
    sum += f.u1[k] * g.u1[k] + f.u2[k] * g.u2[k];
  }
  const double cell = 4.0 * std::numbers::pi * std::numbers::pi /
                      static_cast<double>(f.u1.size());
  return sum * cell;
}

double l4_norm(const SpectralField& u) {
  const GridField g = to_grid(u, 2 * min_round_trip_resolution(u.cutoff()));
  double sum = 0.0;
  for (std::size_t k = 0; k < g.u1.size(); ++k) {
    const double m2 = g.u1[k] * g.u1[k] + g.u2[k] * g.u2[k];
    sum += m2 * m2;
  }
  return std::pow(sum / static_cast<double>(g.u1.size()), 0.25);
}

}  // namespace nshomog
