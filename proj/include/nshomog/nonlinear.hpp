#pragma once

#include <span>
#include <string>
#include <vector>

#include "nshomog/fourier.hpp"
#include "nshomog/spectral_field.hpp"

namespace nshomog {

/// Padded grid size for alias-free quadratic products: M(N) >= 3N + 1.
struct DealiasRule {
  static int padded_size(int cutoff) { return fft_friendly_size(3 * cutoff + 1); }
};

/// Scratch buffers for pseudospectral products at one (N, M). Not shareable
/// between threads; create one per worker.
class AdvectionWorkspace {
 public:
  AdvectionWorkspace(int cutoff, int resolution);

  int cutoff() const { return cutoff_; }
  int resolution() const { return fft_.resolution(); }

  /// Truncated (u . grad) v, before projection. Gradients are taken
  /// spectrally; the product is formed on the grid.
  Spectrum advect(const SpectralField& u, const SpectralField& v);

  /// Truncated -(u . grad) u + q u for a scalar potential sampled on this
  /// workspace's grid.
  Spectrum drift(const SpectralField& u, std::span<const double> potential);

 private:
  void load_velocity(const SpectralField& u);
  void load_gradient(const SpectralField& v);
  Spectrum analyze_products();

  int cutoff_;
  FourierGrid fft_;
  std::vector<double> u1_, u2_, d11_, d12_, d21_, d22_, f1_, f2_;
};

/// B(u, v) = Pi((u . grad) v) on the dealiased grid (M = 3N + 1 or larger).
SpectralField bilinear(const SpectralField& u, const SpectralField& v);
/// Same on an explicit grid; M < 3N + 1 aliases (negative controls only).
SpectralField bilinear(const SpectralField& u, const SpectralField& v,
                       int resolution);

/// Normalized residuals of the trilinear identities
///   (B(u,v), v) = 0,  (B(u,v), w) = -(B(u,w), v),  (B(u,u), Lap u) = 0.
/// The first two are divided by |u|_1 |v|_1 |v|_1 and |u|_1 |v|_1 |w|_1, the
/// last by |u|_1^2 |u|_2.
struct IdentityReport {
  double residual_i = 0.0;
  double residual_skew = 0.0;
  double residual_ii = 0.0;
};

IdentityReport identity_report(const SpectralField& u, const SpectralField& v,
                               const SpectralField& w);
IdentityReport identity_report(const SpectralField& u, const SpectralField& v,
                               const SpectralField& w, int resolution);

struct IdentityRow {
  int id = 0;
  IdentityReport report;
};

/// CSV with header id,residual_i,residual_skew,residual_ii.
std::string identity_csv(std::span<const IdentityRow> rows);

}  // namespace nshomog
