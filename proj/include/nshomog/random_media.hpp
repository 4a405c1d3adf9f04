#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nshomog/mode_index.hpp"
#include "nshomog/spectral_field.hpp"

namespace nshomog {

/// Oscillation scale eps = 1/n with integer n >= 1, so q(x/eps) stays
/// 2 pi-periodic on the torus.
class EpsilonScale {
 public:
  explicit EpsilonScale(int n);

  /// Accepts values within 1e-9 (relative) of 1/n; throws ConfigError
  /// otherwise.
  static EpsilonScale from_value(double eps);
  /// Parses "1/n" or a decimal such as "0.125".
  static EpsilonScale parse(const std::string& text);

  int reciprocal() const { return n_; }
  double value() const { return 1.0 / n_; }
  std::string to_string() const { return "1/" + std::to_string(n_); }

  friend bool operator==(EpsilonScale, EpsilonScale) = default;

 private:
  int n_;
};

struct PotentialComponent {
  ModeIndex k;
  double amplitude = 0.0;
};

/// q(x, w) = a0 + sum_j a_j cos(k_j . x + theta_j) with i.i.d. uniform phases.
struct PotentialSpec {
  double a0 = 0.0;
  std::vector<PotentialComponent> components;

  /// |a0| + sum |a_j|, a uniform bound on |q|.
  double bound() const;
  /// Largest max(|k1|,|k2|) over components (0 if none).
  int max_frequency() const;
  /// Throws ConfigError on a zero wavevector or non-finite amplitude.
  void validate() const;
};

/// One frozen sample q(., w) of the random-phase medium.
class PotentialRealization {
 public:
  PotentialRealization(PotentialSpec spec, std::vector<double> phases);

  const PotentialSpec& spec() const { return spec_; }
  const std::vector<double>& phases() const { return phases_; }

  /// q(x, w).
  double value(double x1, double x2) const;
  /// q(x / eps, w).
  double evaluate(double x1, double x2, EpsilonScale eps) const;
  /// The realization T_y w: phases theta_j + k_j . y (mod 2 pi), so that
  /// q(x, T_y w) = q(x + y, w).
  PotentialRealization shifted(double y1, double y2) const;

  /// q(x_j / eps) on the M x M grid, row-major; phases are reduced with
  /// integer arithmetic so the samples are exact to rounding.
  std::vector<double> sample_grid(EpsilonScale eps, int resolution) const;

 private:
  PotentialSpec spec_;
  std::vector<double> phases_;
};

/// Draws theta_j uniform on [0, 2 pi) from the seeded medium stream.
PotentialRealization sample_potential(const PotentialSpec& spec,
                                      std::uint64_t seed);

/// E q(0, w) = a0 for the random-phase model.
double effective_q(const PotentialSpec& spec);

/// Smallest grid integrating q(x/eps) u.phi exactly at cutoff N.
int pairing_resolution(const PotentialSpec& spec, EpsilonScale eps,
                       int cutoff);

/// Torus average (2 pi)^{-2} int q(x/eps, w) u(x).phi(x) dx, on the default
/// grid or an explicit one (ResolutionError if it under-resolves).
double oscillation_pairing(const PotentialRealization& r, EpsilonScale eps,
                           const SpectralField& u, const SpectralField& phi);
double oscillation_pairing(const PotentialRealization& r, EpsilonScale eps,
                           const SpectralField& u, const SpectralField& phi,
                           int resolution);

}  // namespace nshomog
