#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nshomog/mode_index.hpp"
#include "nshomog/spectral_field.hpp"

namespace nshomog {

/// Truncated Q-Wiener process W(t) = sum_s q_s e_s beta_s(t); Q is diagonal
/// in the e_s basis.
struct NoiseModel {
  std::vector<ModeIndex> modes;
  std::vector<double> amplitudes;

  std::size_t size() const { return modes.size(); }
  /// sum_s q_s^2.
  double trace() const;
  /// Throws ConfigError on negative/non-finite amplitudes, repeated or zero
  /// modes, or modes beyond the solver cutoff.
  void validate(int cutoff) const;

  /// Every s in Z^2_0 with max(|s1|,|s2|) <= N, q_s = amplitude |s|^{-exponent}.
  static NoiseModel power_law(int cutoff, double amplitude, double exponent);
};

/// Q-scaled increments Delta W_s = q_s Delta beta_s, row-major by step.
class IncrementTable {
 public:
  IncrementTable(int steps, std::size_t modes)
      : steps_(steps), modes_(modes),
        data_(static_cast<std::size_t>(steps) * modes, 0.0) {}

  int steps() const { return steps_; }
  std::size_t modes() const { return modes_; }
  bool empty() const { return data_.empty(); }
  double operator()(int step, std::size_t mode) const {
    return data_[static_cast<std::size_t>(step) * modes_ + mode];
  }
  std::span<const double> row(int step) const {
    return {data_.data() + static_cast<std::size_t>(step) * modes_, modes_};
  }
  std::span<double> row(int step) {
    return {data_.data() + static_cast<std::size_t>(step) * modes_, modes_};
  }

 private:
  int steps_;
  std::size_t modes_;
  std::vector<double> data_;
};

/// Standard Brownian increments Delta beta_s ~ N(0, dt) for one step, keyed
/// by (seed, mode wavevector, step).
void standard_increments(const NoiseModel& noise, double dt, int step,
                         std::uint64_t seed, std::span<double> out);

/// Delta W_s = q_s Delta beta_s for steps [0, steps). Same stream as
/// standard_increments.
IncrementTable sample_increments(const NoiseModel& noise, double dt, int steps,
                                 std::uint64_t seed);

/// sigma(t, h) w = g(t) rho(|h|^2) sum_s q_s w_s e_s with
///   g(t) = level (1 + gamma cos(2 pi t / P)),   rho(y) = rho0 / (1 + y).
struct SigmaModel {
  double period = 1.0;
  double gamma = 0.0;
  double rho0 = 1.0;
  double level = 1.0;
  NoiseModel noise;

  /// Throws ConfigError when P <= 0, |gamma| > 1 or rho0 < 0.
  void validate(int cutoff) const;

  double g(double t) const;
  /// (1/P) int_0^P g = level.
  double g_mean() const { return level; }
  double g_sup() const;
  double rho(double y) const { return rho0 / (1.0 + y); }

  /// Lipschitz constant of h -> sigma(t, h) w per unit |Q w|:
  ///   sup|g| * rho0 * max_r 2r / (1 + r^2)^2 = sup|g| * rho0 * 3 sqrt(3) / 8,
  /// the maximum attained at r^2 = 1/3.
  double lipschitz_constant() const;

  /// |g(t)| rho(|h|^2) (sum q_s^2)^{1/2}, the Hilbert-Schmidt norm of
  /// sigma(t, h) as an operator on the cylindrical increments.
  double hilbert_schmidt(double t, const SpectralField& h) const;
};

/// Diagonal action of sigma(t, h) on standard increments w (one per active
/// mode, in NoiseModel order).
SpectralField apply_sigma(const SigmaModel& m, double t, const SpectralField& h,
                          std::span<const double> w);

/// Time-averaged coefficient: g replaced by its period mean.
SpectralField averaged_sigma(const SigmaModel& m, const SpectralField& h,
                             std::span<const double> w);

/// sum_s q_s w_s e_s (the Q w part of the action).
SpectralField noise_field(const NoiseModel& noise, int cutoff,
                          std::span<const double> w);

}  // namespace nshomog
