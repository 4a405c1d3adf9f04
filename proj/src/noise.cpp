#include "nshomog/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>

#include "nshomog/errors.hpp"
#include "nshomog/rng.hpp"

namespace nshomog {

double NoiseModel::trace() const {
  double t = 0.0;
  for (double q : amplitudes) t += q * q;
  return t;
}

void NoiseModel::validate(int cutoff) const {
  if (modes.size() != amplitudes.size()) {
    throw ConfigError("noise: modes and q must have the same length");
  }
  std::set<ModeIndex> seen;
  for (std::size_t j = 0; j < modes.size(); ++j) {
    const ModeIndex s = modes[j];
    if (s.is_zero()) throw ConfigError("noise: mode (0,0) is not allowed");
    if (s.sup_norm() > cutoff) {
      throw ConfigError("noise: mode " + to_string(s) +
                        " lies beyond the solver cutoff " +
                        std::to_string(cutoff));
    }
    if (!seen.insert(s).second) {
      throw ConfigError("noise: mode " + to_string(s) + " listed twice");
    }
    if (!(amplitudes[j] >= 0.0) || !std::isfinite(amplitudes[j])) {
      throw ConfigError("noise: amplitude for " + to_string(s) +
                        " must be finite and nonnegative");
    }
  }
}

NoiseModel NoiseModel::power_law(int cutoff, double amplitude,
                                 double exponent) {
  NoiseModel m;
  for (int s1 = -cutoff; s1 <= cutoff; ++s1) {
    for (int s2 = -cutoff; s2 <= cutoff; ++s2) {
      const ModeIndex s{s1, s2};
      if (s.is_zero()) continue;
      m.modes.push_back(s);
      m.amplitudes.push_back(
          amplitude *
          std::pow(static_cast<double>(s.norm_squared()), -0.5 * exponent));
    }
  }
  return m;
}

void standard_increments(const NoiseModel& noise, double dt, int step,
                         std::uint64_t seed, std::span<double> out) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (out.size() != noise.size()) {
    throw std::invalid_argument("increment buffer has wrong size");
  }
  const KeyedRandom rng(seed, Stream::Noise);
  const double sd = std::sqrt(dt);
  for (std::size_t j = 0; j < noise.size(); ++j) {
    const ModeIndex s = noise.modes[j];
    out[j] = sd * rng.normal(pack_mode(s.s1, s.s2),
                             static_cast<std::uint32_t>(step));
  }
}

IncrementTable sample_increments(const NoiseModel& noise, double dt, int steps,
                                 std::uint64_t seed) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
  IncrementTable table(steps, noise.size());
  for (int n = 0; n < steps; ++n) {
    auto row = table.row(n);
    standard_increments(noise, dt, n, seed, row);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] *= noise.amplitudes[j];
  }
  return table;
}

void SigmaModel::validate(int cutoff) const {
  if (!(period > 0.0)) throw ConfigError("sigma: period must be positive");
  if (!(std::abs(gamma) <= 1.0)) {
    throw ConfigError("sigma: |gamma| must be <= 1");
  }
  if (!(rho0 >= 0.0) || !std::isfinite(rho0)) {
    throw ConfigError("sigma: rho0 must be finite and nonnegative");
  }
  if (!std::isfinite(level)) throw ConfigError("sigma: level must be finite");
  noise.validate(cutoff);
}

double SigmaModel::g(double t) const {
  if (gamma == 0.0) return level;
  // Reduce to one period first so g(t + P) and g(t) see the same phase.
  double tau = std::fmod(t, period);
  if (tau < 0.0) tau += period;
  return level *
         (1.0 + gamma * std::cos(2.0 * std::numbers::pi * tau / period));
}

double SigmaModel::g_sup() const {
  return std::abs(level) * (1.0 + std::abs(gamma));
}

double SigmaModel::lipschitz_constant() const {
  return g_sup() * rho0 * 3.0 * std::sqrt(3.0) / 8.0;
}

double SigmaModel::hilbert_schmidt(double t, const SpectralField& h) const {
  const double y = sobolev_norm(h, 0.0);
  return std::abs(g(t)) * rho(y * y) * std::sqrt(noise.trace());
}

SpectralField noise_field(const NoiseModel& noise, int cutoff,
                          std::span<const double> w) {
  if (w.size() != noise.size()) {
    throw std::invalid_argument("one increment per active noise mode required");
  }
  SpectralField out(cutoff);
  for (std::size_t j = 0; j < noise.size(); ++j) {
    out.add_basis(noise.modes[j], noise.amplitudes[j] * w[j]);
  }
  return out;
}

namespace {

SpectralField scaled_action(const SigmaModel& m, double gain,
                            const SpectralField& h,
                            std::span<const double> w) {
  const double y = sobolev_norm(h, 0.0);
  SpectralField out = noise_field(m.noise, h.cutoff(), w);
  out *= gain * m.rho(y * y);
  return out;
}

}  // namespace

SpectralField apply_sigma(const SigmaModel& m, double t, const SpectralField& h,
                          std::span<const double> w) {
  return scaled_action(m, m.g(t), h, w);
}

SpectralField averaged_sigma(const SigmaModel& m, const SpectralField& h,
                             std::span<const double> w) {
  return scaled_action(m, m.g_mean(), h, w);
}

}  // namespace nshomog
