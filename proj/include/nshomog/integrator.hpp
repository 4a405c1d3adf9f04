#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nshomog/noise.hpp"
#include "nshomog/nonlinear.hpp"
#include "nshomog/random_media.hpp"
#include "nshomog/spectral_field.hpp"

namespace nshomog {

/// q(x/eps, w) and sigma(t/eps, .) from one frozen medium sample.
struct Oscillating {
  EpsilonScale eps;
  PotentialRealization medium;
};

/// Constant q_bar and the time-averaged sigma_bar.
struct Effective {
  double q_bar = 0.0;
};

using CoefficientMode = std::variant<Oscillating, Effective>;

struct SimulationConfig {
  int cutoff = 8;
  /// Padded grid for the products; 0 picks the smallest alias-free size.
  int grid = 0;
  double dt = 1.0 / 1024.0;
  int steps = 1024;
  double nu = 1.0;
  CoefficientMode coefficients = Effective{};
  SigmaModel sigma;
  SpectralField initial{8};
  std::uint64_t noise_seed = 0;
  /// Trajectory samples every `sample_stride` steps (plus the final step).
  int sample_stride = 8;
  /// Half-lattice modes whose amplitudes are recorded.
  std::vector<ModeIndex> observables;
  /// Blow-up guard on |u|_1.
  double blowup_ceiling = 1e6;

  double horizon() const { return steps * dt; }
  /// Smallest grid resolving B(u) (3N + 1) and q(x/eps) u (2N + n K + 1).
  int required_grid() const;
  int resolved_grid() const;
  /// Throws ConfigError / ResolutionError on inconsistent settings.
  void validate() const;
};

/// Semi-implicit Euler-Maruyama stepper: implicit Stokes, explicit B, q, sigma.
///   u^{n+1}_s = (1 + dt nu |s|^2)^{-1} [u^n_s + dt (-B(u^n) + Pi(q u^n))_s
///                                        + (sigma(t_n, u^n) dW_n)_s]
class Stepper {
 public:
  explicit Stepper(const SimulationConfig& cfg);

  int resolution() const { return ws_.resolution(); }

  /// One step from time t with standard increments d_beta (one per noise
  /// mode). Throws DivergenceError when |u|_1 leaves the ceiling.
  SpectralField advance(const SpectralField& u, double t,
                        std::span<const double> d_beta);

 private:
  double sigma_gain(double t) const;

  int cutoff_;
  double dt_;
  double ceiling_;
  SigmaModel sigma_;
  bool oscillating_;
  int eps_reciprocal_ = 1;
  double q_bar_ = 0.0;
  AdvectionWorkspace ws_;
  std::vector<double> potential_;
  std::vector<double> implicit_factor_;
};

/// Single step (constructs a Stepper; use Stepper in loops).
SpectralField step(const SpectralField& u, double t,
                   const SimulationConfig& cfg,
                   std::span<const double> d_beta);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> norm0;
  std::vector<double> norm1;
  std::vector<double> norm2;
  std::vector<ModeIndex> observables;
  /// observables[k] amplitude at sample i is values[i][k].
  std::vector<std::vector<Complex>> values;
};

/// Path functionals used by the moment estimates.
struct PathSummary {
  double initial_energy = 0.0;    // |u0|^2
  double sup_energy = 0.0;        // sup_t |u|^2
  double dissipation = 0.0;       // int_0^T |u|_1^2 dt (trapezoid)
  double sup_norm1_sq = 0.0;      // sup_t |u|_1^2
  double sup_norm2_sq = 0.0;      // sup_t |u|_2^2
  double sup_energy_sq = 0.0;     // sup_t |u|^4
  double terminal_energy = 0.0;   // |u(T)|^2
};

struct PathOptions {
  bool record_trajectory = true;
  /// Keep full states every k steps (0: none); used by the Hoelder profile.
  int snapshot_stride = 0;
};

struct PathResult {
  Trajectory trajectory;
  PathSummary summary;
  SpectralField terminal{1};
  std::vector<SpectralField> snapshots;
};

/// Integrates cfg.steps steps from cfg.initial. Deterministic in (cfg, seed).
PathResult simulate_path(const SimulationConfig& cfg,
                         const PathOptions& options = {});

/// CSV: t,norm0,norm1,norm2,obs_<s1>_<s2>_re,obs_<s1>_<s2>_im,...
std::string trajectory_csv(const Trajectory& traj);

}  // namespace nshomog
