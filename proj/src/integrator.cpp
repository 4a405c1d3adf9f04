#include "nshomog/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "nshomog/csv.hpp"
#include "nshomog/errors.hpp"
#include "nshomog/fourier.hpp"
#include "nshomog/grid_field.hpp"

namespace nshomog {

int SimulationConfig::required_grid() const {
  int need = 3 * cutoff + 1;
  if (const auto* osc = std::get_if<Oscillating>(&coefficients)) {
    need = std::max(need, 2 * cutoff + osc->medium.spec().max_frequency() *
                                           osc->eps.reciprocal() +
                              1);
  }
  return need;
}

int SimulationConfig::resolved_grid() const {
  return grid > 0 ? grid : fft_friendly_size(required_grid());
}

void SimulationConfig::validate() const {
  if (cutoff < 1) throw ConfigError("cutoff must be >= 1");
  if (grid != 0 && grid < min_round_trip_resolution(cutoff)) {
    throw ResolutionError("grid " + std::to_string(grid) +
                          " cannot represent cutoff " + std::to_string(cutoff) +
                          " (need >= " +
                          std::to_string(min_round_trip_resolution(cutoff)) +
                          ")");
  }
  if (grid != 0 && grid < required_grid()) {
    throw ResolutionError("grid " + std::to_string(grid) +
                          " aliases the quadratic and potential products (need "
                          ">= " +
                          std::to_string(required_grid()) + ")");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (steps < 1) throw ConfigError("horizon must be a positive multiple of dt");
  if (!(nu > 0.0) || !std::isfinite(nu)) throw ConfigError("nu must be positive");
  if (sample_stride < 1) throw ConfigError("sample_stride must be >= 1");
  if (!(blowup_ceiling > 0.0)) throw ConfigError("blowup_ceiling must be positive");
  if (initial.cutoff() != cutoff) {
    throw ConfigError("initial condition cutoff differs from the solver cutoff");
  }
  if (!initial.spectrum().all_finite()) {
    throw ConfigError("initial condition has non-finite coefficients");
  }
  sigma.validate(cutoff);
  for (const auto& s : observables) {
    if (!in_half_lattice(s) || s.sup_norm() > cutoff) {
      throw ConfigError("observable " + to_string(s) +
                        " is not a stored half-lattice mode within the cutoff");
    }
  }
  if (const auto* eff = std::get_if<Effective>(&coefficients)) {
    if (!std::isfinite(eff->q_bar)) throw ConfigError("q_bar must be finite");
  }
}

Stepper::Stepper(const SimulationConfig& cfg)
    : cutoff_(cfg.cutoff),
      dt_(cfg.dt),
      ceiling_(cfg.blowup_ceiling),
      sigma_(cfg.sigma),
      oscillating_(std::holds_alternative<Oscillating>(cfg.coefficients)),
      ws_(cfg.cutoff, cfg.resolved_grid()) {
  const int m = ws_.resolution();
  if (const auto* osc = std::get_if<Oscillating>(&cfg.coefficients)) {
    eps_reciprocal_ = osc->eps.reciprocal();
    potential_ = osc->medium.sample_grid(osc->eps, m);
  } else {
    q_bar_ = std::get<Effective>(cfg.coefficients).q_bar;
    potential_.assign(static_cast<std::size_t>(m) * m, q_bar_);
  }
  const HalfLattice lat(cutoff_);
  implicit_factor_.resize(lat.size());
  for (std::size_t i = 0; i < lat.size(); ++i) {
    implicit_factor_[i] = 1.0 / (1.0 + cfg.dt * cfg.nu * lat.mode(i).norm_squared());
  }
}

double Stepper::sigma_gain(double t) const {
  return oscillating_ ? sigma_.g(t * eps_reciprocal_) : sigma_.g_mean();
}

SpectralField Stepper::advance(const SpectralField& u, double t,
                               std::span<const double> d_beta) {
  Spectrum rhs = ws_.drift(u, potential_);
  for (auto& c : rhs.coeffs()) {
    c[0] *= dt_;
    c[1] *= dt_;
  }
  SpectralField next = leray_project(std::move(rhs));
  next += u;
  if (!sigma_.noise.modes.empty()) {
    const double y = sobolev_norm(u, 0.0);
    SpectralField kick = noise_field(sigma_.noise, cutoff_, d_beta);
    kick *= sigma_gain(t) * sigma_.rho(y * y);
    next += kick;
  }
  std::size_t i = 0;
  next.scale_modes([&](ModeIndex) { return implicit_factor_[i++]; });

  const double h1 = sobolev_norm(next, 1.0);
  if (!(h1 <= ceiling_)) {
    std::ostringstream os;
    os << "|u|_1 = " << h1 << " exceeds the blow-up ceiling " << ceiling_
       << " at t = " << t + dt_;
    throw DivergenceError(os.str(), t + dt_);
  }
  return next;
}

SpectralField step(const SpectralField& u, double t,
                   const SimulationConfig& cfg,
                   std::span<const double> d_beta) {
  Stepper stepper(cfg);
  return stepper.advance(u, t, d_beta);
}

namespace {

void record(Trajectory& traj, double t, const SpectralField& u, double n0,
            double n1, double n2) {
  traj.times.push_back(t);
  traj.norm0.push_back(n0);
  traj.norm1.push_back(n1);
  traj.norm2.push_back(n2);
  std::vector<Complex> row;
  row.reserve(traj.observables.size());
  for (const auto& s : traj.observables) row.push_back(mode_amplitude(u, s));
  traj.values.push_back(std::move(row));
}

}  // namespace

PathResult simulate_path(const SimulationConfig& cfg,
                         const PathOptions& options) {
  cfg.validate();
  Stepper stepper(cfg);
  PathResult out;
  out.trajectory.observables = cfg.observables;

  SpectralField u = cfg.initial;
  std::vector<double> d_beta(cfg.sigma.noise.size());

  double n0 = sobolev_norm(u, 0.0);
  double n1 = sobolev_norm(u, 1.0);
  double n2 = sobolev_norm(u, 2.0);
  PathSummary& sum = out.summary;
  sum.initial_energy = n0 * n0;
  auto absorb = [&] {
    sum.sup_energy = std::max(sum.sup_energy, n0 * n0);
    sum.sup_norm1_sq = std::max(sum.sup_norm1_sq, n1 * n1);
    sum.sup_norm2_sq = std::max(sum.sup_norm2_sq, n2 * n2);
    sum.sup_energy_sq = std::max(sum.sup_energy_sq, n0 * n0 * n0 * n0);
  };
  absorb();
  if (options.record_trajectory) record(out.trajectory, 0.0, u, n0, n1, n2);
  if (options.snapshot_stride > 0) out.snapshots.push_back(u);

  for (int n = 0; n < cfg.steps; ++n) {
    const double t = n * cfg.dt;
    if (!d_beta.empty()) {
      standard_increments(cfg.sigma.noise, cfg.dt, n, cfg.noise_seed, d_beta);
    }
    const double prev1 = n1;
    u = stepper.advance(u, t, d_beta);
    n0 = sobolev_norm(u, 0.0);
    n1 = sobolev_norm(u, 1.0);
    n2 = sobolev_norm(u, 2.0);
    sum.dissipation += 0.5 * cfg.dt * (prev1 * prev1 + n1 * n1);
    absorb();
    const int done = n + 1;
    if (options.record_trajectory &&
        (done % cfg.sample_stride == 0 || done == cfg.steps)) {
      record(out.trajectory, done * cfg.dt, u, n0, n1, n2);
    }
    if (options.snapshot_stride > 0 && done % options.snapshot_stride == 0) {
      out.snapshots.push_back(u);
    }
  }
  sum.terminal_energy = n0 * n0;
  out.terminal = std::move(u);
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << "t,norm0,norm1,norm2";
  for (const auto& s : traj.observables) {
    os << ",obs_" << s.s1 << '_' << s.s2 << "_re,obs_" << s.s1 << '_' << s.s2
       << "_im";
  }
  os << '\n';
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    os << format_double(traj.times[i]) << ',' << format_double(traj.norm0[i])
       << ',' << format_double(traj.norm1[i]) << ','
       << format_double(traj.norm2[i]);
    for (const auto& c : traj.values[i]) {
      os << ',' << format_double(c.real()) << ',' << format_double(c.imag());
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace nshomog
