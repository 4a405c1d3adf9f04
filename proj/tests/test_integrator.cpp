#include <doctest.h>

#include <cmath>

#include "nshomog/errors.hpp"
#include "nshomog/harness.hpp"
#include "nshomog/integrator.hpp"
#include "nshomog/rng.hpp"

using namespace nshomog;

namespace {

SimulationConfig quiet(int cutoff, double q_bar = 0.0) {
  SimulationConfig c;
  c.cutoff = cutoff;
  c.dt = 1.0 / 256;
  c.steps = 256;
  c.coefficients = Effective{q_bar};
  c.sigma.noise = {};
  c.initial = SpectralField(cutoff);
  c.sample_stride = 16;
  return c;
}

}  // namespace

TEST_CASE("single mode reproduces the scalar recursion") {
  const int n = 6;
  for (ModeIndex s : {ModeIndex{1, 0}, ModeIndex{-2, 3}, ModeIndex{4, 4}}) {
    for (double q : {0.0, 0.9}) {
      SimulationConfig c = quiet(n, q);
      c.initial = SpectralField::basis(s, n);
      Stepper st(c);
      SpectralField u = c.initial;
      const double factor = (1.0 + c.dt * q) / (1.0 + c.dt * s.norm_squared());
      double expect = 1.0;
      double prev = 1.0;
      for (int k = 0; k < 200; ++k) {
        u = st.advance(u, k * c.dt, {});
        expect *= factor;
        const double coord = basis_coordinate(u, s);
        CHECK(std::abs(coord - factor * prev) <= 1e-14 * coord);
        CHECK(std::abs(coord - expect) <= 1e-12 * expect);
        prev = coord;
        SpectralField rest = u;
        rest.axpy(-coord, SpectralField::basis(s, n));
        CHECK(sobolev_norm(rest, 0.0) <= 1e-14 * sobolev_norm(c.initial, 0.0));
      }
      if (q == 0.0) {
        // continuum heat decay e^{-|s|^2 t}, first order in dt
        const double t = 200 * c.dt;
        const double exact = std::exp(-s.norm_squared() * t);
        CHECK(std::abs(expect - exact) <= c.dt * s.norm_squared() * s.norm_squared() * t);
      }
    }
  }
}

TEST_CASE("zero state stays zero with noise switched off") {
  SimulationConfig c = quiet(4);
  c.sigma.noise = NoiseModel::power_law(4, 1.0, 1.0);
  c.sigma.rho0 = 0.0;
  const PathResult r = simulate_path(c);
  CHECK(sobolev_norm(r.terminal, 0.0) == 0.0);
}

TEST_CASE("deterministic dissipation: energy never increases") {
  SimulationConfig c = quiet(8);
  c.initial = smooth_random_field(8, 12);
  c.initial *= 0.5;
  Stepper st(c);
  SpectralField u = c.initial;
  double prev = sobolev_norm(u, 0.0);
  for (int k = 0; k < c.steps; ++k) {
    u = st.advance(u, k * c.dt, {});
    const double now = sobolev_norm(u, 0.0);
    CHECK(now <= prev);
    CHECK(u.divergence_residual() <= 1e-12);
    prev = now;
  }
}

TEST_CASE("paths are deterministic and keep incompressibility") {
  SimulationConfig c = quiet(6);
  c.initial = smooth_random_field(6, 1);
  c.sigma.noise = NoiseModel::power_law(6, 1.0, 1.5);
  c.sigma.gamma = 0.5;
  c.coefficients =
      Oscillating{EpsilonScale(4), sample_potential({0.3, {{{1, 0}, 1.0}}}, 9)};
  c.noise_seed = 42;
  c.observables = {{1, 0}, {2, -1}};
  PathOptions opt;
  opt.snapshot_stride = 32;
  const PathResult a = simulate_path(c, opt);
  const PathResult b = simulate_path(c, opt);
  CHECK(a.terminal == b.terminal);
  CHECK(trajectory_csv(a.trajectory) == trajectory_csv(b.trajectory));
  for (const auto& s : a.snapshots) CHECK(s.divergence_residual() <= 1e-12);
  CHECK(a.snapshots.size() == 1 + c.steps / 32);

  const Trajectory& t = a.trajectory;
  CHECK(t.times.size() == 1 + c.steps / c.sample_stride);
  CHECK(t.times.back() == c.horizon());
  for (std::size_t i = 1; i < t.times.size(); ++i) CHECK(t.times[i] > t.times[i - 1]);
  for (double v : t.norm2) CHECK(std::isfinite(v));

  c.noise_seed = 43;
  CHECK(!(simulate_path(c).terminal == a.terminal));
}

TEST_CASE("trajectory csv schema") {
  SimulationConfig c = quiet(3);
  c.initial = SpectralField::basis({1, 1}, 3);
  c.observables = {{1, 1}, {0, 2}};
  c.steps = 4;
  c.sample_stride = 2;
  const std::string csv = trajectory_csv(simulate_path(c).trajectory);
  CHECK(csv.rfind("t,norm0,norm1,norm2,obs_1_1_re,obs_1_1_im,obs_0_2_re,obs_0_2_im\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
}

TEST_CASE("path summary functionals") {
  SimulationConfig c = quiet(4);
  const ModeIndex s{1, 1};
  c.initial = SpectralField::basis(s, 4);
  const PathResult r = simulate_path(c);
  const double e0 = std::pow(sobolev_norm(c.initial, 0.0), 2);
  CHECK(r.summary.initial_energy == e0);
  CHECK(r.summary.sup_energy == e0);
  CHECK(r.summary.sup_norm1_sq == doctest::Approx(2 * e0));
  CHECK(r.summary.sup_norm2_sq == doctest::Approx(4 * e0));
  CHECK(r.summary.sup_energy_sq == doctest::Approx(e0 * e0));
  // int_0^T |u|_1^2 = 2 e0 int e^{-4t} dt for the continuum decay
  const double exact = 2 * e0 * (1 - std::exp(-4.0)) / 4;
  CHECK(r.summary.dissipation == doctest::Approx(exact).epsilon(0.02));
}

TEST_CASE("blow-up guard reports the time") {
  SimulationConfig c = quiet(3, 5000.0);
  c.initial = SpectralField::basis({1, 0}, 3);
  try {
    simulate_path(c);
    FAIL("no divergence reported");
  } catch (const DivergenceError& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() <= c.horizon());
    CHECK(std::string(e.what()).find("t = ") != std::string::npos);
  }
}

TEST_CASE("configuration validation") {
  SimulationConfig c = quiet(8);
  c.grid = 17;
  CHECK_THROWS_AS(c.validate(), ResolutionError);
  c.grid = 20;
  CHECK_THROWS_AS(c.validate(), ResolutionError);
  c.grid = 25;
  CHECK_NOTHROW(c.validate());
  c.grid = 0;
  c.coefficients = Oscillating{EpsilonScale(16), sample_potential({0.0, {{{1, 0}, 1.0}}}, 1)};
  CHECK(c.required_grid() == 16 + 16 + 1);
  CHECK(c.resolved_grid() == 36);
  c.dt = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.dt = 1.0 / 256;
  c.observables = {{-1, 0}};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("self-convergence under dt halving with common noise") {
  // Brownian increments on the finest grid; coarser levels sum them.
  const int n = 6;
  SimulationConfig base = quiet(n);
  base.initial = smooth_random_field(n, 3);
  base.sigma.noise = NoiseModel::power_law(n, 0.5, 1.5);
  base.coefficients =
      Oscillating{EpsilonScale(4), sample_potential({0.5, {{{1, 0}, 1.0}}}, 4)};
  const int fine_steps = 512;
  const double horizon = 0.5;
  const std::size_t modes = base.sigma.noise.size();

  double err_coarse = 0.0;
  double err_mid = 0.0;
  for (int path = 0; path < 8; ++path) {
    const KeyedRandom rng(500 + path, Stream::Noise);
    const double fine_dt = horizon / fine_steps;
    std::vector<std::vector<double>> fine(fine_steps, std::vector<double>(modes));
    for (int k = 0; k < fine_steps; ++k) {
      for (std::size_t j = 0; j < modes; ++j) {
        fine[k][j] = std::sqrt(fine_dt) * rng.normal(j, k);
      }
    }
    std::vector<SpectralField> terminal;
    for (int level : {4, 2, 1}) {
      SimulationConfig c = base;
      c.dt = fine_dt * level;
      c.steps = fine_steps / level;
      Stepper st(c);
      SpectralField u = c.initial;
      std::vector<double> w(modes);
      for (int k = 0; k < c.steps; ++k) {
        std::fill(w.begin(), w.end(), 0.0);
        for (int f = 0; f < level; ++f) {
          for (std::size_t j = 0; j < modes; ++j) w[j] += fine[k * level + f][j];
        }
        u = st.advance(u, k * c.dt, w);
      }
      terminal.push_back(u);
    }
    err_coarse += std::pow(sobolev_norm(terminal[0] - terminal[1], 0.0), 2);
    err_mid += std::pow(sobolev_norm(terminal[1] - terminal[2], 0.0), 2);
  }
  CHECK(std::sqrt(err_coarse / err_mid) >= 1.7);
}
