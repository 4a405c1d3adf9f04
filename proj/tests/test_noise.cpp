#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nshomog/errors.hpp"
#include "nshomog/harness.hpp"
#include "nshomog/noise.hpp"
#include "nshomog/rng.hpp"

using namespace nshomog;

namespace {

SigmaModel model(int cutoff) {
  SigmaModel m;
  m.period = 0.5;
  m.gamma = 0.6;
  m.rho0 = 1.5;
  m.level = 0.8;
  m.noise = NoiseModel::power_law(cutoff, 0.7, 1.5);
  return m;
}

}  // namespace

TEST_CASE("power-law noise covers the cutoff box") {
  const NoiseModel n = NoiseModel::power_law(3, 2.0, 1.0);
  CHECK(n.size() == 48);
  CHECK_NOTHROW(n.validate(3));
  CHECK_THROWS_AS(n.validate(2), ConfigError);
  double trace = 0.0;
  for (std::size_t j = 0; j < n.size(); ++j) {
    const double r = std::sqrt(n.modes[j].norm_squared());
    CHECK(n.amplitudes[j] == doctest::Approx(2.0 / r));
    trace += 4.0 / (r * r);
  }
  CHECK(n.trace() == doctest::Approx(trace));
}

TEST_CASE("noise validation") {
  NoiseModel n{{{1, 0}, {1, 0}}, {1.0, 1.0}};
  CHECK_THROWS_AS(n.validate(4), ConfigError);
  n = {{{0, 0}}, {1.0}};
  CHECK_THROWS_AS(n.validate(4), ConfigError);
  n = {{{1, 0}}, {-1.0}};
  CHECK_THROWS_AS(n.validate(4), ConfigError);
  n = {{{1, 0}}, {}};
  CHECK_THROWS_AS(n.validate(4), ConfigError);
}

TEST_CASE("increments: variance dt, keyed by mode and step") {
  const NoiseModel n{{{1, 0}, {0, 2}, {-1, 1}}, {0.5, 1.0, 2.0}};
  const double dt = 1.0 / 64;
  const int steps = 40000;
  const IncrementTable table = sample_increments(n, dt, steps, 77);
  std::vector<double> w(3);
  for (std::size_t j = 0; j < 3; ++j) {
    double s = 0.0;
    double s2 = 0.0;
    for (int k = 0; k < steps; ++k) {
      s += table(k, j);
      s2 += table(k, j) * table(k, j);
    }
    const double var = n.amplitudes[j] * n.amplitudes[j] * dt;
    CHECK(std::abs(s / steps) < 5 * std::sqrt(var / steps));
    CHECK(std::abs(s2 / steps - var) < 5 * var * std::sqrt(2.0 / steps));
  }
  standard_increments(n, dt, 123, 77, w);
  for (std::size_t j = 0; j < 3; ++j) {
    CHECK(table(123, j) == w[j] * n.amplitudes[j]);
  }
  // dropping a mode leaves the others' increments unchanged
  const NoiseModel sub{{{0, 2}}, {1.0}};
  double one = 0.0;
  standard_increments(sub, dt, 123, 77, std::span(&one, 1));
  CHECK(one == w[1]);
  CHECK_THROWS_AS(standard_increments(n, 0.0, 0, 1, w), std::invalid_argument);
}

TEST_CASE("g is exactly periodic and averages to the level") {
  const SigmaModel m = model(2);
  for (int k = 0; k < 64; ++k) {
    const double t = k / 64.0;
    CHECK(m.g(t + m.period) == m.g(t));
    CHECK(m.g(t + 7 * m.period) == m.g(t));
    CHECK(std::abs(m.g(t)) <= m.g_sup());
  }
  // trapezoid rule is exact for a trigonometric polynomial of degree 1
  const int q = 16;
  double s = 0.0;
  for (int k = 0; k < q; ++k) s += m.g(m.period * k / q);
  CHECK(s / q == doctest::Approx(m.g_mean()).epsilon(1e-15));
}

TEST_CASE("Lipschitz constant bounds sigma and is attained") {
  const int cut = 3;
  const SigmaModel m = model(cut);
  const KeyedRandom rng(5, Stream::Fields);
  std::vector<double> w(m.noise.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = rng.normal(j, 0);
  const double qw = sobolev_norm(noise_field(m.noise, cut, w), 0.0);
  const double lip = m.lipschitz_constant();
  double worst = 0.0;
  for (int p = 0; p < 1000; ++p) {
    SpectralField h1 = smooth_random_field(cut, 10 + 2 * p);
    SpectralField h2 = smooth_random_field(cut, 11 + 2 * p);
    h1 *= 0.5 * rng.uniform(p, 1) / sobolev_norm(h1, 0.0);
    h2 *= 1.5 * rng.uniform(p, 2) / sobolev_norm(h2, 0.0);
    const double t = rng.uniform(p, 3);
    const double num =
        sobolev_norm(apply_sigma(m, t, h1, w) - apply_sigma(m, t, h2, w), 0.0);
    const double den = sobolev_norm(h1 - h2, 0.0) * qw;
    worst = std::max(worst, num / den);
  }
  CHECK(worst <= lip);
  // near |h| = 1/sqrt(3), at a time where |g| is maximal, the ratio approaches L
  SpectralField h = smooth_random_field(cut, 3);
  h *= 1.0 / (std::sqrt(3.0) * sobolev_norm(h, 0.0));
  SpectralField h2 = h;
  h2 *= 1.0 + 1e-6;
  const double num =
      sobolev_norm(apply_sigma(m, 0.0, h, w) - apply_sigma(m, 0.0, h2, w), 0.0);
  CHECK(num / (sobolev_norm(h2 - h, 0.0) * qw) == doctest::Approx(lip).epsilon(1e-5));
}

TEST_CASE("averaged sigma equals the period average of sigma") {
  const int cut = 3;
  const SigmaModel m = model(cut);
  const SpectralField h = smooth_random_field(cut, 8);
  std::vector<double> w(m.noise.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = std::sin(1.0 + j);
  const int q = 32;
  SpectralField avg(cut);
  for (int k = 0; k < q; ++k) {
    avg.axpy(1.0 / q, apply_sigma(m, m.period * k / q, h, w));
  }
  const SpectralField bar = averaged_sigma(m, h, w);
  CHECK(sobolev_norm(avg - bar, 0.0) <= 1e-10);
}

TEST_CASE("sigma action and Hilbert-Schmidt norm") {
  const int cut = 2;
  SigmaModel m = model(cut);
  const SpectralField h = smooth_random_field(cut, 4);
  const double y = std::pow(sobolev_norm(h, 0.0), 2);
  std::vector<double> w(m.noise.size(), 0.0);
  w[3] = 1.0;
  const SpectralField s = apply_sigma(m, 0.1, h, w);
  SpectralField expect = SpectralField::basis(m.noise.modes[3], cut);
  expect *= m.g(0.1) * m.rho0 / (1.0 + y) * m.noise.amplitudes[3];
  CHECK(sobolev_norm(s - expect, 0.0) < 1e-16);
  CHECK(m.hilbert_schmidt(0.1, h) ==
        doctest::Approx(std::abs(m.g(0.1)) * m.rho0 / (1.0 + y) * std::sqrt(m.noise.trace())));
  m.gamma = 1.5;
  CHECK_THROWS_AS(m.validate(cut), ConfigError);
  m.gamma = 0.0;
  m.period = 0.0;
  CHECK_THROWS_AS(m.validate(cut), ConfigError);
}
