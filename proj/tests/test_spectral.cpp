#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "nshomog/errors.hpp"
#include "nshomog/fourier.hpp"
#include "nshomog/grid_field.hpp"
#include "nshomog/harness.hpp"
#include "nshomog/spectral_field.hpp"

using namespace nshomog;

namespace {

constexpr double kPi = std::numbers::pi;

// e_s evaluated straight from its definition.
std::array<double, 2> basis_at(ModeIndex s, double x1, double x2) {
  const double c = 1.0 / (std::sqrt(2.0) * kPi * std::sqrt(s.norm_squared()));
  const double arg = s.s1 * x1 + s.s2 * x2;
  const double f = in_half_lattice(s) ? std::sin(arg) : std::cos(arg);
  return {c * -s.s2 * f, c * s.s1 * f};
}

}  // namespace

TEST_CASE("half lattice enumeration is a bijection") {
  for (int n : {1, 2, 5, 8}) {
    const HalfLattice lat(n);
    CHECK(lat.size() == static_cast<std::size_t>(2 * n * n + 2 * n));
    std::set<ModeIndex> seen;
    for (std::size_t i = 0; i < lat.size(); ++i) {
      const ModeIndex s = lat.mode(i);
      CHECK(in_half_lattice(s));
      CHECK(s.sup_norm() <= n);
      CHECK(lat.index(s) == i);
      seen.insert(s);
    }
    CHECK(seen.size() == lat.size());
  }
}

TEST_CASE("basis vectors match the closed form on the grid") {
  const int n = 4;
  const int m = 16;
  for (ModeIndex s : {ModeIndex{1, 0}, ModeIndex{0, 3}, ModeIndex{-2, 1},
                      ModeIndex{3, -4}, ModeIndex{-1, -1}}) {
    const GridField g = to_grid(SpectralField::basis(s, n), m);
    double err = 0.0;
    for (int j1 = 0; j1 < m; ++j1) {
      for (int j2 = 0; j2 < m; ++j2) {
        const auto e = basis_at(s, 2 * kPi * j1 / m, 2 * kPi * j2 / m);
        err = std::max(err, std::abs(g.u1[g.index(j1, j2)] - e[0]));
        err = std::max(err, std::abs(g.u2[g.index(j1, j2)] - e[1]));
      }
    }
    CHECK(err < 1e-14);
    const GridField closed = synthesize_basis(s, m);
    for (std::size_t k = 0; k < closed.u1.size(); ++k) {
      CHECK(closed.u1[k] == doctest::Approx(g.u1[k]).epsilon(1e-12));
    }
  }
}

TEST_CASE("basis is orthonormal in the unnormalized L2 product") {
  const int n = 3;
  for (int a1 = -n; a1 <= n; ++a1) {
    for (int a2 = -n; a2 <= n; ++a2) {
      const ModeIndex s{a1, a2};
      if (s.is_zero()) continue;
      const SpectralField e = SpectralField::basis(s, n);
      CHECK(e.divergence_residual() == 0.0);
      for (int b1 = -n; b1 <= n; ++b1) {
        for (int b2 = -n; b2 <= n; ++b2) {
          const ModeIndex t{b1, b2};
          if (t.is_zero()) continue;
          const double expect = s == t ? 1.0 : 0.0;
          CHECK(basis_coordinate(e, t) == doctest::Approx(expect).epsilon(1e-14).scale(1.0));
        }
      }
    }
  }
  // the grid trapezoid rule agrees
  const GridField g = synthesize_basis({2, -1}, 16);
  CHECK(grid_integral_dot(g, g) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("Stokes operator is exact on basis vectors") {
  const int n = 6;
  for (int s1 = -n; s1 <= n; ++s1) {
    for (int s2 = -n; s2 <= n; ++s2) {
      const ModeIndex s{s1, s2};
      if (s.is_zero()) continue;
      const SpectralField e = SpectralField::basis(s, n);
      SpectralField expect = e;
      expect *= static_cast<double>(s.norm_squared());
      CHECK(stokes_apply(e) == expect);
    }
  }
}

TEST_CASE("Leray projection: idempotent, kills gradients, keeps solenoidal") {
  const int n = 8;
  Spectrum raw(n);
  Spectrum grad(n);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const ModeIndex s = raw.mode(i);
    raw[i] = {Complex(std::sin(1.0 + i), std::cos(2.0 * i)),
              Complex(std::cos(3.0 + i), std::sin(0.5 * i))};
    const Complex phi(std::cos(0.7 * i), std::sin(1.3 * i));
    grad[i] = {Complex(0, s.s1) * phi, Complex(0, s.s2) * phi};
  }
  const SpectralField p = leray_project(raw);
  CHECK(leray_project(p.spectrum()) == p);
  CHECK(p.divergence_residual() < 1e-15);
  CHECK(sobolev_norm(leray_project(grad), 0.0) < 1e-15 * sobolev_norm(grad, 0.0));

  const SpectralField u = smooth_random_field(n, 5);
  CHECK(leray_project(u.spectrum()) == u);

  // orthogonality: raw - P raw is orthogonal to P raw
  Spectrum rest = raw;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    rest[i][0] -= p[i][0];
    rest[i][1] -= p[i][1];
  }
  CHECK(std::abs(inner_product(rest, p.spectrum())) < 1e-14 * sobolev_norm(raw, 0.0) * sobolev_norm(raw, 0.0));

  Spectrum bad(n);
  bad[0][0] = Complex(std::nan(""), 0.0);
  CHECK_THROWS_AS(leray_project(bad), std::invalid_argument);
}

TEST_CASE("grid round trip and Parseval") {
  for (int n : {4, 8, 16}) {
    const SpectralField u = smooth_random_field(n, 11, 1.0);
    const double norm = sobolev_norm(u, 0.0);
    for (int m : {2 * n + 2, 3 * n + 1, 4 * n + 7}) {
      const GridField g = to_grid(u, m);
      const SpectralField back = to_velocity(g, n);
      CHECK(sobolev_norm(back - u, 0.0) <= 1e-12 * norm);
      CHECK(std::abs(grid_mean_square(g) - norm * norm) <= 1e-10 * norm * norm);
    }
    CHECK_THROWS_AS(to_grid(u, 2 * n + 1), ResolutionError);
    CHECK_THROWS_AS(to_spectral(GridField(2 * n + 1), n), ResolutionError);
  }
}

TEST_CASE("fft-friendly sizes") {
  CHECK(fft_friendly_size(1) == 1);
  CHECK(fft_friendly_size(7) == 8);
  CHECK(fft_friendly_size(25) == 25);
  CHECK(fft_friendly_size(49) == 50);
  CHECK(fft_friendly_size(97) == 100);
  for (int n = 1; n < 300; ++n) {
    int m = fft_friendly_size(n);
    CHECK(m >= n);
    for (int p : {2, 3, 5}) {
      while (m % p == 0) m /= p;
    }
    CHECK(m == 1);
  }
}

TEST_CASE("Sobolev norms and inner products") {
  const int n = 5;
  const SpectralField e = SpectralField::basis({3, 4}, n);
  // mode-sum norm is the torus average: |e_s|^2 = 1 / (4 pi^2)
  const double base = 1.0 / (4 * kPi * kPi);
  CHECK(std::pow(sobolev_norm(e, 0.0), 2) == doctest::Approx(base).epsilon(1e-15));
  CHECK(std::pow(sobolev_norm(e, 1.0), 2) == doctest::Approx(25 * base).epsilon(1e-15));
  CHECK(std::pow(sobolev_norm(e, 2.0), 2) == doctest::Approx(625 * base).epsilon(1e-15));
  CHECK(std::pow(sobolev_norm(e, -1.0), 2) == doctest::Approx(base / 25).epsilon(1e-15));
  CHECK(std::pow(sobolev_norm(e, 0.5), 2) == doctest::Approx(5 * base).epsilon(1e-14));
  CHECK_THROWS_AS(sobolev_norm(e, -1.5), std::domain_error);
  CHECK_THROWS_AS(inner_product(e, SpectralField(n + 1)), std::invalid_argument);

  const SpectralField u = smooth_random_field(n, 3);
  const SpectralField v = smooth_random_field(n, 4);
  CHECK(inner_product(u, v) == inner_product(v, u));
  const GridField gu = to_grid(u, 16);
  const GridField gv = to_grid(v, 16);
  CHECK(inner_product(u, v) ==
        doctest::Approx(grid_integral_dot(gu, gv) / (4 * kPi * kPi)).epsilon(1e-12));
}

TEST_CASE("mode amplitude determines the mode") {
  const int n = 4;
  SpectralField u(n);
  u.add_basis({2, 1}, 0.3);
  u.add_basis({-2, -1}, -0.7);
  const Complex a = mode_amplitude(u, {2, 1});
  const double c = 1.0 / (std::sqrt(2.0) * kPi * std::sqrt(5.0));
  // sin part -> -i c |s| / 2 * 0.3, cos part -> -c |s| / 2 * (-0.7)
  CHECK(a.real() == doctest::Approx(0.7 * c * std::sqrt(5.0) / 2).epsilon(1e-14));
  CHECK(a.imag() == doctest::Approx(-0.3 * c * std::sqrt(5.0) / 2).epsilon(1e-14));
}

TEST_CASE("L4 norm against brute-force quadrature") {
  const int n = 4;
  const SpectralField u = smooth_random_field(n, 9);
  const GridField g = to_grid(u, 64);
  double s = 0.0;
  for (std::size_t k = 0; k < g.u1.size(); ++k) {
    const double m2 = g.u1[k] * g.u1[k] + g.u2[k] * g.u2[k];
    s += m2 * m2;
  }
  CHECK(l4_norm(u) == doctest::Approx(std::pow(s / g.u1.size(), 0.25)).epsilon(1e-12));
}

TEST_CASE("JSON round trip and validation") {
  const SpectralField u = smooth_random_field(3, 2);
  const nlohmann::json j = to_json(u);
  CHECK(spectral_field_from_json(j) == u);

  nlohmann::json bad = j;
  // (1,0) mode with a component along s: not divergence-free
  for (auto& m : bad["modes"]) {
    if (m["s"] == nlohmann::json::array({1, 0})) m["re"] = {1.0, 0.0};
  }
  CHECK_THROWS_AS(spectral_field_from_json(bad), std::invalid_argument);
  CHECK_THROWS_AS(spectral_field_from_json(nlohmann::json::parse("{\"x\":1}")),
                  std::invalid_argument);
}
