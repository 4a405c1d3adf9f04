#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nshomog/grid_field.hpp"
#include "nshomog/harness.hpp"
#include "nshomog/nonlinear.hpp"

using namespace nshomog;

namespace {

// Truncated (u . grad) v by direct convolution over the full lattice:
//   [(u . grad) v]_k = sum_{p + q = k} (u_p . i q) v_q.
Spectrum convolution_oracle(const SpectralField& u, const SpectralField& v) {
  const int n = u.cutoff();
  Spectrum out(n);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const ModeIndex k = out.mode(i);
    Vec2c acc{};
    for (int p1 = -n; p1 <= n; ++p1) {
      for (int p2 = -n; p2 <= n; ++p2) {
        const ModeIndex p{p1, p2};
        const ModeIndex q{k.s1 - p1, k.s2 - p2};
        if (p.is_zero() || q.is_zero() || q.sup_norm() > n) continue;
        const Vec2c up = u.at(p);
        const Vec2c vq = v.at(q);
        const Complex dot = Complex(0, 1) * (up[0] * double(q.s1) + up[1] * double(q.s2));
        acc[0] += dot * vq[0];
        acc[1] += dot * vq[1];
      }
    }
    out[i] = acc;
  }
  return out;
}

double max_diff(const Spectrum& a, const Spectrum& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max({d, std::abs(a[i][0] - b[i][0]), std::abs(a[i][1] - b[i][1])});
  }
  return d;
}

}  // namespace

TEST_CASE("advection of e_(1,0) + e_(0,1) matches the closed form") {
  const int n = 4;
  SpectralField u(n);
  u.add_basis({1, 0}, 1.0);
  u.add_basis({0, 1}, 1.0);
  AdvectionWorkspace ws(n, DealiasRule::padded_size(n));
  const Spectrum raw = ws.advect(u, u);
  // (u . grad) u = -c^2 (sin x1 cos x2, cos x1 sin x2), c = 1 / (sqrt 2 pi)
  const double c2 = 1.0 / (2.0 * std::numbers::pi * std::numbers::pi);
  const GridField g = to_grid(raw, 16);
  double err = 0.0;
  for (int j1 = 0; j1 < 16; ++j1) {
    for (int j2 = 0; j2 < 16; ++j2) {
      const double x1 = 2 * std::numbers::pi * j1 / 16;
      const double x2 = 2 * std::numbers::pi * j2 / 16;
      err = std::max(err, std::abs(g.u1[g.index(j1, j2)] + c2 * std::sin(x1) * std::cos(x2)));
      err = std::max(err, std::abs(g.u2[g.index(j1, j2)] + c2 * std::cos(x1) * std::sin(x2)));
    }
  }
  CHECK(err < 1e-15);
  // the product is a pure gradient, so B(u, u) = 0
  CHECK(sobolev_norm(bilinear(u, u), 0.0) < 1e-17);
}

TEST_CASE("pseudospectral advection equals the spectral convolution") {
  for (int n : {3, 5}) {
    const SpectralField u = smooth_random_field(n, 21, 1.0);
    const SpectralField v = smooth_random_field(n, 22, 1.0);
    const Spectrum oracle = convolution_oracle(u, v);
    for (int m : {3 * n + 1, 4 * n + 3}) {
      AdvectionWorkspace ws(n, m);
      CHECK(max_diff(ws.advect(u, v), oracle) < 1e-14);
    }
    CHECK(sobolev_norm(bilinear(u, v) - leray_project(oracle), 0.0) < 1e-14);
  }
}

TEST_CASE("B(e_s, e_s) vanishes for single modes") {
  const int n = 6;
  for (ModeIndex s : {ModeIndex{1, 0}, ModeIndex{2, -3}, ModeIndex{-4, 1}, ModeIndex{5, 5}}) {
    const SpectralField e = SpectralField::basis(s, n);
    CHECK(sobolev_norm(bilinear(e, e), 0.0) < 1e-15);
  }
}

TEST_CASE("trilinear identities hold on the dealiased grid") {
  for (int n : {8, 16}) {
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const SpectralField u = smooth_random_field(n, 100 + 3 * t, 1.0);
      const SpectralField v = smooth_random_field(n, 101 + 3 * t, 1.0);
      const SpectralField w = smooth_random_field(n, 102 + 3 * t, 1.0);
      const IdentityReport r = identity_report(u, v, w);
      worst = std::max({worst, r.residual_i, r.residual_skew, r.residual_ii});
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("an undersized grid aliases and breaks the identities") {
  const int n = 8;
  const SpectralField u = smooth_random_field(n, 7, 1.0);
  const SpectralField v = smooth_random_field(n, 8, 1.0);
  const SpectralField w = smooth_random_field(n, 9, 1.0);
  const IdentityReport r = identity_report(u, v, w, n + 1);
  CHECK(std::max({r.residual_i, r.residual_skew, r.residual_ii}) > 1e-6);
  CHECK(bilinear(u, v, n + 1) != bilinear(u, v));
}

TEST_CASE("drift with a constant potential adds q u") {
  const int n = 4;
  const SpectralField u = smooth_random_field(n, 31, 1.0);
  const int m = DealiasRule::padded_size(n);
  AdvectionWorkspace ws(n, m);
  const std::vector<double> q(static_cast<std::size_t>(m) * m, 0.75);
  const Spectrum d = ws.drift(u, q);
  const Spectrum a = ws.advect(u, u);
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (int c = 0; c < 2; ++c) {
      CHECK(std::abs(d[i][c] - (0.75 * u[i][c] - a[i][c])) < 1e-15);
    }
  }
  CHECK_THROWS_AS(ws.drift(u, std::vector<double>(3, 0.0)), std::invalid_argument);
}

TEST_CASE("identity csv schema") {
  const std::vector<IdentityRow> rows{{0, {1e-17, 2e-17, 0.0}}};
  const std::string csv = identity_csv(rows);
  CHECK(csv.rfind("id,residual_i,residual_skew,residual_ii\n", 0) == 0);
  CHECK(csv.find("0,1e-17,2e-17,0\n") != std::string::npos);
}
