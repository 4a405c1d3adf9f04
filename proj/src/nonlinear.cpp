#include "nshomog/nonlinear.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "nshomog/errors.hpp"
#include "nshomog/csv.hpp"

namespace nshomog {

namespace {

constexpr Complex kI{0.0, 1.0};

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

}  // namespace

AdvectionWorkspace::AdvectionWorkspace(int cutoff, int resolution)
    : cutoff_(cutoff), fft_(resolution) {
  if (cutoff < 1) throw std::invalid_argument("cutoff must be positive");
  const std::size_t n = fft_.points();
  for (auto* b : {&u1_, &u2_, &d11_, &d12_, &d21_, &d22_, &f1_, &f2_}) {
    b->assign(n, 0.0);
  }
}

void AdvectionWorkspace::load_velocity(const SpectralField& u) {
  const auto& lat = u.spectrum().lattice();
  fft_.synthesize(lat, [&](std::size_t i) { return u[i][0]; }, u1_);
  fft_.synthesize(lat, [&](std::size_t i) { return u[i][1]; }, u2_);
}

void AdvectionWorkspace::load_gradient(const SpectralField& v) {
  // d_jk = d_k v_j, spectrally i s_k v_j
  const auto& lat = v.spectrum().lattice();
  auto grad = [&](int comp, int dir, std::vector<double>& out) {
    fft_.synthesize(
        lat,
        [&](std::size_t i) {
          const ModeIndex s = lat.mode(i);
          const double sk = dir == 0 ? s.s1 : s.s2;
          return kI * sk * v[i][comp];
        },
        out);
  };
  grad(0, 0, d11_);
  grad(0, 1, d12_);
  grad(1, 0, d21_);
  grad(1, 1, d22_);
}

Spectrum AdvectionWorkspace::analyze_products() {
  for (std::size_t k = 0; k < f1_.size(); ++k) {
    if (!std::isfinite(f1_[k]) || !std::isfinite(f2_[k])) {
      throw NumericalError("non-finite value in pseudospectral product on the " +
                           std::to_string(resolution()) + "^2 grid");
    }
  }
  Spectrum out(cutoff_);
  fft_.analyze(f1_, out.lattice(),
               [&](std::size_t i, Complex c) { out[i][0] = c; });
  fft_.analyze(f2_, out.lattice(),
               [&](std::size_t i, Complex c) { out[i][1] = c; });
  return out;
}

Spectrum AdvectionWorkspace::advect(const SpectralField& u,
                                    const SpectralField& v) {
  if (u.cutoff() != cutoff_ || v.cutoff() != cutoff_) {
    throw std::invalid_argument("advect: cutoff mismatch");
  }
  load_velocity(u);
  load_gradient(v);
  for (std::size_t k = 0; k < f1_.size(); ++k) {
    f1_[k] = u1_[k] * d11_[k] + u2_[k] * d12_[k];
    f2_[k] = u1_[k] * d21_[k] + u2_[k] * d22_[k];
  }
  return analyze_products();
}

Spectrum AdvectionWorkspace::drift(const SpectralField& u,
                                   std::span<const double> potential) {
  if (u.cutoff() != cutoff_) {
    throw std::invalid_argument("drift: cutoff mismatch");
  }
  if (potential.size() != f1_.size()) {
    throw std::invalid_argument("drift: potential sampled on the wrong grid");
  }
  load_velocity(u);
  load_gradient(u);
  for (std::size_t k = 0; k < f1_.size(); ++k) {
    const double q = potential[k];
    f1_[k] = q * u1_[k] - (u1_[k] * d11_[k] + u2_[k] * d12_[k]);
    f2_[k] = q * u2_[k] - (u1_[k] * d21_[k] + u2_[k] * d22_[k]);
  }
  return analyze_products();
}

SpectralField bilinear(const SpectralField& u, const SpectralField& v,
                       int resolution) {
  AdvectionWorkspace ws(u.cutoff(), resolution);
  return leray_project(ws.advect(u, v));
}

SpectralField bilinear(const SpectralField& u, const SpectralField& v) {
  return bilinear(u, v, DealiasRule::padded_size(u.cutoff()));
}

IdentityReport identity_report(const SpectralField& u, const SpectralField& v,
                               const SpectralField& w, int resolution) {
  AdvectionWorkspace ws(u.cutoff(), resolution);
  const SpectralField buv = leray_project(ws.advect(u, v));
  const SpectralField buw = leray_project(ws.advect(u, w));
  const SpectralField buu = leray_project(ws.advect(u, u));
  const SpectralField lap_u = -1.0 * stokes_apply(u);

  const double u1 = sobolev_norm(u, 1.0);
  const double v1 = sobolev_norm(v, 1.0);
  const double w1 = sobolev_norm(w, 1.0);
  const double u2 = sobolev_norm(u, 2.0);

  IdentityReport r;
  r.residual_i = safe_ratio(std::abs(inner_product(buv, v)), u1 * v1 * v1);
  r.residual_skew = safe_ratio(
      std::abs(inner_product(buv, w) + inner_product(buw, v)), u1 * v1 * w1);
  r.residual_ii = safe_ratio(std::abs(inner_product(buu, lap_u)), u1 * u1 * u2);
  return r;
}

IdentityReport identity_report(const SpectralField& u, const SpectralField& v,
                               const SpectralField& w) {
  return identity_report(u, v, w, DealiasRule::padded_size(u.cutoff()));
}

std::string identity_csv(std::span<const IdentityRow> rows) {
  std::ostringstream os;
  os << "id,residual_i,residual_skew,residual_ii\n";
  for (const auto& row : rows) {
    os << row.id << ',' << format_double(row.report.residual_i) << ','
       << format_double(row.report.residual_skew) << ','
       << format_double(row.report.residual_ii) << '\n';
  }
  return os.str();
}

}  // namespace nshomog
