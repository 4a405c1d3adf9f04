#include "nshomog/spectral_field.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace nshomog {

namespace {

Vec2c conj(const Vec2c& v) { return {std::conj(v[0]), std::conj(v[1])}; }

bool finite(const Vec2c& v) {
  return std::isfinite(v[0].real()) && std::isfinite(v[0].imag()) &&
         std::isfinite(v[1].real()) && std::isfinite(v[1].imag());
}

double norm_sq(const Vec2c& v) { return std::norm(v[0]) + std::norm(v[1]); }

void require_same_cutoff(int a, int b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": cutoff mismatch (" +
                                std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

}  // namespace

HalfLattice::HalfLattice(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 1) {
    throw std::invalid_argument("spectral cutoff must be positive, got " +
                                std::to_string(cutoff));
  }
}

std::size_t HalfLattice::index(ModeIndex s) const {
  if (!in_half_lattice(s) || s.sup_norm() > cutoff_) {
    throw std::out_of_range("mode " + to_string(s) +
                            " is not a stored half-lattice mode");
  }
  if (s.s1 == 0) return static_cast<std::size_t>(s.s2 - 1);
  return static_cast<std::size_t>(cutoff_ + (s.s1 - 1) * (2 * cutoff_ + 1) +
                                  (s.s2 + cutoff_));
}

ModeIndex HalfLattice::mode(std::size_t i) const {
  const auto n = static_cast<std::size_t>(cutoff_);
  if (i < n) return {0, static_cast<int>(i) + 1};
  const std::size_t j = i - n;
  const std::size_t row = 2 * n + 1;
  return {static_cast<int>(j / row) + 1,
          static_cast<int>(j % row) - cutoff_};
}

Spectrum::Spectrum(int cutoff)
    : lattice_(cutoff), coeffs_(lattice_.size(), Vec2c{}) {}

Vec2c Spectrum::at(ModeIndex s) const {
  if (!lattice_.contains(s)) return Vec2c{};
  if (in_half_lattice(s)) return coeffs_[lattice_.index(s)];
  return conj(coeffs_[lattice_.index(-s)]);
}

void Spectrum::set(ModeIndex s, const Vec2c& v) {
  if (!lattice_.contains(s)) {
    throw std::out_of_range("mode " + to_string(s) + " outside cutoff " +
                            std::to_string(cutoff()));
  }
  if (in_half_lattice(s)) {
    coeffs_[lattice_.index(s)] = v;
  } else {
    coeffs_[lattice_.index(-s)] = conj(v);
  }
}

bool Spectrum::all_finite() const {
  for (const auto& v : coeffs_) {
    if (!finite(v)) return false;
  }
  return true;
}

SpectralField SpectralField::basis(ModeIndex s, int cutoff) {
  SpectralField e(cutoff);
  e.add_basis(s, 1.0);
  return e;
}

void SpectralField::add_basis(ModeIndex s, double c) {
  if (!data_.lattice().contains(s)) {
    throw std::out_of_range("basis mode " + to_string(s) +
                            " outside cutoff " + std::to_string(cutoff()));
  }
  // sin(p.x) = (e^{ipx} - e^{-ipx}) / 2i  ->  -i/2 at p
  // cos(p.x) = (e^{ipx} + e^{-ipx}) / 2   ->  1/2 at p, and s^perp = -p^perp
  const ModeIndex p = in_half_lattice(s) ? s : -s;
  const ModeIndex pp = p.perp();
  const double cs =
      1.0 / (std::numbers::sqrt2 * std::numbers::pi *
             std::sqrt(static_cast<double>(p.norm_squared())));
  const Complex w = in_half_lattice(s) ? Complex(0.0, -0.5 * c * cs)
                                       : Complex(-0.5 * c * cs, 0.0);
  auto& v = data_[data_.lattice().index(p)];
  v[0] += w * static_cast<double>(pp.s1);
  v[1] += w * static_cast<double>(pp.s2);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_cutoff(cutoff(), other.cutoff(), "SpectralField +=");
  for (std::size_t i = 0; i < size(); ++i) {
    data_[i][0] += other.data_[i][0];
    data_[i][1] += other.data_[i][1];
  }
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_cutoff(cutoff(), other.cutoff(), "SpectralField -=");
  for (std::size_t i = 0; i < size(); ++i) {
    data_[i][0] -= other.data_[i][0];
    data_[i][1] -= other.data_[i][1];
  }
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (auto& v : data_.coeffs()) {
    v[0] *= a;
    v[1] *= a;
  }
  return *this;
}

SpectralField& SpectralField::axpy(double a, const SpectralField& x) {
  require_same_cutoff(cutoff(), x.cutoff(), "SpectralField::axpy");
  for (std::size_t i = 0; i < size(); ++i) {
    data_[i][0] += a * x.data_[i][0];
    data_[i][1] += a * x.data_[i][1];
  }
  return *this;
}

double SpectralField::divergence_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double mag = std::sqrt(norm_sq(data_[i]));
    if (mag == 0.0) continue;
    const ModeIndex s = mode(i);
    const Complex div = static_cast<double>(s.s1) * data_[i][0] +
                        static_cast<double>(s.s2) * data_[i][1];
    worst = std::max(worst, std::abs(div) / mag);
  }
  return worst;
}

bool operator==(const SpectralField& a, const SpectralField& b) {
  if (a.cutoff() != b.cutoff()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

SpectralField leray_project(Spectrum raw) {
  if (!raw.all_finite()) {
    throw std::invalid_argument("leray_project: non-finite coefficient");
  }
  constexpr double kPassThrough = 8.0 * std::numeric_limits<double>::epsilon();
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const ModeIndex s = raw.mode(i);
    auto& v = raw[i];
    const double s1 = s.s1;
    const double s2 = s.s2;
    const Complex div = s1 * v[0] + s2 * v[1];
    const double scale = std::sqrt(static_cast<double>(s.norm_squared()) *
                                   norm_sq(v));
    if (std::abs(div) <= kPassThrough * scale) continue;
    // Rebuild along s^perp: the result has |s . v| of a few ulps, inside the
    // pass-through band, so a second projection is the identity.
    const Complex c = (s1 * v[1] - s2 * v[0]) / static_cast<double>(s.norm_squared());
    v[0] = -s2 * c;
    v[1] = s1 * c;
  }
  return SpectralField(std::move(raw));
}

SpectralField stokes_apply(const SpectralField& u) {
  SpectralField out = u;
  out.scale_modes(
      [](ModeIndex s) { return static_cast<double>(s.norm_squared()); });
  return out;
}

double sobolev_norm(const Spectrum& u, double r) {
  if (!(r >= -1.0)) {
    throw std::domain_error("sobolev_norm: order must be >= -1");
  }
  const HalfLattice& lat = u.lattice();
  auto weight = [r](double k2) {
    if (r == 0.0) return 1.0;
    if (r == 1.0) return k2;
    if (r == 2.0) return k2 * k2;
    if (r == -1.0) return 1.0 / k2;
    return std::pow(k2, r);
  };
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sum += norm_sq(u[i]) * weight(lat.mode(i).norm_squared());
  }
  return std::sqrt(2.0 * sum);
}

double sobolev_norm(const SpectralField& u, double r) {
  return sobolev_norm(u.spectrum(), r);
}

double inner_product(const Spectrum& u, const Spectrum& v) {
  require_same_cutoff(u.cutoff(), v.cutoff(), "inner_product");
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    sum += (u[i][0] * std::conj(v[i][0]) + u[i][1] * std::conj(v[i][1]))
               .real();
  }
  return 2.0 * sum;
}

double inner_product(const SpectralField& u, const SpectralField& v) {
  return inner_product(u.spectrum(), v.spectrum());
}

Complex mode_amplitude(const SpectralField& u, ModeIndex s) {
  if (!in_half_lattice(s)) {
    throw std::invalid_argument("mode_amplitude: " + to_string(s) +
                                " is not a half-lattice mode");
  }
  const Vec2c v = u.at(s);
  const ModeIndex p = s.perp();
  const double len = std::sqrt(static_cast<double>(s.norm_squared()));
  return (static_cast<double>(p.s1) * v[0] + static_cast<double>(p.s2) * v[1]) /
         len;
}

double basis_coordinate(const SpectralField& u, ModeIndex s) {
  const double area = 4.0 * std::numbers::pi * std::numbers::pi;
  return area * inner_product(u, SpectralField::basis(s, u.cutoff()));
}

nlohmann::json to_json(const SpectralField& u) {
  nlohmann::json modes = nlohmann::json::array();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const ModeIndex s = u.mode(i);
    const Vec2c& v = u[i];
    modes.push_back({{"s", {s.s1, s.s2}},
                     {"re", {v[0].real(), v[1].real()}},
                     {"im", {v[0].imag(), v[1].imag()}}});
  }
  return {{"cutoff", u.cutoff()}, {"modes", std::move(modes)}};
}

SpectralField spectral_field_from_json(const nlohmann::json& j) {
  try {
    const int cutoff = j.at("cutoff").get<int>();
    Spectrum raw(cutoff);
    for (const auto& m : j.at("modes")) {
      const auto s = m.at("s").get<std::array<int, 2>>();
      const auto re = m.at("re").get<std::array<double, 2>>();
      const auto im = m.at("im").get<std::array<double, 2>>();
      const ModeIndex mode{s[0], s[1]};
      if (!in_half_lattice(mode)) {
        throw std::invalid_argument("mode " + to_string(mode) +
                                    " is not a half-lattice mode");
      }
      raw.set(mode, Vec2c{Complex(re[0], im[0]), Complex(re[1], im[1])});
    }
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const ModeIndex s = raw.mode(i);
      const Complex div = static_cast<double>(s.s1) * raw[i][0] +
                          static_cast<double>(s.s2) * raw[i][1];
      if (std::abs(div) > 1e-12 * std::sqrt(norm_sq(raw[i]))) {
        throw std::invalid_argument("mode " + to_string(s) +
                                    " is not divergence-free");
      }
    }
    SpectralField u = leray_project(std::move(raw));
    return u;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed spectral field: ") +
                                e.what());
  }
}

}  // namespace nshomog
