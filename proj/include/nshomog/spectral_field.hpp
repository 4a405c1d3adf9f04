#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "nshomog/mode_index.hpp"

namespace nshomog {

using Complex = std::complex<double>;
using Vec2c = std::array<Complex, 2>;

/// Enumeration of the half-lattice modes with max(|s1|,|s2|) <= N.
///
/// Storage order: (0,1)..(0,N), then s1 = 1..N with s2 = -N..N. The
/// conjugate half is implied by u_{-s} = conj(u_s).
class HalfLattice {
 public:
  explicit HalfLattice(int cutoff);

  int cutoff() const { return cutoff_; }
  std::size_t size() const {
    return static_cast<std::size_t>(2 * cutoff_ * cutoff_ + 2 * cutoff_);
  }

  bool contains(ModeIndex s) const {
    return !s.is_zero() && s.sup_norm() <= cutoff_;
  }
  /// Index of a stored (half-lattice) mode.
  std::size_t index(ModeIndex s) const;
  ModeIndex mode(std::size_t i) const;

 private:
  int cutoff_;
};

/// Arbitrary half-lattice coefficients (no divergence constraint). Input to
/// the Leray projection and output of grid analysis.
class Spectrum {
 public:
  explicit Spectrum(int cutoff);

  int cutoff() const { return lattice_.cutoff(); }
  const HalfLattice& lattice() const { return lattice_; }
  std::size_t size() const { return coeffs_.size(); }
  ModeIndex mode(std::size_t i) const { return lattice_.mode(i); }

  Vec2c& operator[](std::size_t i) { return coeffs_[i]; }
  const Vec2c& operator[](std::size_t i) const { return coeffs_[i]; }

  /// Coefficient at any s in Z^2 (conjugate for the lower half, zero at s = 0
  /// or beyond the cutoff).
  Vec2c at(ModeIndex s) const;
  /// Stores v at s, or conj(v) at -s when s is in the lower half.
  void set(ModeIndex s, const Vec2c& v);

  std::span<const Vec2c> coeffs() const { return coeffs_; }
  std::span<Vec2c> coeffs() { return coeffs_; }

  bool all_finite() const;

 private:
  HalfLattice lattice_;
  std::vector<Vec2c> coeffs_;
};

class SpectralField;
SpectralField leray_project(Spectrum raw);

/// Mean-zero, divergence-free real vector field on the 2-torus, truncated to
/// max(|s1|,|s2|) <= N. Every constructor and mutator preserves s . u_s = 0.
class SpectralField {
 public:
  explicit SpectralField(int cutoff) : data_(cutoff) {}

  /// The orthonormal basis vector e_s:
  ///   c_s s^perp sin(s.x) for s in Z^2_+, c_s s^perp cos(s.x) otherwise,
  /// with c_s = 1 / (sqrt(2) pi |s|).
  static SpectralField basis(ModeIndex s, int cutoff);

  int cutoff() const { return data_.cutoff(); }
  std::size_t size() const { return data_.size(); }
  ModeIndex mode(std::size_t i) const { return data_.mode(i); }
  const Vec2c& operator[](std::size_t i) const { return data_[i]; }
  Vec2c at(ModeIndex s) const { return data_.at(s); }
  const Spectrum& spectrum() const { return data_; }

  /// Adds c * e_s.
  void add_basis(ModeIndex s, double c);

  /// Multiplies mode i by factor(mode(i)); real factors keep u divergence-free.
  template <class Factor>
  SpectralField& scale_modes(Factor&& factor) {
    for (std::size_t i = 0; i < data_.size(); ++i) {
      const double f = factor(data_.mode(i));
      data_[i][0] *= f;
      data_[i][1] *= f;
    }
    return *this;
  }

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double a);
  /// this += a * x
  SpectralField& axpy(double a, const SpectralField& x);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) {
    return a += b;
  }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) {
    return a -= b;
  }
  friend SpectralField operator*(double a, SpectralField u) { return u *= a; }

  /// max over modes of |s . u_s| / |u_s| (0 for empty modes).
  double divergence_residual() const;

  friend bool operator==(const SpectralField& a, const SpectralField& b);

 private:
  friend SpectralField leray_project(Spectrum raw);
  explicit SpectralField(Spectrum projected) : data_(std::move(projected)) {}

  Spectrum data_;
};

/// Per mode: (I - s s^T / |s|^2) raw_s. Modes already divergence-free to
/// working precision pass through unchanged, so the projection is exactly
/// idempotent. Throws std::invalid_argument on non-finite input.
SpectralField leray_project(Spectrum raw);

/// Per mode |s|^2 u_s.
SpectralField stokes_apply(const SpectralField& u);

/// (sum over the full lattice of |u_k|^2 |k|^{2r})^{1/2}, r >= -1.
double sobolev_norm(const Spectrum& u, double r);
double sobolev_norm(const SpectralField& u, double r);

/// sum over the full lattice of Re(u_s . conj(v_s)). Equal to the torus
/// average (2 pi)^{-2} int u.v dx.
double inner_product(const SpectralField& u, const SpectralField& v);
double inner_product(const Spectrum& u, const Spectrum& v);

/// Scalar amplitude alpha_s = u_s . s^perp / |s| of a stored mode. Together
/// with the reality convention it determines u at +-s.
Complex mode_amplitude(const SpectralField& u, ModeIndex s);

/// Coordinate int_{T^2} u . e_s dx in the orthonormal basis.
double basis_coordinate(const SpectralField& u, ModeIndex s);

/// JSON form {cutoff, modes: [{s:[s1,s2], re:[a,b], im:[c,d]}]} listing the
/// stored half-lattice modes.
nlohmann::json to_json(const SpectralField& u);
/// Parses the JSON form; throws std::invalid_argument on malformed or
/// non-divergence-free input.
SpectralField spectral_field_from_json(const nlohmann::json& j);

}  // namespace nshomog
