#include "nshomog/random_media.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nshomog/errors.hpp"
#include "nshomog/fourier.hpp"
#include "nshomog/rng.hpp"

namespace nshomog {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int wrap(long long k, int m) {
  const long long r = k % m;
  return static_cast<int>(r < 0 ? r + m : r);
}

}  // namespace

EpsilonScale::EpsilonScale(int n) : n_(n) {
  if (n < 1) {
    throw ConfigError("epsilon must be 1/n for an integer n >= 1, got n = " +
                      std::to_string(n));
  }
}

EpsilonScale EpsilonScale::from_value(double eps) {
  if (!(eps > 0.0) || !(eps <= 1.0)) {
    throw ConfigError("epsilon = " + std::to_string(eps) +
                      " is not of the form 1/n (integer n >= 1)");
  }
  const double inv = 1.0 / eps;
  const double n = std::round(inv);
  if (std::abs(inv - n) > 1e-9 * n) {
    throw ConfigError("epsilon = " + std::to_string(eps) +
                      " is not of the form 1/n (integer n >= 1); q(x/eps) "
                      "must stay periodic on the torus");
  }
  return EpsilonScale(static_cast<int>(n));
}

EpsilonScale EpsilonScale::parse(const std::string& text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string::npos) return from_value(std::stod(text));
    const double num = std::stod(text.substr(0, slash));
    const double den = std::stod(text.substr(slash + 1));
    if (num != 1.0) return from_value(num / den);
    if (den != std::round(den)) return from_value(num / den);
    return EpsilonScale(static_cast<int>(den));
  } catch (const std::logic_error&) {
    throw ConfigError("cannot parse epsilon '" + text +
                      "' (expected 1/n or a decimal equal to 1/n)");
  }
}

double PotentialSpec::bound() const {
  double b = std::abs(a0);
  for (const auto& c : components) b += std::abs(c.amplitude);
  return b;
}

int PotentialSpec::max_frequency() const {
  int k = 0;
  for (const auto& c : components) k = std::max(k, c.k.sup_norm());
  return k;
}

void PotentialSpec::validate() const {
  if (!std::isfinite(a0)) throw ConfigError("potential a0 must be finite");
  for (const auto& c : components) {
    if (c.k.is_zero()) {
      throw ConfigError("potential component wavevector must be nonzero");
    }
    if (!std::isfinite(c.amplitude)) {
      throw ConfigError("potential component amplitude must be finite");
    }
  }
}

PotentialRealization::PotentialRealization(PotentialSpec spec,
                                           std::vector<double> phases)
    : spec_(std::move(spec)), phases_(std::move(phases)) {
  spec_.validate();
  if (phases_.size() != spec_.components.size()) {
    throw std::invalid_argument("one phase per potential component required");
  }
}

double PotentialRealization::value(double x1, double x2) const {
  double q = spec_.a0;
  for (std::size_t j = 0; j < phases_.size(); ++j) {
    const auto& c = spec_.components[j];
    q += c.amplitude * std::cos(c.k.s1 * x1 + c.k.s2 * x2 + phases_[j]);
  }
  return q;
}

double PotentialRealization::evaluate(double x1, double x2,
                                      EpsilonScale eps) const {
  const double n = eps.reciprocal();
  return value(n * x1, n * x2);
}

PotentialRealization PotentialRealization::shifted(double y1,
                                                   double y2) const {
  std::vector<double> ph = phases_;
  for (std::size_t j = 0; j < ph.size(); ++j) {
    const auto& k = spec_.components[j].k;
    ph[j] = std::fmod(ph[j] + k.s1 * y1 + k.s2 * y2, kTwoPi);
    if (ph[j] < 0.0) ph[j] += kTwoPi;
  }
  return PotentialRealization(spec_, std::move(ph));
}

std::vector<double> PotentialRealization::sample_grid(EpsilonScale eps,
                                                      int resolution) const {
  const int m = resolution;
  std::vector<double> q(static_cast<std::size_t>(m) * m, spec_.a0);
  const long long n = eps.reciprocal();
  for (std::size_t j = 0; j < phases_.size(); ++j) {
    const auto& c = spec_.components[j];
    // Integer phase index: n (k1 j1 + k2 j2) mod M.
    std::vector<double> table(static_cast<std::size_t>(m));
    for (int r = 0; r < m; ++r) {
      table[r] = c.amplitude * std::cos(kTwoPi * r / m + phases_[j]);
    }
    for (int j1 = 0; j1 < m; ++j1) {
      for (int j2 = 0; j2 < m; ++j2) {
        const int r = wrap(n * (static_cast<long long>(c.k.s1) * j1 +
                                static_cast<long long>(c.k.s2) * j2),
                           m);
        q[static_cast<std::size_t>(j1) * m + j2] += table[r];
      }
    }
  }
  return q;
}

PotentialRealization sample_potential(const PotentialSpec& spec,
                                      std::uint64_t seed) {
  spec.validate();
  const KeyedRandom rng(seed, Stream::Medium);
  std::vector<double> phases(spec.components.size());
  for (std::size_t j = 0; j < phases.size(); ++j) {
    phases[j] = kTwoPi * rng.uniform(static_cast<std::uint32_t>(j), 0);
  }
  return PotentialRealization(spec, std::move(phases));
}

double effective_q(const PotentialSpec& spec) { return spec.a0; }

int pairing_resolution(const PotentialSpec& spec, EpsilonScale eps,
                       int cutoff) {
  return spec.max_frequency() * eps.reciprocal() + 2 * cutoff + 1;
}

double oscillation_pairing(const PotentialRealization& r, EpsilonScale eps,
                           const SpectralField& u, const SpectralField& phi,
                           int resolution) {
  if (u.cutoff() != phi.cutoff()) {
    throw std::invalid_argument("oscillation_pairing: cutoff mismatch");
  }
  const int need = pairing_resolution(r.spec(), eps, u.cutoff());
  if (resolution < need) {
    throw ResolutionError("oscillation_pairing: grid " +
                          std::to_string(resolution) +
                          " under-resolves the integrand (need >= " +
                          std::to_string(need) + ")");
  }
  FourierGrid fft(resolution);
  const std::size_t n = fft.points();
  std::vector<double> u1(n), u2(n), p1(n), p2(n);
  const auto& lat = u.spectrum().lattice();
  fft.synthesize(lat, [&](std::size_t i) { return u[i][0]; }, u1);
  fft.synthesize(lat, [&](std::size_t i) { return u[i][1]; }, u2);
  fft.synthesize(lat, [&](std::size_t i) { return phi[i][0]; }, p1);
  fft.synthesize(lat, [&](std::size_t i) { return phi[i][1]; }, p2);
  const std::vector<double> q = r.sample_grid(eps, resolution);
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sum += q[k] * (u1[k] * p1[k] + u2[k] * p2[k]);
  }
  return sum / static_cast<double>(n);
}

double oscillation_pairing(const PotentialRealization& r, EpsilonScale eps,
                           const SpectralField& u, const SpectralField& phi) {
  return oscillation_pairing(
      r, eps, u, phi,
      fft_friendly_size(pairing_resolution(r.spec(), eps, u.cutoff())));
}

}  // namespace nshomog
