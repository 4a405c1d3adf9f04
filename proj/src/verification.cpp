#include "nshomog/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nshomog/csv.hpp"
#include "nshomog/errors.hpp"
#include "nshomog/grid_field.hpp"
#include "nshomog/nonlinear.hpp"
#include "nshomog/rng.hpp"

namespace nshomog {

double spread_ratio(std::span<const double> values) {
  if (values.empty()) return 1.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*lo > 0.0)) return std::numeric_limits<double>::infinity();
  return *hi / *lo;
}

double energy_bound_ratio(const PathSummary& p) {
  return (p.sup_energy + 2.0 * p.dissipation) / (1.0 + p.initial_energy);
}

EnergyBoundFit fit_energy_bound(std::span<const EnsembleStats> ensembles) {
  EnergyBoundFit fit;
  for (const auto& e : ensembles) {
    for (std::size_t i = 0; i < e.paths.size(); i += 2) {
      fit.constant = std::max(fit.constant, energy_bound_ratio(e.paths[i]));
    }
  }
  for (const auto& e : ensembles) {
    std::size_t ok = 0;
    std::size_t n = 0;
    for (std::size_t i = 1; i < e.paths.size(); i += 2, ++n) {
      ok += energy_bound_ratio(e.paths[i]) <= fit.constant;
    }
    fit.coverage.push_back(n ? static_cast<double>(ok) / static_cast<double>(n)
                             : 1.0);
  }
  return fit;
}

bool nonincreasing_within_band(std::span<const Estimate> values) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i].estimate > values[i - 1].estimate + values[i].half_width) {
      return false;
    }
  }
  return true;
}

bool VerifyReport::passed() const {
  return std::all_of(gates.begin(), gates.end(),
                     [](const GateResult& g) { return g.pass; });
}

std::string VerifyReport::text() const {
  std::ostringstream os;
  for (const auto& g : gates) {
    os << (g.pass ? "PASS " : "FAIL ") << g.name << " value="
       << format_double(g.value) << " threshold=" << format_double(g.threshold)
       << '\n';
  }
  return os.str();
}

VerifyReport run_verification(const HarnessConfig& cfg,
                              const std::vector<EpsilonScale>& eps_list,
                              int members, const VerifyThresholds& limits) {
  if (eps_list.size() < 2) {
    throw ConfigError("verify needs at least two epsilons in harness.eps_list");
  }
  VerifyReport rep;
  rep.sweep = convergence_sweep(cfg, eps_list, members, true);

  std::vector<EnsembleStats> osc(rep.sweep.stats.begin(),
                                 rep.sweep.stats.begin() +
                                     static_cast<long>(eps_list.size()));
  const std::pair<const char*, Estimate EnsembleStats::*> moments[] = {
      {"sup_energy", &EnsembleStats::sup_energy},
      {"dissipation", &EnsembleStats::dissipation},
      {"sup_norm1_sq", &EnsembleStats::sup_norm1_sq},
      {"sup_norm2_sq", &EnsembleStats::sup_norm2_sq},
      {"sup_energy_sq", &EnsembleStats::sup_energy_sq},
  };
  for (const auto& [name, field] : moments) {
    std::vector<double> v;
    for (const auto& e : osc) v.push_back((e.*field).estimate);
    const double r = spread_ratio(v);
    rep.gates.push_back({std::string("moment_spread_") + name,
                         r <= limits.moment_spread, r, limits.moment_spread});
  }

  const EnergyBoundFit fit = fit_energy_bound(osc);
  const double worst = *std::min_element(fit.coverage.begin(), fit.coverage.end());
  rep.gates.push_back({"energy_bound_coverage", worst >= limits.bound_coverage,
                       worst, limits.bound_coverage});

  std::vector<double> ladder = cfg.hoelder_dt;
  if (ladder.empty()) {
    for (int k = 3; k <= 9; ++k) {
      ladder.push_back(cfg.base.horizon() * std::ldexp(1.0, -k));
    }
  }
  rep.hoelder = hoelder_profile(cfg, eps_list.front(), members, ladder);
  std::vector<double> ratios;
  for (const auto& r : rep.hoelder.rows) ratios.push_back(r.ratio);
  const double hs = spread_ratio(ratios);
  rep.gates.push_back(
      {"hoelder_ratio_spread", hs <= limits.hoelder_spread, hs, limits.hoelder_spread});

  rep.gates.push_back({"pathwise_nonincreasing",
                       nonincreasing_within_band(rep.sweep.pathwise),
                       rep.sweep.pathwise.back().estimate,
                       rep.sweep.pathwise.front().estimate});

  double first = 0.0;
  double last = 0.0;
  for (const auto& row : rep.sweep.rows) {
    if (row.observable != "energy") continue;
    if (row.eps == rep.sweep.eps.front()) first = row.distance;
    if (row.eps == rep.sweep.eps.back()) last = row.distance;
  }
  rep.gates.push_back({"energy_distance_decreases", last < first, last, first});

  rep.terms = term_limit_checks(cfg, eps_list, std::min(members, 200));
  bool pairing_ok = true;
  bool ratio_ok = true;
  for (std::size_t i = 0; i < rep.terms.rows.size(); ++i) {
    const auto& row = rep.terms.rows[i];
    if (i > 0 && row.pairing_error > rep.terms.rows[i - 1].pairing_error) {
      pairing_ok = false;
    }
    if (!std::isfinite(row.bilinear_ratio)) ratio_ok = false;
  }
  rep.gates.push_back({"pairing_nonincreasing", pairing_ok,
                       rep.terms.rows.back().pairing_error,
                       rep.terms.rows.front().pairing_error});
  double ratio_max = 0.0;
  for (const auto& row : rep.terms.rows) {
    ratio_max = std::max(ratio_max, row.bilinear_ratio);
  }
  rep.gates.push_back({"bilinear_ratio_finite", ratio_ok, ratio_max,
                       std::numeric_limits<double>::infinity()});
  return rep;
}

IdentitySuite run_identity_suite(int cutoff, int triples, std::uint64_t seed) {
  IdentitySuite suite;
  suite.cutoff = cutoff;
  for (int t = 0; t < triples; ++t) {
    const std::uint64_t base = seed + 3 * static_cast<std::uint64_t>(t);
    const SpectralField u = smooth_random_field(cutoff, base, 1.0);
    const SpectralField v = smooth_random_field(cutoff, base + 1, 1.0);
    const SpectralField w = smooth_random_field(cutoff, base + 2, 1.0);
    const IdentityReport r = identity_report(u, v, w);
    suite.rows.push_back({t, r});
    suite.max_residual = std::max(
        {suite.max_residual, r.residual_i, r.residual_skew, r.residual_ii});
  }

  for (int s1 = -cutoff; s1 <= cutoff; ++s1) {
    for (int s2 = -cutoff; s2 <= cutoff; ++s2) {
      const ModeIndex s{s1, s2};
      if (s.is_zero()) continue;
      const SpectralField e = SpectralField::basis(s, cutoff);
      SpectralField diff = stokes_apply(e);
      diff.axpy(-static_cast<double>(s.norm_squared()), e);
      suite.stokes_error = std::max(suite.stokes_error, sobolev_norm(diff, 0.0));
    }
  }

  const KeyedRandom rng(seed, Stream::Fields);
  Spectrum raw(cutoff);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (int c = 0; c < 2; ++c) {
      raw[i][c] = Complex(rng.normal(static_cast<std::uint32_t>(i), 1, c),
                          rng.normal(static_cast<std::uint32_t>(i), 2, c));
    }
  }
  const SpectralField p1 = leray_project(raw);
  const SpectralField p2 = leray_project(p1.spectrum());
  suite.leray_idempotence = sobolev_norm(p2 - p1, 0.0);

  const SpectralField u = smooth_random_field(cutoff, seed + 999, 1.0);
  const int m = min_round_trip_resolution(cutoff);
  const SpectralField back = to_velocity(to_grid(u, m), cutoff);
  const double norm = sobolev_norm(u, 0.0);
  suite.round_trip = sobolev_norm(back - u, 0.0) / norm;
  suite.parseval =
      std::abs(grid_mean_square(to_grid(u, m)) - norm * norm) / (norm * norm);
  return suite;
}

}  // namespace nshomog
