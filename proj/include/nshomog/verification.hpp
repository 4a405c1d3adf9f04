#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nshomog/harness.hpp"

namespace nshomog {

/// max / min of positive values (+inf when some value is <= 0).
double spread_ratio(std::span<const double> values);

/// (sup |u|^2 + 2 int |u|_1^2) / (1 + |u0|^2) for one path.
double energy_bound_ratio(const PathSummary& p);

/// One constant C for all ensembles: the largest ratio over the even-indexed
/// members of every ensemble. Coverage is the fraction of the held-out
/// odd-indexed members of each ensemble with ratio <= C.
struct EnergyBoundFit {
  double constant = 0.0;
  std::vector<double> coverage;
};
EnergyBoundFit fit_energy_bound(std::span<const EnsembleStats> ensembles);

/// v[i+1] <= v[i] + half_width[i+1] for all i.
bool nonincreasing_within_band(std::span<const Estimate> values);

struct GateResult {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct VerifyThresholds {
  double moment_spread = 2.0;
  double bound_coverage = 0.99;
  double hoelder_spread = 5.0;
};

struct VerifyReport {
  std::vector<GateResult> gates;
  SweepTable sweep;
  HoelderTable hoelder;
  TermLimitReport terms;

  bool passed() const;
  /// One line per gate: PASS|FAIL name value threshold.
  std::string text() const;
};

/// Moment uniformity in eps, the pathwise energy bound, the Hoelder ladder,
/// the coupled sweep and the term-limit checks. An empty Hoelder ladder in
/// cfg uses {2^-3, ..., 2^-9} T.
VerifyReport run_verification(const HarnessConfig& cfg,
                              const std::vector<EpsilonScale>& eps_list,
                              int members, const VerifyThresholds& limits = {});

/// Trilinear identities over random triples plus the operator checks, at one
/// cutoff on the dealiased grid.
struct IdentitySuite {
  int cutoff = 0;
  std::vector<IdentityRow> rows;
  double max_residual = 0.0;
  /// max |stokes_apply(e_s) - |s|^2 e_s| over the lattice.
  double stokes_error = 0.0;
  /// |P(P f) - P f| for a random non-solenoidal spectrum.
  double leray_idempotence = 0.0;
  /// Relative error of to_spectral(to_grid(u)).
  double round_trip = 0.0;
  /// Relative gap between the grid mean square and |u|^2.
  double parseval = 0.0;
};
IdentitySuite run_identity_suite(int cutoff, int triples, std::uint64_t seed);

}  // namespace nshomog
