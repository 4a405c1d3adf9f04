#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nshomog/integrator.hpp"
#include "nshomog/random_media.hpp"
#include "nshomog/statistics.hpp"

namespace nshomog {

/// Everything an ensemble needs besides the coefficient mode. The
/// coefficients and noise_seed of `base` are overwritten per member.
struct HarnessConfig {
  SimulationConfig base;
  PotentialSpec potential;
  /// Member i uses seed + i for both its noise and its medium (separate
  /// streams).
  std::uint64_t seed = 0;
  /// Worker cap; results do not depend on it.
  int threads = 1;
  int permutations = 1000;
  /// Hoelder ladder in time units; each must be a multiple of dt.
  std::vector<double> hoelder_dt;
};

/// Runs body(i) for i in [0, count) on up to `threads` workers. The first
/// failure by index is rethrown after all workers stop.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

/// Coefficients for member `member`: the member's medium at eps, or q_bar.
SimulationConfig member_config(const HarnessConfig& cfg,
                               std::optional<EpsilonScale> eps,
                               std::uint64_t member_seed);

struct HoelderRow {
  double dt = 0.0;
  /// E |u(t + dt) - u(t)|_1^2 over anchors and members.
  double value = 0.0;
  /// value / dt^{1/2}.
  double ratio = 0.0;
};

struct HoelderTable {
  std::vector<HoelderRow> rows;
  /// Least-squares log-log slope of value against dt.
  double slope = 0.0;
};

struct EnsembleStats {
  int members = 0;
  /// 0 for effective runs.
  double eps = 0.0;
  std::string mode;
  Estimate sup_energy;       // E sup |u|^2      (p = 1)
  Estimate dissipation;      // E int |u|_1^2
  Estimate sup_norm1_sq;     // E sup |u|_1^2
  Estimate sup_norm2_sq;     // E sup |u|_2^2
  Estimate sup_energy_sq;    // E sup |u|^4      (p = 2)
  Estimate terminal_energy;  // E |u(T)|^2
  std::vector<PathSummary> paths;
  std::vector<SpectralField> terminal;
  HoelderTable hoelder;
};

/// M independent paths with member seeds seed + seed_offset + i. Divergence
/// of any member aborts with a DivergenceError naming the member.
EnsembleStats run_ensemble(const HarnessConfig& cfg,
                           std::optional<EpsilonScale> eps, int members,
                           std::uint64_t seed_offset = 0);

/// stats.csv: statistic,estimate,half_width,eps,mode
std::string stats_csv(const std::vector<EnsembleStats>& stats);

struct SweepRow {
  double eps = 0.0;
  std::string observable;
  double distance = 0.0;
  double p_value = 1.0;
  /// E |u^eps(T) - u(T)|_1^2 (NaN when uncoupled).
  double pathwise_l2 = 0.0;
};

struct SweepTable {
  std::vector<SweepRow> rows;
  std::vector<double> eps;
  /// Per eps: E |u^eps(T) - u(T)|_1^2 with its half-width (coupled only).
  std::vector<Estimate> pathwise;
  /// Per eps ensemble statistics, then the effective ensemble(s).
  std::vector<EnsembleStats> stats;
};

/// Per eps, M eps-paths against M effective paths. Observables: the energy
/// |u(T)|^2 and, per configured mode s, the pair (Re, Im) of alpha_s(T).
/// Coupled: member i shares seeds across eps and with the effective path.
/// Uncoupled: every row draws fresh, disjoint seeds for both samples.
SweepTable convergence_sweep(const HarnessConfig& cfg,
                             const std::vector<EpsilonScale>& eps_list,
                             int members, bool coupled);

/// sweep.csv: eps,observable,distance,p_value,pathwise_l2
std::string sweep_csv(const SweepTable& table);

/// E |u(t + dt) - u(t)|_1^2 over t-anchors and members for each dt.
HoelderTable hoelder_profile(const HarnessConfig& cfg,
                             std::optional<EpsilonScale> eps, int members,
                             const std::vector<double>& dts);

/// hoelder.csv: dt,value,ratio
std::string hoelder_csv(const HoelderTable& table);

struct TermLimitRow {
  double eps = 0.0;
  /// (a) |oscillation_pairing - q_bar <u, phi>| for frozen band-limited u,
  /// phi.
  double pairing_error = 0.0;
  /// (b) energy distance between samples of int sigma(t/eps) dW and
  /// int sigma_bar dW for one mode, and its permutation p-value.
  double sigma_distance = 0.0;
  double sigma_p_value = 1.0;
  /// (c) max over coupled path samples of
  ///   |B(u^eps) - B(u)|_{-1} / ((|u^eps|_1 + |u|_1) |u^eps - u|_1).
  double bilinear_ratio = 0.0;
};

struct TermLimitReport {
  std::vector<TermLimitRow> rows;
};

/// sum_s c_s e_s with c_s ~ N(0, 1) |s|^{-decay}, keyed by seed.
SpectralField smooth_random_field(int cutoff, std::uint64_t seed,
                                  double decay = 2.0);

TermLimitReport term_limit_checks(const HarnessConfig& cfg,
                                  const std::vector<EpsilonScale>& eps_list,
                                  int members);

}  // namespace nshomog
