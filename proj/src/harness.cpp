#include "nshomog/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

#include "nshomog/csv.hpp"
#include "nshomog/errors.hpp"
#include "nshomog/nonlinear.hpp"
#include "nshomog/rng.hpp"

namespace nshomog {

void parallel_for(int count, int threads,
                  const std::function<void(int)>& body) {
  if (count <= 0) return;
  const int workers = std::clamp(threads, 1, count);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
        break;
      }
    }
  } else {
    // indices below the lowest failure still run
    std::atomic<int> next{0};
    std::atomic<int> first_failure{count};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int i = next++; i < count && i < first_failure; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
            int seen = first_failure.load();
            while (i < seen && !first_failure.compare_exchange_weak(seen, i)) {
            }
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SimulationConfig member_config(const HarnessConfig& cfg,
                               std::optional<EpsilonScale> eps,
                               std::uint64_t member_seed) {
  SimulationConfig sim = cfg.base;
  sim.noise_seed = member_seed;
  if (eps) {
    sim.coefficients =
        Oscillating{*eps, sample_potential(cfg.potential, member_seed)};
  } else {
    sim.coefficients = Effective{effective_q(cfg.potential)};
  }
  return sim;
}

namespace {

std::vector<int> ladder_steps(const std::vector<double>& dts, double dt) {
  std::vector<int> k;
  for (double h : dts) {
    const double r = std::round(h / dt);
    if (!(h > 0.0) || std::abs(r * dt - h) > 1e-9 * h) {
      throw ConfigError("Hoelder lag " + format_double(h) +
                        " is not a positive multiple of dt");
    }
    k.push_back(static_cast<int>(r));
  }
  return k;
}

// Per member: mean over anchors of |u(t + lag) - u(t)|_1^2 for each lag.
std::vector<double> member_increments(const std::vector<SpectralField>& snaps,
                                      const std::vector<int>& lags, int base) {
  std::vector<double> out;
  for (int lag : lags) {
    const std::size_t k = static_cast<std::size_t>(lag / base);
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t j = 0; j + k < snaps.size(); ++j) {
      const double d = sobolev_norm(snaps[j + k] - snaps[j], 1.0);
      sum += d * d;
      ++count;
    }
    out.push_back(count ? sum / static_cast<double>(count) : 0.0);
  }
  return out;
}

Estimate collect(const std::vector<PathSummary>& paths,
                 double PathSummary::*field) {
  std::vector<double> x;
  x.reserve(paths.size());
  for (const auto& p : paths) x.push_back(p.*field);
  return mean_estimate(x);
}

}  // namespace

EnsembleStats run_ensemble(const HarnessConfig& cfg,
                           std::optional<EpsilonScale> eps, int members,
                           std::uint64_t seed_offset) {
  if (members < 2) throw ConfigError("an ensemble needs at least 2 members");
  const std::vector<int> lags = ladder_steps(cfg.hoelder_dt, cfg.base.dt);
  int base = 0;
  for (int k : lags) base = std::gcd(base, k);
  for (int k : lags) {
    if (k > cfg.base.steps) {
      throw ConfigError("Hoelder lag exceeds the horizon");
    }
  }

  EnsembleStats st;
  st.members = members;
  st.eps = eps ? eps->value() : 0.0;
  st.mode = eps ? "oscillating" : "effective";
  st.paths.resize(members);
  st.terminal.assign(members, SpectralField(cfg.base.cutoff));
  std::vector<std::vector<double>> incr(members);

  PathOptions options;
  options.record_trajectory = false;
  options.snapshot_stride = base;

  parallel_for(members, cfg.threads, [&](int i) {
    const std::uint64_t seed = cfg.seed + seed_offset + static_cast<unsigned>(i);
    try {
      PathResult r = simulate_path(member_config(cfg, eps, seed), options);
      st.paths[i] = r.summary;
      st.terminal[i] = std::move(r.terminal);
      if (base > 0) incr[i] = member_increments(r.snapshots, lags, base);
    } catch (const DivergenceError& e) {
      throw DivergenceError("member " + std::to_string(i) + " (seed " +
                                std::to_string(seed) + "): " + e.what(),
                            e.time());
    }
  });

  st.sup_energy = collect(st.paths, &PathSummary::sup_energy);
  st.dissipation = collect(st.paths, &PathSummary::dissipation);
  st.sup_norm1_sq = collect(st.paths, &PathSummary::sup_norm1_sq);
  st.sup_norm2_sq = collect(st.paths, &PathSummary::sup_norm2_sq);
  st.sup_energy_sq = collect(st.paths, &PathSummary::sup_energy_sq);
  st.terminal_energy = collect(st.paths, &PathSummary::terminal_energy);

  if (base > 0) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (std::size_t l = 0; l < lags.size(); ++l) {
      double sum = 0.0;
      for (int i = 0; i < members; ++i) sum += incr[i][l];
      HoelderRow row;
      row.dt = cfg.hoelder_dt[l];
      row.value = sum / members;
      row.ratio = row.value / std::sqrt(row.dt);
      st.hoelder.rows.push_back(row);
      if (row.value > 0.0) {
        xs.push_back(row.dt);
        ys.push_back(row.value);
      }
    }
    st.hoelder.slope = xs.size() >= 2
                           ? loglog_slope(xs, ys)
                           : std::numeric_limits<double>::quiet_NaN();
  }
  return st;
}

std::string stats_csv(const std::vector<EnsembleStats>& stats) {
  std::ostringstream os;
  os << "statistic,estimate,half_width,eps,mode\n";
  for (const auto& s : stats) {
    const std::pair<const char*, const Estimate*> rows[] = {
        {"sup_energy", &s.sup_energy},
        {"dissipation", &s.dissipation},
        {"sup_norm1_sq", &s.sup_norm1_sq},
        {"sup_norm2_sq", &s.sup_norm2_sq},
        {"sup_energy_sq", &s.sup_energy_sq},
        {"terminal_energy", &s.terminal_energy},
    };
    for (const auto& [name, e] : rows) {
      os << name << ',' << format_double(e->estimate) << ','
         << format_double(e->half_width) << ',' << format_double(s.eps) << ','
         << s.mode << '\n';
    }
  }
  return os.str();
}

namespace {

std::uint64_t permutation_seed(std::uint64_t seed, std::size_t row,
                               std::size_t obs) {
  return seed ^ (0x9E3779B97F4A7C15ull * (1 + row * 1024 + obs));
}

void compare_observables(const HarnessConfig& cfg, std::size_t row,
                         const EnsembleStats& osc, const EnsembleStats& eff,
                         double pathwise, SweepTable& table) {
  std::size_t obs = 0;
  auto add = [&](const std::string& name, const SampleSet& a,
                 const SampleSet& b) {
    const PermutationResult r = permutation_test(
        a, b, cfg.permutations, permutation_seed(cfg.seed, row, obs++));
    table.rows.push_back({osc.eps, name, r.distance, r.p_value, pathwise});
  };
  {
    SampleSet a(1);
    SampleSet b(1);
    for (const auto& p : osc.paths) a.push(std::span(&p.terminal_energy, 1));
    for (const auto& p : eff.paths) b.push(std::span(&p.terminal_energy, 1));
    add("energy", a, b);
  }
  for (const auto& s : cfg.base.observables) {
    SampleSet a(2);
    SampleSet b(2);
    for (const auto& u : osc.terminal) {
      const Complex c = mode_amplitude(u, s);
      const double v[2] = {c.real(), c.imag()};
      a.push(v);
    }
    for (const auto& u : eff.terminal) {
      const Complex c = mode_amplitude(u, s);
      const double v[2] = {c.real(), c.imag()};
      b.push(v);
    }
    add("mode_" + std::to_string(s.s1) + "_" + std::to_string(s.s2), a, b);
  }
}

}  // namespace

SweepTable convergence_sweep(const HarnessConfig& cfg,
                             const std::vector<EpsilonScale>& eps_list,
                             int members, bool coupled) {
  if (eps_list.empty()) throw ConfigError("sweep needs at least one epsilon");
  for (std::size_t r = 1; r < eps_list.size(); ++r) {
    if (eps_list[r].reciprocal() <= eps_list[r - 1].reciprocal()) {
      throw ConfigError("sweep epsilons must be strictly decreasing");
    }
  }
  HarnessConfig run = cfg;
  run.hoelder_dt.clear();
  SweepTable table;
  const std::uint64_t m = static_cast<std::uint64_t>(members);

  std::optional<EnsembleStats> shared;
  if (coupled) shared = run_ensemble(run, std::nullopt, members, 0);

  for (std::size_t r = 0; r < eps_list.size(); ++r) {
    const EpsilonScale eps = eps_list[r];
    EnsembleStats osc =
        run_ensemble(run, eps, members, coupled ? 0 : 2 * r * m);
    EnsembleStats eff = coupled ? *shared
                                : run_ensemble(run, std::nullopt, members,
                                               (2 * r + 1) * m);
    double pathwise = std::numeric_limits<double>::quiet_NaN();
    if (coupled) {
      std::vector<double> d(members);
      for (int i = 0; i < members; ++i) {
        const double v = sobolev_norm(osc.terminal[i] - eff.terminal[i], 1.0);
        d[i] = v * v;
      }
      const Estimate e = mean_estimate(d);
      pathwise = e.estimate;
      table.pathwise.push_back(e);
    }
    table.eps.push_back(eps.value());
    compare_observables(run, r, osc, eff, pathwise, table);
    table.stats.push_back(std::move(osc));
    if (!coupled) table.stats.push_back(std::move(eff));
  }
  if (coupled) table.stats.push_back(std::move(*shared));
  return table;
}

std::string sweep_csv(const SweepTable& table) {
  std::ostringstream os;
  os << "eps,observable,distance,p_value,pathwise_l2\n";
  for (const auto& r : table.rows) {
    os << format_double(r.eps) << ',' << r.observable << ','
       << format_double(r.distance) << ',' << format_double(r.p_value) << ','
       << format_double(r.pathwise_l2) << '\n';
  }
  return os.str();
}

HoelderTable hoelder_profile(const HarnessConfig& cfg,
                             std::optional<EpsilonScale> eps, int members,
                             const std::vector<double>& dts) {
  if (dts.empty()) throw ConfigError("Hoelder ladder is empty");
  HarnessConfig run = cfg;
  run.hoelder_dt = dts;
  return run_ensemble(run, eps, members).hoelder;
}

std::string hoelder_csv(const HoelderTable& table) {
  std::ostringstream os;
  os << "dt,value,ratio\n";
  for (const auto& r : table.rows) {
    os << format_double(r.dt) << ',' << format_double(r.value) << ','
       << format_double(r.ratio) << '\n';
  }
  return os.str();
}

SpectralField smooth_random_field(int cutoff, std::uint64_t seed,
                                  double decay) {
  const KeyedRandom rng(seed, Stream::Fields);
  SpectralField u(cutoff);
  for (int s1 = -cutoff; s1 <= cutoff; ++s1) {
    for (int s2 = -cutoff; s2 <= cutoff; ++s2) {
      const ModeIndex s{s1, s2};
      if (s.is_zero()) continue;
      const double c =
          rng.normal(pack_mode(s1, s2), 0) *
          std::pow(static_cast<double>(s.norm_squared()), -0.5 * decay);
      u.add_basis(s, c);
    }
  }
  return u;
}

namespace {

// Scalar stochastic integral rho0 q_s sum_n g_n d_beta_n for one noise mode.
double sigma_integral(const SimulationConfig& sim, std::optional<int> n_eps,
                      std::uint64_t seed) {
  const SigmaModel& m = sim.sigma;
  const NoiseModel single{{m.noise.modes.front()}, {m.noise.amplitudes.front()}};
  double w = 0.0;
  double sum = 0.0;
  for (int n = 0; n < sim.steps; ++n) {
    standard_increments(single, sim.dt, n, seed, std::span(&w, 1));
    const double g = n_eps ? m.g(static_cast<double>(n) * *n_eps * sim.dt)
                           : m.g_mean();
    sum += g * w;
  }
  return m.rho0 * single.amplitudes.front() * sum;
}

}  // namespace

TermLimitReport term_limit_checks(const HarnessConfig& cfg,
                                  const std::vector<EpsilonScale>& eps_list,
                                  int members) {
  if (members < 2) throw ConfigError("term checks need at least 2 members");
  const int n = cfg.base.cutoff;
  const SpectralField u = smooth_random_field(n, cfg.seed);
  const SpectralField phi = smooth_random_field(n, cfg.seed + 1);
  const PotentialRealization medium = sample_potential(cfg.potential, cfg.seed);
  const double target = effective_q(cfg.potential) * inner_product(u, phi);

  HarnessConfig run = cfg;
  run.hoelder_dt.clear();
  const std::uint64_t m = static_cast<std::uint64_t>(members);
  const bool has_noise = !cfg.base.sigma.noise.modes.empty();

  // Effective reference paths for (c), snapshots at the sampling stride.
  PathOptions snap;
  snap.record_trajectory = false;
  snap.snapshot_stride = cfg.base.sample_stride;
  std::vector<std::vector<SpectralField>> eff(members);
  parallel_for(members, cfg.threads, [&](int i) {
    eff[i] = simulate_path(member_config(run, std::nullopt, cfg.seed + i), snap)
                 .snapshots;
  });

  TermLimitReport report;
  for (std::size_t r = 0; r < eps_list.size(); ++r) {
    const EpsilonScale eps = eps_list[r];
    TermLimitRow row;
    row.eps = eps.value();
    row.pairing_error = std::abs(oscillation_pairing(medium, eps, u, phi) - target);

    if (has_noise) {
      std::vector<double> a(members);
      std::vector<double> b(members);
      parallel_for(members, cfg.threads, [&](int i) {
        a[i] = sigma_integral(cfg.base, eps.reciprocal(),
                              cfg.seed + 2 * r * m + i);
        b[i] = sigma_integral(cfg.base, std::nullopt,
                              cfg.seed + (2 * r + 1) * m + i);
      });
      const PermutationResult pr =
          permutation_test(SampleSet::scalars(a), SampleSet::scalars(b),
                           cfg.permutations, permutation_seed(cfg.seed, r, 999));
      row.sigma_distance = pr.distance;
      row.sigma_p_value = pr.p_value;
    }

    std::vector<double> worst(members, 0.0);
    parallel_for(members, cfg.threads, [&](int i) {
      const auto osc =
          simulate_path(member_config(run, eps, cfg.seed + i), snap).snapshots;
      for (std::size_t k = 0; k < osc.size(); ++k) {
        const SpectralField diff = osc[k] - eff[i][k];
        const double d1 = sobolev_norm(diff, 1.0);
        if (d1 == 0.0) continue;
        const double lhs =
            sobolev_norm(bilinear(osc[k], osc[k]) - bilinear(eff[i][k], eff[i][k]),
                         -1.0);
        const double rhs =
            (sobolev_norm(osc[k], 1.0) + sobolev_norm(eff[i][k], 1.0)) * d1;
        worst[i] = std::max(worst[i], lhs / rhs);
      }
    });
    row.bilinear_ratio = *std::max_element(worst.begin(), worst.end());
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace nshomog
