// nshomog: simulate / ensemble / sweep / verify / identities.
//
// Exit codes: 0 ok, 1 invalid configuration or arguments, 2 numerical
// divergence, 3 failed verification gates.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nshomog/config.hpp"
#include "nshomog/csv.hpp"
#include "nshomog/errors.hpp"
#include "nshomog/harness.hpp"
#include "nshomog/integrator.hpp"
#include "nshomog/verification.hpp"

namespace fs = std::filesystem;
using namespace nshomog;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitDivergence = 2;
constexpr int kExitVerify = 3;

struct Overrides {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> eps;
  std::optional<int> members;
  std::optional<int> threads;
  std::string out;
};

int threads_from_env() {
  const char* v = std::getenv("NSHOMOG_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  try {
    const int n = std::stoi(v);
    if (n < 1) throw ConfigError("");
    return n;
  } catch (const std::exception&) {
    throw ConfigError(std::string("NSHOMOG_THREADS must be a positive integer, "
                                  "got '") +
                      v + "'");
  }
}

RunConfig resolve(const Overrides& o, bool eps_is_list) {
  RunConfig rc = o.config.empty() ? default_run_config()
                                  : load_run_config(o.config);
  if (o.seed) rc.harness.seed = *o.seed;
  if (o.members) rc.members = *o.members;
  if (!o.eps.empty()) {
    std::vector<EpsilonScale> parsed;
    for (const auto& e : o.eps) parsed.push_back(EpsilonScale::parse(e));
    if (eps_is_list) {
      rc.eps_list = parsed;
    } else {
      if (parsed.size() != 1) throw ConfigError("--eps takes one value here");
      rc.eps = parsed.front();
    }
  }
  if (o.threads) {
    rc.harness.threads = *o.threads;
  } else if (const int n = threads_from_env(); n > 0) {
    rc.harness.threads = n;
  }
  rc.validate();
  return rc;
}

fs::path output_dir(const Overrides& o) {
  const fs::path dir = o.out.empty() ? fs::path(".") : fs::path(o.out);
  fs::create_directories(dir);
  return dir;
}

void log_line(const std::string& s) { std::cerr << s << '\n'; }

int cmd_simulate(const Overrides& o) {
  const RunConfig rc = resolve(o, false);
  const PathResult r = simulate_path(rc.simulation());
  const fs::path out = o.out.empty() ? fs::path("trajectory.csv") : fs::path(o.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_file_atomically(out, trajectory_csv(r.trajectory));
  log_line("wrote " + out.string());
  return 0;
}

int cmd_ensemble(const Overrides& o) {
  const RunConfig rc = resolve(o, false);
  const fs::path dir = output_dir(o);
  const EnsembleStats st = run_ensemble(rc.harness, rc.eps, rc.members);
  write_file_atomically(dir / "stats.csv", stats_csv({st}));
  log_line("wrote " + (dir / "stats.csv").string());
  if (!st.hoelder.rows.empty()) {
    write_file_atomically(dir / "hoelder.csv", hoelder_csv(st.hoelder));
    log_line("wrote " + (dir / "hoelder.csv").string());
  }
  return 0;
}

int cmd_sweep(const Overrides& o) {
  const RunConfig rc = resolve(o, true);
  const fs::path dir = output_dir(o);
  const SweepTable t =
      convergence_sweep(rc.harness, rc.eps_list, rc.members, rc.coupled);
  for (std::size_t i = 0; i < t.eps.size(); ++i) {
    std::string line = "eps=" + format_double(t.eps[i]);
    if (i < t.pathwise.size()) {
      line += " pathwise_l2=" + format_double(t.pathwise[i].estimate) + " +- " +
              format_double(t.pathwise[i].half_width);
    }
    log_line(line);
  }
  write_file_atomically(dir / "sweep.csv", sweep_csv(t));
  write_file_atomically(dir / "stats.csv", stats_csv(t.stats));
  log_line("wrote " + (dir / "sweep.csv").string() + " and " +
           (dir / "stats.csv").string());
  return 0;
}

int cmd_verify(const Overrides& o) {
  const RunConfig rc = resolve(o, true);
  const fs::path dir = output_dir(o);
  const VerifyReport rep = run_verification(rc.harness, rc.eps_list, rc.members);
  write_file_atomically(dir / "sweep.csv", sweep_csv(rep.sweep));
  write_file_atomically(dir / "stats.csv", stats_csv(rep.sweep.stats));
  write_file_atomically(dir / "hoelder.csv", hoelder_csv(rep.hoelder));
  std::cout << rep.text();
  for (const auto& row : rep.terms.rows) {
    std::cout << "term eps=" << format_double(row.eps)
              << " pairing_error=" << format_double(row.pairing_error)
              << " sigma_distance=" << format_double(row.sigma_distance)
              << " sigma_p=" << format_double(row.sigma_p_value)
              << " bilinear_ratio=" << format_double(row.bilinear_ratio) << '\n';
  }
  return rep.passed() ? 0 : kExitVerify;
}

int cmd_identities(const Overrides& o) {
  const RunConfig rc = resolve(o, false);
  const fs::path dir = output_dir(o);
  constexpr double kIdentityLimit = 1e-10;
  constexpr double kExactLimit = 1e-12;
  bool ok = true;
  std::vector<IdentityRow> rows;
  for (int n : {rc.harness.base.cutoff, 2 * rc.harness.base.cutoff}) {
    const IdentitySuite s = run_identity_suite(n, 250, rc.harness.seed);
    for (auto r : s.rows) {
      r.id += static_cast<int>(rows.size());
      rows.push_back(r);
    }
    const bool pass = s.max_residual <= kIdentityLimit &&
                      s.stokes_error == 0.0 &&
                      s.leray_idempotence == 0.0 &&
                      s.round_trip <= kExactLimit && s.parseval <= 1e-10;
    ok = ok && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " cutoff=" << n
              << " max_residual=" << format_double(s.max_residual)
              << " stokes=" << format_double(s.stokes_error)
              << " leray=" << format_double(s.leray_idempotence)
              << " round_trip=" << format_double(s.round_trip)
              << " parseval=" << format_double(s.parseval) << '\n';
  }
  write_file_atomically(dir / "identities.csv", identity_csv(rows));
  return ok ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic Navier-Stokes homogenization simulator"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config file (defaults if absent)")
        ->check(CLI::ExistingFile);
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& v) { o.seed = v; }, "Base seed");
    sub->add_option("--eps", o.eps, "Epsilon as 1/n (repeat for sweeps)");
    sub->add_option_function<int>(
        "--members", [&](const int& v) { o.members = v; }, "Ensemble size");
    sub->add_option_function<int>(
        "--threads", [&](const int& v) { o.threads = v; },
        "Worker threads (env NSHOMOG_THREADS)");
    sub->add_option("--out", o.out, "Output file (simulate) or directory");
  };
  auto* sim = app.add_subcommand("simulate", "One path; writes a trajectory CSV");
  auto* ens = app.add_subcommand("ensemble", "Monte Carlo moments; stats.csv");
  auto* swp = app.add_subcommand("sweep", "Epsilon sweep; sweep.csv, stats.csv");
  auto* ver = app.add_subcommand("verify", "Moment, Hoelder and limit gates");
  auto* idn = app.add_subcommand("identities", "Spectral invariant suites");
  for (auto* s : {sim, ens, swp, ver, idn}) add_common(s);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(o);
    if (*ens) return cmd_ensemble(o);
    if (*swp) return cmd_sweep(o);
    if (*ver) return cmd_verify(o);
    if (*idn) return cmd_identities(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ResolutionError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
