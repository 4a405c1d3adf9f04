#include "nshomog/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nshomog/errors.hpp"

namespace nshomog {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& where,
                    const std::set<std::string>& known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) {
      throw ConfigError("unknown key '" + where + it.key() + "'");
    }
  }
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + where + key + "' has the wrong type");
  }
}

ModeIndex mode_of(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() ||
      !j[1].is_number_integer()) {
    throw ConfigError("'" + where + "' must be an integer pair [s1, s2]");
  }
  return {j[0].get<int>(), j[1].get<int>()};
}

EpsilonScale eps_of(const json& j, const std::string& where) {
  if (j.is_string()) return EpsilonScale::parse(j.get<std::string>());
  if (j.is_number()) return EpsilonScale::from_value(j.get<double>());
  throw ConfigError("'" + where + "' must be \"1/n\" or a number");
}

SpectralField initial_of(const json& j, int cutoff) {
  reject_unknown(j, "initial.", {"basis", "field"});
  if (j.contains("field")) {
    try {
      SpectralField u = spectral_field_from_json(j.at("field"));
      if (u.cutoff() != cutoff) {
        throw ConfigError("initial.field cutoff differs from 'cutoff'");
      }
      return u;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("initial.field: ") + e.what());
    }
  }
  SpectralField u(cutoff);
  if (!j.contains("basis")) return u;
  for (const auto& term : j.at("basis")) {
    reject_unknown(term, "initial.basis[].", {"s", "c"});
    const ModeIndex s = mode_of(term.at("s"), "initial.basis[].s");
    if (s.is_zero() || s.sup_norm() > cutoff) {
      throw ConfigError("initial.basis mode " + to_string(s) +
                        " is zero or beyond the cutoff");
    }
    u.add_basis(s, get<double>(term, "c", "initial.basis[]."));
  }
  return u;
}

PotentialSpec potential_of(const json& j) {
  reject_unknown(j, "potential.", {"a0", "components"});
  PotentialSpec p;
  if (j.contains("a0")) p.a0 = get<double>(j, "a0", "potential.");
  if (j.contains("components")) {
    for (const auto& c : j.at("components")) {
      reject_unknown(c, "potential.components[].", {"k", "a"});
      p.components.push_back({mode_of(c.at("k"), "potential.components[].k"),
                              get<double>(c, "a", "potential.components[].")});
    }
  }
  p.validate();
  return p;
}

NoiseModel noise_of(const json& j, int cutoff) {
  reject_unknown(j, "noise.", {"modes", "q", "power_law"});
  if (j.contains("power_law")) {
    if (j.contains("modes") || j.contains("q")) {
      throw ConfigError("noise: give either power_law or modes/q, not both");
    }
    const json& pl = j.at("power_law");
    reject_unknown(pl, "noise.power_law.", {"amplitude", "exponent"});
    return NoiseModel::power_law(
        cutoff, get<double>(pl, "amplitude", "noise.power_law."),
        get<double>(pl, "exponent", "noise.power_law."));
  }
  NoiseModel n;
  if (j.contains("modes")) {
    for (const auto& s : j.at("modes")) n.modes.push_back(mode_of(s, "noise.modes[]"));
  }
  if (j.contains("q")) n.amplitudes = get<std::vector<double>>(j, "q", "noise.");
  return n;
}

SpectralField default_initial(int cutoff) {
  SpectralField u(cutoff);
  u.add_basis({1, 0}, 1.0);
  u.add_basis({0, 1}, 1.0);
  u.add_basis({-1, 1}, 0.5);
  return u;
}

std::vector<ModeIndex> default_observables(int cutoff) {
  std::vector<ModeIndex> out;
  for (ModeIndex s : {ModeIndex{0, 1}, ModeIndex{1, 0}, ModeIndex{1, 1},
                      ModeIndex{1, -1}, ModeIndex{0, 2}, ModeIndex{2, 0}}) {
    if (s.sup_norm() <= cutoff) out.push_back(s);
  }
  return out;
}

}  // namespace

RunConfig default_run_config() {
  RunConfig rc;
  SimulationConfig& sim = rc.harness.base;
  sim.cutoff = 8;
  sim.grid = 0;
  sim.dt = 1.0 / 1024.0;
  sim.steps = 1024;
  sim.nu = 1.0;
  sim.sample_stride = 8;
  sim.observables = default_observables(sim.cutoff);
  sim.initial = default_initial(sim.cutoff);
  sim.sigma.period = 1.0;
  sim.sigma.gamma = 0.0;
  sim.sigma.rho0 = 1.0;
  sim.sigma.level = 1.0;
  sim.sigma.noise = NoiseModel::power_law(sim.cutoff, 1.0, 1.5);
  rc.harness.potential.a0 = 0.5;
  rc.harness.potential.components = {{{1, 0}, 1.0}};
  rc.harness.seed = 1;
  rc.harness.threads = 1;
  rc.harness.permutations = 1000;
  rc.eps = EpsilonScale(4);
  rc.eps_list = {EpsilonScale(2), EpsilonScale(4), EpsilonScale(8),
                 EpsilonScale(16)};
  return rc;
}

SimulationConfig RunConfig::simulation() const {
  return member_config(harness, eps, harness.seed);
}

void RunConfig::validate() const {
  harness.base.validate();
  harness.potential.validate();
  if (members < 2) throw ConfigError("harness.members must be >= 2");
  if (harness.permutations < 1) {
    throw ConfigError("harness.permutations must be >= 1");
  }
  if (harness.threads < 1) throw ConfigError("harness.threads must be >= 1");
  for (std::size_t r = 1; r < eps_list.size(); ++r) {
    if (eps_list[r].reciprocal() <= eps_list[r - 1].reciprocal()) {
      throw ConfigError("harness.eps_list must be strictly decreasing");
    }
  }
  for (double h : harness.hoelder_dt) {
    const double k = std::round(h / harness.base.dt);
    if (!(h > 0.0) || std::abs(k * harness.base.dt - h) > 1e-9 * h ||
        k > harness.base.steps) {
      throw ConfigError("harness.hoelder_dt entries must be multiples of dt "
                        "within the horizon");
    }
  }
  // The finest eps sets the largest grid; check it resolves.
  for (const auto& e : eps_list) member_config(harness, e, 0).validate();
  simulation().validate();
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  reject_unknown(j, "",
                 {"cutoff", "grid", "dt", "horizon", "nu", "epsilon", "mode",
                  "seed", "sample_stride", "observables", "blowup_ceiling",
                  "initial", "potential", "noise", "sigma", "harness"});
  RunConfig rc = default_run_config();
  SimulationConfig& sim = rc.harness.base;

  if (j.contains("cutoff")) sim.cutoff = get<int>(j, "cutoff", "");
  if (sim.cutoff < 1) throw ConfigError("cutoff must be >= 1");
  if (j.contains("grid")) sim.grid = get<int>(j, "grid", "");
  if (j.contains("dt")) sim.dt = get<double>(j, "dt", "");
  if (!(sim.dt > 0.0) || !std::isfinite(sim.dt)) {
    throw ConfigError("dt must be positive (got " + std::to_string(sim.dt) + ")");
  }
  double horizon = 1.0;
  if (j.contains("horizon")) horizon = get<double>(j, "horizon", "");
  if (!(horizon > 0.0)) throw ConfigError("horizon must be positive");
  const double steps = std::round(horizon / sim.dt);
  if (steps < 1 || std::abs(steps * sim.dt - horizon) > 1e-9 * horizon) {
    throw ConfigError("horizon must be an integer multiple of dt");
  }
  sim.steps = static_cast<int>(steps);
  if (j.contains("nu")) sim.nu = get<double>(j, "nu", "");
  if (j.contains("sample_stride")) {
    sim.sample_stride = get<int>(j, "sample_stride", "");
  }
  if (j.contains("blowup_ceiling")) {
    sim.blowup_ceiling = get<double>(j, "blowup_ceiling", "");
  }
  sim.observables = default_observables(sim.cutoff);
  if (j.contains("observables")) {
    sim.observables.clear();
    for (const auto& s : j.at("observables")) {
      sim.observables.push_back(mode_of(s, "observables[]"));
    }
  }
  if (j.contains("seed")) rc.harness.seed = get<std::uint64_t>(j, "seed", "");

  std::string mode = "oscillating";
  if (j.contains("mode")) mode = get<std::string>(j, "mode", "");
  if (mode == "effective") {
    rc.eps.reset();
  } else if (mode != "oscillating") {
    throw ConfigError("mode must be 'oscillating' or 'effective'");
  }
  if (j.contains("epsilon") && mode == "oscillating") {
    rc.eps = eps_of(j.at("epsilon"), "epsilon");
  } else if (j.contains("epsilon")) {
    eps_of(j.at("epsilon"), "epsilon");
  }

  sim.initial = j.contains("initial") ? initial_of(j.at("initial"), sim.cutoff)
                                      : default_initial(sim.cutoff);
  if (j.contains("potential")) rc.harness.potential = potential_of(j.at("potential"));
  sim.sigma.noise = j.contains("noise")
                        ? noise_of(j.at("noise"), sim.cutoff)
                        : NoiseModel::power_law(sim.cutoff, 1.0, 1.5);
  if (j.contains("sigma")) {
    const json& s = j.at("sigma");
    reject_unknown(s, "sigma.", {"period", "gamma", "rho0", "level"});
    if (s.contains("period")) sim.sigma.period = get<double>(s, "period", "sigma.");
    if (s.contains("gamma")) sim.sigma.gamma = get<double>(s, "gamma", "sigma.");
    if (s.contains("rho0")) sim.sigma.rho0 = get<double>(s, "rho0", "sigma.");
    if (s.contains("level")) sim.sigma.level = get<double>(s, "level", "sigma.");
  }
  if (j.contains("harness")) {
    const json& h = j.at("harness");
    reject_unknown(h, "harness.",
                   {"members", "eps_list", "coupled", "permutations",
                    "hoelder_dt", "threads"});
    if (h.contains("members")) rc.members = get<int>(h, "members", "harness.");
    if (h.contains("eps_list")) {
      rc.eps_list.clear();
      for (const auto& e : h.at("eps_list")) {
        rc.eps_list.push_back(eps_of(e, "harness.eps_list[]"));
      }
    }
    if (h.contains("coupled")) rc.coupled = get<bool>(h, "coupled", "harness.");
    if (h.contains("permutations")) {
      rc.harness.permutations = get<int>(h, "permutations", "harness.");
    }
    if (h.contains("hoelder_dt")) {
      rc.harness.hoelder_dt = get<std::vector<double>>(h, "hoelder_dt", "harness.");
    }
    if (h.contains("threads")) rc.harness.threads = get<int>(h, "threads", "harness.");
  }
  rc.validate();
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " +
                      e.what());
  }
  return parse_run_config(j);
}

}  // namespace nshomog
