#include "rydqsl/config.hpp"

#include "rydqsl/errors.hpp"
#include "rydqsl/io.hpp"
#include "rydqsl/units.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rydqsl {

using nlohmann::json;

namespace {

// Every scalar config field, in serialization order.
template <class Config, class F>
void visit_fields(Config& c, F&& f) {
  f("patch", c.patch);
  f("species", c.species);
  f("a_um", c.a_um);
  f("tau_us", c.tau_us);
  f("tq_us", c.tq_us);
  f("omega0_mhz", c.omega0_mhz);
  f("delta_i_mhz", c.delta_i_mhz);
  f("delta_q_mhz", c.delta_q_mhz);
  f("delta_f_rb_mhz", c.delta_f_rb_mhz);
  f("delta_f_over_omega0", c.delta_f_over_omega0);
  f("nu", c.nu);
  f("ramp_fraction", c.ramp_fraction);
  f("c6_rbrb_ghz", c.c6_rbrb_ghz);
  f("c6_cscs_ghz", c.c6_cscs_ghz);
  f("c6_rbcs_ghz", c.c6_rbcs_ghz);
  f("interaction_cutoff_over_a", c.interaction_cutoff_over_a);
  f("detuning_sign", c.detuning_sign);
  f("r_s_over_a", c.r_s_over_a);
  f("max_basis_states", c.max_basis_states);
  f("integrator", c.integrator);
  f("dt_us", c.dt_us);
  f("krylov_dim", c.krylov_dim);
  f("krylov_tol", c.krylov_tol);
  f("record_every", c.record_every);
  f("renormalize", c.renormalize);
  f("probes", c.probes);
  f("patterns", c.patterns);
  f("correlation", c.correlation);
  f("edge_removed", c.edge_removed);
  f("fit_r_max_over_a", c.fit_r_max_over_a);
  f("subsets", c.subsets);
  f("mi_curve", c.mi_curve);
  f("density_level", c.density_level);
  f("density_tol", c.density_tol);
  f("output_dir", c.output_dir);
  f("threads", c.threads);
  f("rng_seed", c.rng_seed);
  f("save_amplitudes", c.save_amplitudes);
}

const std::set<std::string, std::less<>>& numeric_keys() {
  static const std::set<std::string, std::less<>> keys = {
      "a_um",        "tau_us",      "tq_us",       "omega0_mhz",    "delta_i_mhz",
      "delta_q_mhz", "delta_f_rb_mhz", "delta_f_over_omega0", "nu", "ramp_fraction",
      "c6_rbrb_ghz", "c6_cscs_ghz", "c6_rbcs_ghz", "r_s_over_a",    "detuning_sign",
      "interaction_cutoff_over_a", "dt_us"};
  return keys;
}

const std::set<std::string, std::less<>>& derived_axes() {
  static const std::set<std::string, std::less<>> keys = {"delta_i_over_omega0", "delta_q_over_omega0",
                                                          "rb_over_a", "tq_over_tau"};
  return keys;
}

// 1-based line of the first occurrence of "key" in the source text.
std::string locate(std::string_view source, std::string_view source_name, const std::string& key) {
  std::string where(source_name);
  if (source.empty()) return where;
  const auto pos = source.find("\"" + key + "\"");
  if (pos == std::string_view::npos) return where;
  const auto line = 1 + std::count(source.begin(), source.begin() + static_cast<std::ptrdiff_t>(pos), '\n');
  return where + ":" + std::to_string(line);
}

template <class T>
void read_value(const json& v, T& out) {
  out = v.get<T>();
}

template <class T>
void read_value(const json& v, std::optional<T>& out) {
  if (v.is_null())
    out.reset();
  else
    out = v.get<T>();
}

template <class T>
void write_value(json& j, const char* key, const T& v) {
  j[key] = v;
}

template <class T>
void write_value(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

bool finite_json(const json& v) { return !v.is_number_float() || std::isfinite(v.get<double>()); }

std::vector<double> axis_values(const json& a, const std::string& where) {
  if (a.contains("values")) return a["values"].get<std::vector<double>>();
  if (a.contains("start") && a.contains("stop") && a.contains("step")) {
    const double start = a["start"].get<double>(), stop = a["stop"].get<double>(), step = a["step"].get<double>();
    if (!(step > 0.0) || stop < start) throw ConfigError(where + ": sweep range needs step > 0 and stop >= start");
    std::vector<double> out;
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
  }
  throw ConfigError(where + ": sweep axis needs 'values' or 'start'/'stop'/'step'");
}

}  // namespace

json RunConfig::to_json() const {
  json j = json::object();
  visit_fields(*this, [&](const char* key, const auto& v) { write_value(j, key, v); });
  json axes = json::array();
  for (const auto& a : sweep) axes.push_back({{"name", a.name}, {"values", a.values}});
  j["sweep"] = axes;
  return j;
}

RunConfig RunConfig::from_json(const json& j, std::string_view source_text) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  std::set<std::string> known{"sweep"};
  visit_fields(c, [&](const char* key, auto& field) {
    known.insert(key);
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    try {
      if (!finite_json(v)) throw ConfigError("value is not finite");
      read_value(v, field);
    } catch (const json::exception& e) {
      throw ConfigError(locate(source_text, "config", key) + ": key '" + key + "' has the wrong type (" +
                        v.type_name() + ")");
    } catch (const ConfigError& e) {
      throw ConfigError(locate(source_text, "config", key) + ": key '" + key + "': " + e.what());
    }
  });
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) throw ConfigError(locate(source_text, "config", key) + ": unknown key '" + key + "'");

  if (j.contains("sweep")) {
    const std::string where = locate(source_text, "config", "sweep");
    if (!j["sweep"].is_array()) throw ConfigError(where + ": 'sweep' must be a list of axes");
    try {
      for (const auto& a : j["sweep"]) {
        SweepAxis axis{a.at("name").get<std::string>(), axis_values(a, where)};
        if (!is_sweep_axis(axis.name))
          throw ConfigError(locate(source_text, "config", axis.name) + ": unknown sweep axis '" + axis.name + "'");
        if (axis.values.empty()) throw ConfigError(where + ": sweep axis '" + axis.name + "' has no values");
        for (double v : axis.values)
          if (!std::isfinite(v)) throw ConfigError(where + ": sweep axis '" + axis.name + "' has a non-finite value");
        c.sweep.push_back(std::move(axis));
      }
    } catch (const json::exception& e) {
      throw ConfigError(where + ": malformed sweep axis: " + e.what());
    }
  }

  auto fail = [&](const std::string& key, const std::string& msg) {
    throw ConfigError(locate(source_text, "config", key) + ": " + msg);
  };
  if (!(c.tau_us > 0.0)) fail("tau_us", "tau_us must be positive");
  if (!(c.omega0_mhz > 0.0)) fail("omega0_mhz", "omega0_mhz must be positive");
  if (c.delta_f_rb_mhz && c.delta_f_over_omega0)
    fail("delta_f_over_omega0", "give either delta_f_rb_mhz or delta_f_over_omega0, not both");
  if (c.detuning_sign != 1.0 && c.detuning_sign != -1.0) fail("detuning_sign", "detuning_sign must be +1 or -1");
  if (!(c.r_s_over_a > 0.0)) fail("r_s_over_a", "r_s_over_a must be positive");
  if (c.threads < 1) fail("threads", "threads must be at least 1");
  if (c.krylov_dim < 2) fail("krylov_dim", "krylov_dim must be at least 2");
  if (c.dt_us < 0.0) fail("dt_us", "dt_us must be non-negative");
  try {
    parse_integrator(c.integrator);
  } catch (const std::invalid_argument& e) {
    fail("integrator", e.what());
  }
  for (const auto& [name, pattern] : c.patterns)
    if (pattern.find_first_not_of("gr") != std::string::npos)
      fail(name, "pattern '" + name + "' may only contain 'g' and 'r'");
  return c;
}

std::string RunConfig::hash() const {
  json j = to_json();
  j.erase("output_dir");
  j.erase("threads");
  return hex64(fnv1a(j.dump()));
}

RunConfig parse_config(std::string_view text, std::string_view source_name) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(upto), '\n');
    throw ConfigError(std::string(source_name) + ":" + std::to_string(line) + ": JSON syntax error: " + e.what());
  }
  try {
    return RunConfig::from_json(j, text);
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    if (msg.rfind("config", 0) == 0) msg.replace(0, 6, source_name);
    throw ConfigError(msg);
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void apply_override(json& j, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos || eq == 0)
    throw ConfigError("override '" + std::string(assignment) + "' is not of the form key=value");
  const std::string key(assignment.substr(0, eq));
  const std::string text(assignment.substr(eq + 1));
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &j;
  std::string_view rest = key;
  while (true) {
    const auto dot = rest.find('.');
    const std::string part(rest.substr(0, dot));
    if (dot == std::string_view::npos) {
      (*node)[part] = value;
      break;
    }
    node = &(*node)[part];
    if (!node->is_object() && !node->is_null()) throw ConfigError("override key '" + key + "' is not an object path");
    rest.remove_prefix(dot + 1);
  }
}

RunConfig with_overrides(const RunConfig& cfg, const std::vector<std::string>& assignments) {
  if (assignments.empty()) return cfg;
  json j = cfg.to_json();
  for (const auto& a : assignments) apply_override(j, a);
  try {
    return RunConfig::from_json(j);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("--set: ") + e.what());
  }
}

bool is_sweep_axis(std::string_view name) { return numeric_keys().contains(name) || derived_axes().contains(name); }

RunConfig at_sweep_point(const RunConfig& cfg, const std::vector<std::pair<std::string, double>>& point) {
  RunConfig c = cfg;
  c.sweep.clear();
  json j = c.to_json();
  // physical axes first, so dimensionless ones see the point's Ω₀, a and τ
  for (const auto& [name, value] : point)
    if (numeric_keys().contains(name)) {
      j[name] = value;
      if (name == "delta_f_over_omega0") j.erase("delta_f_rb_mhz");
      if (name == "delta_f_rb_mhz") j.erase("delta_f_over_omega0");
    }
  c = RunConfig::from_json(j);
  for (const auto& [name, value] : point) {
    if (name == "tq_over_tau") c.tq_us = value * c.tau_us;
    if (name == "rb_over_a") {
      // Ω₀ such that the Rb–Rb blockade radius equals value·a
      const double a = c.a_um ? *c.a_um : load_ruby_patch(c.patch).a();
      c.omega0_mhz = c.c6_rbrb_ghz * 1.0e3 / std::pow(value * a, 6);
    }
  }
  for (const auto& [name, value] : point) {
    if (name == "delta_i_over_omega0") c.delta_i_mhz = value * c.omega0_mhz;
    if (name == "delta_q_over_omega0") c.delta_q_mhz = value * c.omega0_mhz;
  }
  return c;
}

ResolvedRun resolve(const RunConfig& cfg) {
  try {
    LatticePatch patch = cfg.a_um ? build_ruby_patch(cfg.patch, *cfg.a_um) : load_ruby_patch(cfg.patch);
    if (cfg.species) patch = patch.with_species(resolve_species(*cfg.species));
    const double a = patch.a();

    const double omega0 = units::mhz_to_angular(cfg.omega0_mhz);
    SweepQuenchSweep pulse;
    pulse.tau = cfg.tau_us;
    pulse.t_q = cfg.tq_us;
    pulse.omega0 = omega0;
    pulse.delta_initial = cfg.delta_i_mhz ? units::mhz_to_angular(*cfg.delta_i_mhz) : -4.0 * omega0;
    pulse.delta_quench = units::mhz_to_angular(cfg.delta_q_mhz);
    pulse.delta_final_rb = cfg.delta_f_rb_mhz ? units::mhz_to_angular(*cfg.delta_f_rb_mhz)
                                              : cfg.delta_f_over_omega0.value_or(4.0) * omega0;
    pulse.nu = cfg.nu;
    pulse.ramp_fraction = cfg.ramp_fraction;
    pulse.validate();

    EvolutionConfig evo;
    evo.method = parse_integrator(cfg.integrator);
    evo.dt = cfg.dt_us;
    evo.krylov_dim = cfg.krylov_dim;
    evo.krylov_tol = cfg.krylov_tol;
    evo.record_every = cfg.record_every;
    evo.renormalize = cfg.renormalize;
    evo.validate();

    std::optional<double> cutoff;
    if (cfg.interaction_cutoff_over_a) cutoff = *cfg.interaction_cutoff_over_a * a;
    return ResolvedRun{std::move(patch),
                       C6Table::from_ghz(cfg.c6_rbrb_ghz, cfg.c6_cscs_ghz, cfg.c6_rbcs_ghz),
                       pulse,
                       evo,
                       cfg.r_s_over_a * a,
                       cutoff};
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

std::uint64_t parse_pattern(std::string_view pattern, int n_sites) {
  if (static_cast<int>(pattern.size()) != n_sites)
    throw ConfigError("pattern '" + std::string(pattern) + "' has " + std::to_string(pattern.size()) +
                      " characters for a " + std::to_string(n_sites) + "-site patch");
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == 'r')
      s |= std::uint64_t{1} << i;
    else if (pattern[i] != 'g')
      throw ConfigError("pattern '" + std::string(pattern) + "' may only contain 'g' and 'r'");
  }
  return s;
}

}  // namespace rydqsl
