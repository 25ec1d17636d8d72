#pragma once

#include "rydqsl/evolve.hpp"
#include "rydqsl/geometry.hpp"
#include "rydqsl/interactions.hpp"
#include "rydqsl/pulse.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rydqsl {

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

/// Flat key/value run description. Frequencies in MHz, times in µs, C6 in GHz·µm⁶.
struct RunConfig {
  std::string patch = "triangle-3";
  std::optional<std::string> species;
  std::optional<double> a_um;

  double tau_us = 2.5;
  double tq_us = 0.0;
  double omega0_mhz = 2.0;
  std::optional<double> delta_i_mhz;     ///< default −4·Ω₀
  double delta_q_mhz = 0.0;
  std::optional<double> delta_f_rb_mhz;
  std::optional<double> delta_f_over_omega0;  ///< default 4 when neither final detuning is given
  double nu = 1.0;
  double ramp_fraction = 0.1;

  double c6_rbrb_ghz = 2550.0;
  double c6_cscs_ghz = 2350.0;
  double c6_rbcs_ghz = 3700.0;
  std::optional<double> interaction_cutoff_over_a;
  double detuning_sign = -1.0;
  double r_s_over_a = 1.5;
  std::uint64_t max_basis_states = std::uint64_t{1} << 24;

  std::string integrator = "krylov_magnus4";
  double dt_us = 0.0;
  int krylov_dim = 12;
  double krylov_tol = 1.0e-13;
  int record_every = 0;
  bool renormalize = false;

  std::vector<std::string> probes;
  /// name -> pattern string over {g, r}, character i ↔ site i
  std::map<std::string, std::string> patterns;
  bool correlation = false;
  bool edge_removed = false;
  std::optional<double> fit_r_max_over_a;
  std::optional<std::string> subsets;
  bool mi_curve = false;
  double density_level = 0.25;
  double density_tol = 0.10;

  std::vector<SweepAxis> sweep;
  std::string output_dir = "out";
  int threads = 1;
  std::uint64_t rng_seed = 0;
  bool save_amplitudes = false;

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j, std::string_view source_text = {});
  /// FNV-1a over the canonical serialization without output_dir and threads.
  std::string hash() const;
};

/// Parses a config file; errors carry file:line of the offending key.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::string_view text, std::string_view source_name = "<config>");

/// Applies `key=value`; the value is read as JSON when it parses, else as a string.
/// Dotted keys address nested objects (patterns.PD=grg).
void apply_override(nlohmann::json& j, std::string_view assignment);
RunConfig with_overrides(const RunConfig& cfg, const std::vector<std::string>& assignments);

/// Axis names accepted by sweeps: numeric config keys and the dimensionless
/// delta_f_over_omega0, delta_i_over_omega0, delta_q_over_omega0, rb_over_a, tq_over_tau.
bool is_sweep_axis(std::string_view name);
/// The config with one sweep point applied (dimensionless axes resolved
/// against the configured Ω₀, a and τ).
RunConfig at_sweep_point(const RunConfig& cfg, const std::vector<std::pair<std::string, double>>& point);

/// Parsed physical inputs of one run.
struct ResolvedRun {
  LatticePatch patch;
  C6Table c6;
  SweepQuenchSweep pulse;
  EvolutionConfig evolution;
  double r_s_um;
  std::optional<double> cutoff_um;
};

ResolvedRun resolve(const RunConfig& cfg);

/// Pattern string over {g, r} to an occupancy (character i ↔ site i).
std::uint64_t parse_pattern(std::string_view pattern, int n_sites);

}  // namespace rydqsl
