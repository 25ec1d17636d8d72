#pragma once

// Orchestration behind the command-line tool. Commands throw ConfigError,
// InvariantError or ResourceError; the tool maps them to exit codes.

#include "rydqsl/config.hpp"
#include "rydqsl/evolve.hpp"
#include "rydqsl/hilbert.hpp"
#include "rydqsl/interactions.hpp"

#include <json.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace rydqsl {

/// Patch, couplings and basis shared by every point with the same geometry.
struct RunContext {
  ResolvedRun run;
  InteractionTable vtab;
  ConstrainedBasis basis;
};

std::shared_ptr<const RunContext> prepare(const RunConfig& cfg);

/// Probes named in cfg.probes: n_bar, n_<site>, P_<pattern name>.
std::vector<NamedProbe> make_probes(const RunConfig& cfg, const LatticePatch& patch, const ConstrainedBasis& basis);

using Scalars = std::vector<std::pair<std::string, double>>;

/// Final-state scalars: n_bar, star class means, pattern probabilities,
/// fit parameters when `correlation` is set, entropies when `subsets` is set.
Scalars final_scalars(const RunConfig& cfg, const LatticePatch& patch, const ConstrainedBasis& basis,
                      const StateVector& psi);

struct PointResult {
  Trajectory trajectory;
  Scalars scalars;
};

/// Propagates from |g…g⟩ under run.pulse on a basis built for run.patch.
PointResult run_point(const RunConfig& cfg, const ResolvedRun& run, const ConstrainedBasis& basis,
                      bool with_probes = true);

/// Single propagation; writes trajectory.csv, summary.json and optionally
/// amplitudes.bin into cfg.output_dir. Returns the summary document.
nlohmann::json cmd_run(const RunConfig& cfg, std::ostream& log);

struct SweepRow {
  std::vector<double> point;
  std::string status = "ok";
  Scalars scalars;
};

struct SweepResult {
  std::vector<std::string> axes;
  std::vector<SweepRow> rows;  // sorted by axis tuple
};

/// Cartesian-product sweep executed on cfg.threads workers. Points that exceed
/// the resource budget are reported with a status instead of aborting.
SweepResult run_sweep(const RunConfig& cfg, std::ostream& log);
void write_sweep_csv(std::ostream& os, const SweepResult& result, const std::string& config_hash);
SweepResult cmd_sweep(const RunConfig& cfg, std::ostream& log);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool passed() const;
};

enum class FaultInjection { None, DropState, BlockadeViolation, CorruptEnergy };
FaultInjection parse_fault(std::string_view name);

/// Oracle comparisons and invariant suites for a patch with at most 12 sites.
ValidationReport cmd_validate(const RunConfig& cfg, std::ostream& log, FaultInjection fault = FaultInjection::None);

/// id, x_um, y_um, species, is_edge, stars
void write_lattice_csv(std::ostream& os, const LatticePatch& patch);

struct EntropyRequest {
  std::filesystem::path amplitudes;
  std::optional<std::string> subsets;
  std::optional<std::vector<int>> ordering;
  std::filesystem::path output_dir = "out";
};

/// TQEE and mutual-information curve of a saved amplitude file.
nlohmann::json cmd_entropy(const EntropyRequest& req, std::ostream& log);

}  // namespace rydqsl
