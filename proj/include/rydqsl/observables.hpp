#pragma once

#include "rydqsl/geometry.hpp"
#include "rydqsl/hilbert.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rydqsl {

/// |ψ[pattern]|²; exactly 0 for patterns outside the basis.
double config_probability(const ConstrainedBasis& basis, const StateVector& psi, Occupancy pattern);

/// Occupancy with the listed sites excited.
Occupancy occupancy_from_sites(std::span<const int> sites);

Eigen::VectorXd site_densities(const ConstrainedBasis& basis, const StateVector& psi);
double average_density(const ConstrainedBasis& basis, const StateVector& psi);

/// ⟨n_i n_j⟩ for all pairs (diagonal holds ⟨n_i⟩).
Eigen::MatrixXd density_correlations(const ConstrainedBasis& basis, const StateVector& psi);

/// Range of dimensionless detunings Δ_Rb/Ω₀ compatible with the QSL filling.
struct DensityWindow {
  double mu_i = 0.0;
  double mu_f = 0.0;
  double level = 0.25;
  double tol = 0.10;
  bool empty = true;
};

/// μ_i: smallest Δ where ñ reaches level − tol; μ_f: largest Δ with ñ ≤ level.
/// Both are located by linear interpolation between the bracketing samples.
/// `curve` holds (Δ/Ω₀, ñ) pairs with strictly increasing Δ.
DensityWindow density_window(std::span<const std::pair<double, double>> curve, double level = 0.25,
                             double tol = 0.10);

/// Per-star probabilities indexed by StarClass.
using StarProbabilities = std::array<double, 4>;

std::vector<StarProbabilities> star_statistics(const ConstrainedBasis& basis, const StateVector& psi,
                                               const LatticePatch& patch);

struct CorrelationEntry {
  double r_um = 0.0;
  double g2 = 0.0;
  int n_pairs = 0;
};

/// g²(r) on the distinct pair distances; the first entry (r = 0) is the Mandel Q value.
struct CorrelationSeries {
  double a_um = 1.0;
  std::vector<CorrelationEntry> entries;
};

/// Connected density-density correlation averaged over unordered pairs at
/// each distance. `site_filter`, when given, restricts the sites included.
CorrelationSeries g2_correlation(const ConstrainedBasis& basis, const StateVector& psi, const LatticePatch& patch,
                                 std::optional<std::vector<int>> site_filter = std::nullopt);

struct FitOptions {
  int kappa_seeds = 16;
  int xi_seeds = 8;
  std::uint64_t rng_seed = 0;
  /// Fit only entries with r ≤ r_max_over_a·a.
  std::optional<double> r_max_over_a;
  double rel_tol = 1.0e-10;
};

/// g̃(r) = A·exp(−r/ξ)·cos(κr + φ) + B with r measured in units of a.
struct CorrelationFit {
  double A = 0.0;
  double xi_over_a = 0.0;
  double kappa_a = 0.0;
  double phi = 0.0;
  double B = 0.0;
  double rms_residual = 0.0;
  /// RMS of the best multistart seed before local refinement.
  double seed_rms = 0.0;
  /// ξ beyond 100·max r, or an all-zero series.
  bool degenerate = false;

  double operator()(double r_over_a) const;
};

CorrelationFit fit_correlation_length(const CorrelationSeries& series, const FitOptions& options = {});

}  // namespace rydqsl
