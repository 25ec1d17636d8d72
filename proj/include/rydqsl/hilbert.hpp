#pragma once

#include "rydqsl/geometry.hpp"
#include "rydqsl/interactions.hpp"
#include "rydqsl/pulse.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace rydqsl {

/// Bit i set ⇔ site i is in the Rydberg state.
using Occupancy = std::uint64_t;
using StateVector = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultMaxBasisStates = std::size_t{1} << 24;

/// Blockade-truncated computational basis: all independent sets of the
/// exclusion graph (site pairs closer than r_s), ordered by (popcount, value).
class ConstrainedBasis {
 public:
  /// Builds the basis without checking the states against the blockade; the
  /// validation tooling uses this to inject faults.
  static ConstrainedBasis from_states(const LatticePatch& patch, double r_s_um, std::vector<Occupancy> states,
                                      const InteractionTable& vtab);

  std::size_t dim() const { return states_.size(); }
  int n_sites() const { return n_sites_; }
  double r_s() const { return r_s_; }
  const std::vector<Occupancy>& states() const { return states_; }
  Occupancy state(std::size_t k) const { return states_[k]; }
  std::optional<std::size_t> index_of(Occupancy s) const;

  /// Σ_{i<j ∈ s} V_ij per state (rad/µs).
  const Eigen::VectorXd& energies() const { return energy_; }
  const Eigen::VectorXd& excited_rb() const { return k_rb_; }
  const Eigen::VectorXd& excited_cs() const { return k_cs_; }
  Occupancy rb_mask() const { return rb_mask_; }
  Occupancy cs_mask() const { return cs_mask_; }
  /// Sites closer than r_s to site i.
  Occupancy exclusion_mask(int i) const { return exclusion_[i]; }

  /// Indices of the states reached from state k by flipping one bit.
  std::span<const std::uint32_t> flips(std::size_t k) const {
    return {flip_targets_.data() + flip_offsets_[k], flip_targets_.data() + flip_offsets_[k + 1]};
  }

  std::size_t memory_bytes() const;

 private:
  ConstrainedBasis() = default;

  int n_sites_ = 0;
  double r_s_ = 0.0;
  std::vector<Occupancy> states_;
  std::unordered_map<Occupancy, std::uint32_t> index_;
  Eigen::VectorXd energy_, k_rb_, k_cs_;
  Occupancy rb_mask_ = 0, cs_mask_ = 0;
  std::vector<Occupancy> exclusion_;
  std::vector<std::size_t> flip_offsets_;
  std::vector<std::uint32_t> flip_targets_;
};

/// Exclusion masks: bit j of mask i set when 0 < |r_i − r_j| < r_s.
std::vector<Occupancy> exclusion_masks(const LatticePatch& patch, double r_s_um);

/// Throws ResourceError when the basis would exceed `max_states`.
ConstrainedBasis build_basis(const LatticePatch& patch, double r_s_um, const InteractionTable& vtab,
                             std::size_t max_states = kDefaultMaxBasisStates);

/// Diagonal interaction energy of one occupancy pattern.
double interaction_energy(Occupancy s, const InteractionTable& vtab);

/// All-ground state |g…g⟩.
StateVector ground_state(const ConstrainedBasis& basis);
/// Unit vector on the given occupancy; throws if it is not in the basis.
StateVector basis_state(const ConstrainedBasis& basis, Occupancy s);

/// Default sign of the detuning term: H ⊃ sign·Σ Δ_i n_i.
inline constexpr double kDefaultDetuningSign = -1.0;

/// out = H ψ for the drive values in `drive`:
///   H = (Ω/2) Σ_i σˣ_i + sign·Σ_i Δ_{s(i)} n_i + Σ_{i<j} V_ij n_i n_j
/// restricted to the basis.
void apply_hamiltonian(const ConstrainedBasis& basis, const DriveSample& drive,
                       const Eigen::Ref<const StateVector>& psi, Eigen::Ref<StateVector> out,
                       double detuning_sign = kDefaultDetuningSign);

StateVector apply_hamiltonian(const ConstrainedBasis& basis, const SweepQuenchSweep& pulse, double t,
                              const StateVector& psi, double detuning_sign = kDefaultDetuningSign);

inline constexpr std::size_t kDenseHamiltonianLimit = 4096;

/// Explicit matrix of apply_hamiltonian; dim ≤ kDenseHamiltonianLimit.
Eigen::MatrixXcd dense_hamiltonian(const ConstrainedBasis& basis, const DriveSample& drive,
                                   double detuning_sign = kDefaultDetuningSign);

/// Matrix-free H(t) bound to a basis, in the form the integrators consume.
class ConstrainedHamiltonian {
 public:
  explicit ConstrainedHamiltonian(const ConstrainedBasis& basis, double detuning_sign = kDefaultDetuningSign)
      : basis_(&basis), sign_(detuning_sign) {}

  Eigen::Index dim() const { return static_cast<Eigen::Index>(basis_->dim()); }
  void apply(const DriveSample& drive, const Eigen::Ref<const StateVector>& in, Eigen::Ref<StateVector> out) const {
    apply_hamiltonian(*basis_, drive, in, out, sign_);
  }

 private:
  const ConstrainedBasis* basis_;
  double sign_;
};

/// Names of violated basis invariants (empty when the basis is consistent).
std::vector<std::string> check_basis_invariants(const ConstrainedBasis& basis, const LatticePatch& patch,
                                                const InteractionTable& vtab);

}  // namespace rydqsl
