#pragma once

// Brute-force references over the full 2^N space. Nothing here uses the
// constrained basis or its Hamiltonian so agreement with them is evidence.

#include "rydqsl/evolve.hpp"
#include "rydqsl/geometry.hpp"
#include "rydqsl/interactions.hpp"
#include "rydqsl/pulse.hpp"

#include <Eigen/Dense>

#include <vector>

namespace rydqsl::oracle {

inline constexpr int kMaxSites = 12;

/// Amplitudes over all 2^N occupancies, index = occupancy bit pattern.
struct FullSpaceState {
  int n_sites = 0;
  Eigen::VectorXcd amplitudes;
};

/// Unconstrained Rydberg Hamiltonian with the full interaction table.
class FullSpaceHamiltonian {
 public:
  FullSpaceHamiltonian(const LatticePatch& patch, const C6Table& c6, double detuning_sign = -1.0);

  Eigen::Index dim() const { return interaction_.size(); }
  void apply(const DriveSample& drive, const Eigen::Ref<const Eigen::VectorXcd>& in,
             Eigen::Ref<Eigen::VectorXcd> out) const;

 private:
  int n_;
  Eigen::VectorXd interaction_;
  Eigen::VectorXd n_rb_, n_cs_;
  double sign_;
};

FullSpaceState full_ground_state(int n_sites);

FullSpaceState full_propagate(const LatticePatch& patch, const C6Table& c6, const Drive& drive,
                              const EvolutionConfig& cfg, const FullSpaceState& psi0, double detuning_sign = -1.0);

FullSpaceState full_propagate(const LatticePatch& patch, const C6Table& c6, const SweepQuenchSweep& pulse,
                              const EvolutionConfig& cfg, double detuning_sign = -1.0);

Eigen::VectorXd full_site_densities(const FullSpaceState& state);

/// Textbook partial trace onto `subset`; row index bit k ↔ subset[k].
Eigen::MatrixXcd full_partial_trace(const FullSpaceState& state, const std::vector<int>& subset);

/// Zero-pads a constrained-basis state into the full space.
FullSpaceState embed(const std::vector<std::uint64_t>& basis_states, const Eigen::VectorXcd& psi, int n_sites);

}  // namespace rydqsl::oracle
