#pragma once

#include "rydqsl/hilbert.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rydqsl {

struct SubsetSpec {
  std::string name;
  std::vector<int> sites;
};

/// Reduced density matrix over the subset patterns realized in the basis.
struct ReducedDensity {
  /// Occupancies (restricted to the subset) labelling rows and columns.
  std::vector<Occupancy> patterns;
  Eigen::MatrixXcd rho;
};

/// ρ_A = Tr_{A^c} |ψ⟩⟨ψ|. The subset must be non-empty and proper.
ReducedDensity reduced_density(const ConstrainedBasis& basis, const StateVector& psi, const SubsetSpec& subset);

inline constexpr double kEigenFloor = 1.0e-12;

/// −Σ λ ln λ over eigenvalues above `eigen_floor`, in nats. Eigenvalues in
/// (−1e-10, 0) are treated as zero; more negative ones or a trace away from
/// one by more than 1e-8 throw.
template <class Derived>
double von_neumann_entropy(const Eigen::MatrixBase<Derived>& rho, double eigen_floor = kEigenFloor) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const double trace = std::real(rho.trace());
  if (std::abs(trace - 1.0) > 1.0e-8) throw std::invalid_argument("density matrix trace deviates from 1");
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho.derived(), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const double lambda = es.eigenvalues()[k];
    if (lambda < -1.0e-10) throw std::invalid_argument("density matrix is not positive semidefinite");
    if (lambda > eigen_floor) s -= lambda * std::log(lambda);
  }
  return s;
}

/// Entropy of the reduced state on `sites`; zero for the full (pure) system.
double subset_entropy(const ConstrainedBasis& basis, const StateVector& psi, std::vector<int> sites,
                      double eigen_floor = kEigenFloor);

/// I_AB = S_A + S_B − S_AB for disjoint A and B.
double mutual_information(const ConstrainedBasis& basis, const StateVector& psi, const SubsetSpec& a,
                          const SubsetSpec& b);

/// (k, I(first k sites : rest)) for k = 1 … N−1.
std::vector<std::pair<int, double>> mutual_information_curve(const ConstrainedBasis& basis, const StateVector& psi,
                                                             const std::vector<int>& ordering);

struct EntropyReport {
  /// Keys A, B, C, AB, AC, BC, ABC; values in nats.
  std::map<std::string, double> entropies;
  std::optional<double> mutual_information;
  std::optional<double> gamma;
  double eigen_floor = kEigenFloor;

  /// γ from the stored entropies: −γ = S_A + S_B + S_C − S_AB − S_AC − S_BC + S_ABC.
  double inclusion_exclusion() const;
  double quantum_dimension() const { return gamma ? std::exp(*gamma) : 1.0; }
};

/// Kitaev–Preskill topological entanglement entropy on three disjoint regions.
EntropyReport tqee(const ConstrainedBasis& basis, const StateVector& psi, const SubsetSpec& a, const SubsetSpec& b,
                   const SubsetSpec& c, double eigen_floor = kEigenFloor);

}  // namespace rydqsl
