#include "rydqsl/hilbert.hpp"

#include "rydqsl/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace rydqsl {

namespace {

bool canonical_less(Occupancy a, Occupancy b) {
  const int pa = std::popcount(a), pb = std::popcount(b);
  return pa != pb ? pa < pb : a < b;
}

struct Enumerator {
  const std::vector<Occupancy>& excl;
  int n;
  std::size_t max_states;
  std::vector<Occupancy> out;

  void run(int site, Occupancy current) {
    if (site == n) {
      if (out.size() >= max_states)
        throw ResourceError("constrained basis exceeds the budget of " + std::to_string(max_states) + " states");
      out.push_back(current);
      return;
    }
    run(site + 1, current);
    // only lower-indexed sites are decided so far
    if ((excl[site] & current) == 0) run(site + 1, current | (Occupancy{1} << site));
  }
};

}  // namespace

std::vector<Occupancy> exclusion_masks(const LatticePatch& patch, double r_s_um) {
  const int n = patch.size();
  std::vector<Occupancy> masks(n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && patch.distance(i, j) < r_s_um) masks[i] |= Occupancy{1} << j;
  return masks;
}

double interaction_energy(Occupancy s, const InteractionTable& vtab) {
  double e = 0.0;
  for (Occupancy a = s; a; a &= a - 1) {
    const int i = std::countr_zero(a);
    for (Occupancy b = a & (a - 1); b; b &= b - 1) e += vtab(i, std::countr_zero(b));
  }
  return e;
}

ConstrainedBasis ConstrainedBasis::from_states(const LatticePatch& patch, double r_s_um,
                                               std::vector<Occupancy> states, const InteractionTable& vtab) {
  const int n = patch.size();
  if (vtab.rows() != n || vtab.cols() != n)
    throw std::invalid_argument("interaction table does not match the patch size");
  ConstrainedBasis b;
  b.n_sites_ = n;
  b.r_s_ = r_s_um;
  b.states_ = std::move(states);
  b.exclusion_ = exclusion_masks(patch, r_s_um);
  for (const auto& site : patch.sites())
    (site.species == Species::Rb ? b.rb_mask_ : b.cs_mask_) |= Occupancy{1} << site.id;

  const std::size_t dim = b.states_.size();
  if (dim > std::numeric_limits<std::uint32_t>::max()) throw ResourceError("basis too large for 32-bit indices");
  b.index_.reserve(dim);
  for (std::size_t k = 0; k < dim; ++k) b.index_.emplace(b.states_[k], static_cast<std::uint32_t>(k));

  b.energy_.resize(static_cast<Eigen::Index>(dim));
  b.k_rb_.resize(static_cast<Eigen::Index>(dim));
  b.k_cs_.resize(static_cast<Eigen::Index>(dim));
  b.flip_offsets_.assign(dim + 1, 0);
  for (std::size_t k = 0; k < dim; ++k) {
    const Occupancy s = b.states_[k];
    const auto ek = static_cast<Eigen::Index>(k);
    b.energy_[ek] = interaction_energy(s, vtab);
    b.k_rb_[ek] = std::popcount(s & b.rb_mask_);
    b.k_cs_[ek] = std::popcount(s & b.cs_mask_);
    for (int i = 0; i < n; ++i) {
      auto it = b.index_.find(s ^ (Occupancy{1} << i));
      if (it != b.index_.end()) b.flip_targets_.push_back(it->second);
    }
    b.flip_offsets_[k + 1] = b.flip_targets_.size();
  }
  b.flip_targets_.shrink_to_fit();
  return b;
}

std::optional<std::size_t> ConstrainedBasis::index_of(Occupancy s) const {
  auto it = index_.find(s);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ConstrainedBasis::memory_bytes() const {
  const std::size_t dim = states_.size();
  return dim * (sizeof(Occupancy) + 3 * sizeof(double) + sizeof(std::size_t)) +
         index_.size() * (sizeof(Occupancy) + sizeof(std::uint32_t) + 2 * sizeof(void*)) +
         flip_targets_.size() * sizeof(std::uint32_t);
}

ConstrainedBasis build_basis(const LatticePatch& patch, double r_s_um, const InteractionTable& vtab,
                             std::size_t max_states) {
  if (!(r_s_um > 0.0)) throw std::invalid_argument("subspace radius must be positive");
  const auto excl = exclusion_masks(patch, r_s_um);
  Enumerator e{excl, patch.size(), max_states, {}};
  e.run(0, 0);
  std::sort(e.out.begin(), e.out.end(), canonical_less);
  return ConstrainedBasis::from_states(patch, r_s_um, std::move(e.out), vtab);
}

StateVector ground_state(const ConstrainedBasis& basis) { return basis_state(basis, 0); }

StateVector basis_state(const ConstrainedBasis& basis, Occupancy s) {
  const auto k = basis.index_of(s);
  if (!k) throw std::invalid_argument("occupancy pattern is not in the constrained basis");
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(basis.dim()));
  psi[static_cast<Eigen::Index>(*k)] = 1.0;
  return psi;
}

void apply_hamiltonian(const ConstrainedBasis& basis, const DriveSample& drive,
                       const Eigen::Ref<const StateVector>& psi, Eigen::Ref<StateVector> out,
                       double detuning_sign) {
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  if (psi.size() != dim || out.size() != dim)
    throw std::invalid_argument("state vector dimension does not match the basis");
  const double half_omega = 0.5 * drive.omega;
  const double drb = detuning_sign * drive.delta_rb;
  const double dcs = detuning_sign * drive.delta_cs;
  const auto& u = basis.energies();
  const auto& krb = basis.excited_rb();
  const auto& kcs = basis.excited_cs();
  for (Eigen::Index k = 0; k < dim; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::uint32_t t : basis.flips(static_cast<std::size_t>(k))) acc += psi[t];
    out[k] = (u[k] + drb * krb[k] + dcs * kcs[k]) * psi[k] + half_omega * acc;
  }
}

StateVector apply_hamiltonian(const ConstrainedBasis& basis, const SweepQuenchSweep& pulse, double t,
                              const StateVector& psi, double detuning_sign) {
  const DriveSample d{rabi_at(pulse, t), detuning_at(pulse, t, Species::Rb), detuning_at(pulse, t, Species::Cs)};
  StateVector out(psi.size());
  apply_hamiltonian(basis, d, psi, out, detuning_sign);
  return out;
}

Eigen::MatrixXcd dense_hamiltonian(const ConstrainedBasis& basis, const DriveSample& drive,
                                   double detuning_sign) {
  if (basis.dim() > kDenseHamiltonianLimit)
    throw ResourceError("dense Hamiltonian limited to " + std::to_string(kDenseHamiltonianLimit) + " states");
  const auto dim = static_cast<Eigen::Index>(basis.dim());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    h(k, k) = basis.energies()[k] +
              detuning_sign * (drive.delta_rb * basis.excited_rb()[k] + drive.delta_cs * basis.excited_cs()[k]);
    for (std::uint32_t t : basis.flips(static_cast<std::size_t>(k))) h(k, t) += 0.5 * drive.omega;
  }
  return h;
}

std::vector<std::string> check_basis_invariants(const ConstrainedBasis& basis, const LatticePatch& patch,
                                                const InteractionTable& vtab) {
  std::vector<std::string> bad;
  const auto excl = exclusion_masks(patch, basis.r_s());
  const auto& states = basis.states();

  bool independent = true, closed = true, indexed = true, split = true, energy = true, ordered = true;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const Occupancy s = states[k];
    for (Occupancy a = s; a; a &= a - 1)
      if (excl[std::countr_zero(a)] & s) independent = false;
    for (Occupancy a = s; a; a &= a - 1)
      if (!basis.index_of(s & ~(a & -a))) closed = false;
    if (basis.index_of(s) != k) indexed = false;
    const auto ek = static_cast<Eigen::Index>(k);
    if (basis.excited_rb()[ek] + basis.excited_cs()[ek] != std::popcount(s)) split = false;
    const double e = interaction_energy(s, vtab);
    if (std::abs(basis.energies()[ek] - e) > 1e-9 * std::max(1.0, std::abs(e))) energy = false;
    if (k > 0 && !canonical_less(states[k - 1], s)) ordered = false;
  }
  if (!independent) bad.emplace_back("blockade_independent_sets");
  if (!closed) bad.emplace_back("closure_under_single_bit_clears");
  if (!indexed) bad.emplace_back("index_map_consistency");
  if (!split) bad.emplace_back("species_split_counts");
  if (!energy) bad.emplace_back("interaction_energy_cache");
  if (!ordered) bad.emplace_back("canonical_order");

  // Dimension law: when the exclusion graph is a disjoint union of the
  // patch's triangles, every triangle contributes exactly four states.
  const auto& tri = patch.triangles();
  if (!tri.empty() && 3 * static_cast<int>(tri.size()) == patch.size()) {
    std::vector<Occupancy> tri_excl(patch.size(), 0);
    for (const auto& t : tri)
      for (int i : t)
        for (int j : t)
          if (i != j) tri_excl[i] |= Occupancy{1} << j;
    if (tri_excl == excl) {
      std::size_t expected = 1;
      for (std::size_t i = 0; i < tri.size(); ++i) expected *= 4;
      if (basis.dim() != expected) bad.emplace_back("dimension_law");
    }
  }
  return bad;
}

}  // namespace rydqsl
