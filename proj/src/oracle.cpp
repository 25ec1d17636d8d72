#include "rydqsl/oracle.hpp"

#include "rydqsl/errors.hpp"

#include <stdexcept>

namespace rydqsl::oracle {

namespace {

void check_size(int n) {
  if (n > kMaxSites)
    throw ResourceError("full-space oracle is limited to " + std::to_string(kMaxSites) + " sites");
}

}  // namespace

FullSpaceHamiltonian::FullSpaceHamiltonian(const LatticePatch& patch, const C6Table& c6, double detuning_sign)
    : n_(patch.size()), sign_(detuning_sign) {
  check_size(n_);
  const Eigen::Index dim = Eigen::Index{1} << n_;
  interaction_ = Eigen::VectorXd::Zero(dim);
  n_rb_ = Eigen::VectorXd::Zero(dim);
  n_cs_ = Eigen::VectorXd::Zero(dim);
  std::vector<std::vector<double>> v(n_, std::vector<double>(n_, 0.0));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (i != j) {
        const double r = (patch.site(i).pos - patch.site(j).pos).norm();
        const double cij = c6.for_pair(patch.site(i).species, patch.site(j).species);
        v[i][j] = cij / std::pow(r, 6);
      }
  for (Eigen::Index x = 0; x < dim; ++x) {
    for (int i = 0; i < n_; ++i) {
      if (!((x >> i) & 1)) continue;
      (patch.site(i).species == Species::Rb ? n_rb_ : n_cs_)[x] += 1.0;
      for (int j = i + 1; j < n_; ++j)
        if ((x >> j) & 1) interaction_[x] += v[i][j];
    }
  }
}

void FullSpaceHamiltonian::apply(const DriveSample& drive, const Eigen::Ref<const Eigen::VectorXcd>& in,
                                 Eigen::Ref<Eigen::VectorXcd> out) const {
  const Eigen::Index dim = interaction_.size();
  out = (interaction_ + sign_ * drive.delta_rb * n_rb_ + sign_ * drive.delta_cs * n_cs_)
            .cast<std::complex<double>>()
            .cwiseProduct(in);
  const double half = 0.5 * drive.omega;
  for (Eigen::Index x = 0; x < dim; ++x)
    for (int i = 0; i < n_; ++i) out[x] += half * in[x ^ (Eigen::Index{1} << i)];
}

FullSpaceState full_ground_state(int n_sites) {
  check_size(n_sites);
  FullSpaceState s{n_sites, Eigen::VectorXcd::Zero(Eigen::Index{1} << n_sites)};
  s.amplitudes[0] = 1.0;
  return s;
}

FullSpaceState full_propagate(const LatticePatch& patch, const C6Table& c6, const Drive& drive,
                              const EvolutionConfig& cfg, const FullSpaceState& psi0, double detuning_sign) {
  check_size(patch.size());
  if (psi0.n_sites != patch.size()) throw std::invalid_argument("initial full-space state has the wrong size");
  FullSpaceHamiltonian h(patch, c6, detuning_sign);
  auto tr = propagate_operator(h, drive, psi0.amplitudes, cfg);
  return {patch.size(), std::move(tr.final_state)};
}

FullSpaceState full_propagate(const LatticePatch& patch, const C6Table& c6, const SweepQuenchSweep& pulse,
                              const EvolutionConfig& cfg, double detuning_sign) {
  return full_propagate(patch, c6, pulse.drive(), cfg, full_ground_state(patch.size()), detuning_sign);
}

Eigen::VectorXd full_site_densities(const FullSpaceState& state) {
  Eigen::VectorXd n = Eigen::VectorXd::Zero(state.n_sites);
  for (Eigen::Index x = 0; x < state.amplitudes.size(); ++x) {
    const double p = std::norm(state.amplitudes[x]);
    for (int i = 0; i < state.n_sites; ++i)
      if ((x >> i) & 1) n[i] += p;
  }
  return n;
}

Eigen::MatrixXcd full_partial_trace(const FullSpaceState& state, const std::vector<int>& subset) {
  check_size(state.n_sites);
  std::vector<int> rest;
  for (int i = 0; i < state.n_sites; ++i)
    if (std::find(subset.begin(), subset.end(), i) == subset.end()) rest.push_back(i);
  const Eigen::Index da = Eigen::Index{1} << subset.size();
  const Eigen::Index db = Eigen::Index{1} << rest.size();
  auto compose = [&](Eigen::Index pa, Eigen::Index pb) {
    Eigen::Index x = 0;
    for (std::size_t k = 0; k < subset.size(); ++k) x |= ((pa >> k) & 1) << subset[k];
    for (std::size_t k = 0; k < rest.size(); ++k) x |= ((pb >> k) & 1) << rest[k];
    return x;
  };
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(da, da);
  for (Eigen::Index pa = 0; pa < da; ++pa)
    for (Eigen::Index pa2 = 0; pa2 < da; ++pa2)
      for (Eigen::Index pb = 0; pb < db; ++pb)
        rho(pa, pa2) += state.amplitudes[compose(pa, pb)] * std::conj(state.amplitudes[compose(pa2, pb)]);
  return rho;
}

FullSpaceState embed(const std::vector<std::uint64_t>& basis_states, const Eigen::VectorXcd& psi, int n_sites) {
  check_size(n_sites);
  if (psi.size() != static_cast<Eigen::Index>(basis_states.size()))
    throw std::invalid_argument("state vector dimension does not match the basis");
  FullSpaceState s{n_sites, Eigen::VectorXcd::Zero(Eigen::Index{1} << n_sites)};
  for (std::size_t k = 0; k < basis_states.size(); ++k)
    s.amplitudes[static_cast<Eigen::Index>(basis_states[k])] = psi[static_cast<Eigen::Index>(k)];
  return s;
}

}  // namespace rydqsl::oracle
