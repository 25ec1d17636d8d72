#include "rydqsl/entanglement.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace rydqsl {

namespace {

Occupancy mask_of(const std::vector<int>& sites, int n) {
  Occupancy m = 0;
  for (int i : sites) {
    if (i < 0 || i >= n) throw std::out_of_range("subset references unknown site " + std::to_string(i));
    if (m >> i & 1u) throw std::invalid_argument("subset lists site " + std::to_string(i) + " twice");
    m |= Occupancy{1} << i;
  }
  return m;
}

// Bit k of the result is bit sites[k] of s.
Occupancy compress(Occupancy s, const std::vector<int>& sites) {
  Occupancy out = 0;
  for (std::size_t k = 0; k < sites.size(); ++k) out |= ((s >> sites[k]) & 1u) << k;
  return out;
}

ReducedDensity reduce(const ConstrainedBasis& basis, const StateVector& psi, const std::vector<int>& sites) {
  const Occupancy mask = mask_of(sites, basis.n_sites());
  if (psi.size() != static_cast<Eigen::Index>(basis.dim()))
    throw std::invalid_argument("state vector dimension does not match the basis");

  ReducedDensity out;
  std::vector<Occupancy> local(basis.dim());
  for (std::size_t k = 0; k < basis.dim(); ++k) local[k] = compress(basis.state(k), sites);
  out.patterns = local;
  std::sort(out.patterns.begin(), out.patterns.end());
  out.patterns.erase(std::unique(out.patterns.begin(), out.patterns.end()), out.patterns.end());
  std::unordered_map<Occupancy, Eigen::Index> row;
  for (std::size_t p = 0; p < out.patterns.size(); ++p) row.emplace(out.patterns[p], static_cast<Eigen::Index>(p));

  // group basis states by their complement pattern
  std::unordered_map<Occupancy, std::vector<std::pair<Eigen::Index, std::complex<double>>>> groups;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const std::complex<double> amp = psi[static_cast<Eigen::Index>(k)];
    if (amp == 0.0) continue;
    groups[basis.state(k) & ~mask].emplace_back(row.at(local[k]), amp);
  }
  const auto dim = static_cast<Eigen::Index>(out.patterns.size());
  out.rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [q, members] : groups)
    for (const auto& [p, amp_p] : members)
      for (const auto& [pp, amp_pp] : members) out.rho(p, pp) += amp_p * std::conj(amp_pp);
  return out;
}

std::vector<int> complement(const std::vector<int>& sites, int n) {
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int i : sites) in[static_cast<std::size_t>(i)] = true;
  std::vector<int> out;
  for (int i = 0; i < n; ++i)
    if (!in[static_cast<std::size_t>(i)]) out.push_back(i);
  return out;
}

std::size_t realized_patterns(const ConstrainedBasis& basis, const std::vector<int>& sites) {
  std::vector<Occupancy> local(basis.dim());
  for (std::size_t k = 0; k < basis.dim(); ++k) local[k] = compress(basis.state(k), sites);
  std::sort(local.begin(), local.end());
  return static_cast<std::size_t>(std::unique(local.begin(), local.end()) - local.begin());
}

void require_disjoint(std::initializer_list<const SubsetSpec*> subsets) {
  std::set<int> seen;
  for (const auto* s : subsets)
    for (int i : s->sites)
      if (!seen.insert(i).second)
        throw std::invalid_argument("subsets overlap at site " + std::to_string(i));
}

std::vector<int> join(std::initializer_list<const SubsetSpec*> subsets) {
  std::vector<int> out;
  for (const auto* s : subsets) out.insert(out.end(), s->sites.begin(), s->sites.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

ReducedDensity reduced_density(const ConstrainedBasis& basis, const StateVector& psi, const SubsetSpec& subset) {
  if (subset.sites.empty()) throw std::invalid_argument("reduced density of an empty subset");
  if (static_cast<int>(subset.sites.size()) >= basis.n_sites())
    throw std::invalid_argument("reduced density needs a proper subset of the sites");
  return reduce(basis, psi, subset.sites);
}

double subset_entropy(const ConstrainedBasis& basis, const StateVector& psi, std::vector<int> sites,
                      double eigen_floor) {
  std::sort(sites.begin(), sites.end());
  mask_of(sites, basis.n_sites());
  const int n = basis.n_sites();
  if (sites.empty() || static_cast<int>(sites.size()) == n) return 0.0;
  // a pure state has the same spectrum on both sides of a cut; use the smaller matrix
  auto rest = complement(sites, n);
  const auto& side = realized_patterns(basis, sites) <= realized_patterns(basis, rest) ? sites : rest;
  const StateVector unit = psi / psi.norm();
  return von_neumann_entropy(reduce(basis, unit, side).rho, eigen_floor);
}

double mutual_information(const ConstrainedBasis& basis, const StateVector& psi, const SubsetSpec& a,
                          const SubsetSpec& b) {
  require_disjoint({&a, &b});
  const double sa = subset_entropy(basis, psi, a.sites);
  const double sb = subset_entropy(basis, psi, b.sites);
  const double sab = subset_entropy(basis, psi, join({&a, &b}));
  return sa + sb - sab;
}

std::vector<std::pair<int, double>> mutual_information_curve(const ConstrainedBasis& basis, const StateVector& psi,
                                                             const std::vector<int>& ordering) {
  const int n = basis.n_sites();
  std::vector<int> sorted = ordering;
  std::sort(sorted.begin(), sorted.end());
  for (int k = 0; k < n; ++k)
    if (static_cast<int>(sorted.size()) != n || sorted[static_cast<std::size_t>(k)] != k)
      throw std::invalid_argument("ordering is not a permutation of the sites");
  std::vector<std::pair<int, double>> curve;
  for (int k = 1; k < n; ++k) {
    SubsetSpec a{"A", {ordering.begin(), ordering.begin() + k}};
    SubsetSpec b{"B", {ordering.begin() + k, ordering.end()}};
    curve.emplace_back(k, mutual_information(basis, psi, a, b));
  }
  return curve;
}

double EntropyReport::inclusion_exclusion() const {
  auto s = [&](const char* key) { return entropies.at(key); };
  return -(s("A") + s("B") + s("C") - s("AB") - s("AC") - s("BC") + s("ABC"));
}

EntropyReport tqee(const ConstrainedBasis& basis, const StateVector& psi, const SubsetSpec& a, const SubsetSpec& b,
                   const SubsetSpec& c, double eigen_floor) {
  require_disjoint({&a, &b, &c});
  EntropyReport rep;
  rep.eigen_floor = eigen_floor;
  auto entropy = [&](std::initializer_list<const SubsetSpec*> parts) {
    return subset_entropy(basis, psi, join(parts), eigen_floor);
  };
  rep.entropies["A"] = entropy({&a});
  rep.entropies["B"] = entropy({&b});
  rep.entropies["C"] = entropy({&c});
  rep.entropies["AB"] = entropy({&a, &b});
  rep.entropies["AC"] = entropy({&a, &c});
  rep.entropies["BC"] = entropy({&b, &c});
  rep.entropies["ABC"] = entropy({&a, &b, &c});
  rep.gamma = rep.inclusion_exclusion();
  return rep;
}

}  // namespace rydqsl
