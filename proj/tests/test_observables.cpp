#include "rydqsl/evolve.hpp"
#include "rydqsl/observables.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

using namespace rydqsl;

namespace {

StateVector random_state(Eigen::Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  StateVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v[k] = {g(rng), g(rng)};
  return v.normalized();
}

struct Setup {
  LatticePatch patch;
  ConstrainedBasis basis;
};

Setup make(std::string_view name, double a) {
  auto p = build_ruby_patch(name, a);
  auto b = build_basis(p, 1.5 * a, interaction_table(p, C6Table::defaults()));
  return {std::move(p), std::move(b)};
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("config probabilities") {
  const auto s = make("kagome-9", 4.5);
  CHECK(config_probability(s.basis, ground_state(s.basis), 0) == 1.0);
  const auto psi = random_state(static_cast<Eigen::Index>(s.basis.dim()), 11);
  double total = 0.0;
  for (Occupancy st : s.basis.states()) total += config_probability(s.basis, psi, st);
  CHECK(std::abs(total - 1.0) < 1e-10);
  // two sites of one triangle: blockaded, outside the basis
  CHECK(config_probability(s.basis, psi, 0b011) == 0.0);
  const std::vector<int> sites{1, 4, 7};
  CHECK(occupancy_from_sites(sites) == 0b010010010);
}

TEST_CASE("site and average densities") {
  const auto s = make("triangle-3", 4.0);
  CHECK(site_densities(s.basis, ground_state(s.basis)).isZero(0.0));
  CHECK(average_density(s.basis, ground_state(s.basis)) == 0.0);
  StateVector eq = StateVector::Constant(4, 0.5);
  const auto n = site_densities(s.basis, eq);
  for (int i = 0; i < 3; ++i) CHECK(n[i] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(average_density(s.basis, basis_state(s.basis, 0b010)) == doctest::Approx(1.0 / 3.0));
  const auto k9 = make("kagome-9", 4.5);
  CHECK(average_density(k9.basis, basis_state(k9.basis, 0b100)) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("density correlations agree with a direct sum") {
  const auto s = make("kagome-12", 4.0);
  const auto psi = random_state(static_cast<Eigen::Index>(s.basis.dim()), 4);
  const auto nn = density_correlations(s.basis, psi);
  for (int i = 0; i < 12; ++i)
    for (int j = 0; j < 12; ++j) {
      double direct = 0.0;
      for (std::size_t k = 0; k < s.basis.dim(); ++k) {
        const Occupancy st = s.basis.state(k);
        if ((st >> i & 1u) && (st >> j & 1u)) direct += std::norm(psi[static_cast<Eigen::Index>(k)]);
      }
      CHECK(nn(i, j) == doctest::Approx(direct).epsilon(1e-12));
    }
  CHECK((nn - nn.transpose()).isZero(0.0));
}

TEST_CASE("density window") {
  std::vector<std::pair<double, double>> ramp, flat;
  for (int k = 0; k <= 40; ++k) {
    const double d = 0.1 * k;
    ramp.emplace_back(d, std::min(d / 8.0, 0.25));
    flat.emplace_back(d, 0.0);
  }
  const auto w = density_window(ramp);
  CHECK_FALSE(w.empty);
  CHECK(w.mu_i == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(w.mu_f == doctest::Approx(4.0));
  const auto wf = density_window(flat);
  CHECK(wf.empty);
  // interior crossing of the upper level
  std::vector<std::pair<double, double>> hump{{0, 0}, {1, 0.2}, {2, 0.24}, {3, 0.3}, {4, 0.5}};
  const auto wh = density_window(hump);
  CHECK(wh.mu_i == doctest::Approx(0.75));
  CHECK(wh.mu_f == doctest::Approx(2.0 + 0.01 / 0.06));
  std::vector<std::pair<double, double>> unsorted{{1, 0}, {0, 0}};
  CHECK_THROWS_AS(density_window(unsorted), std::invalid_argument);
}

TEST_CASE("star statistics") {
  const auto s = make("kagome-21", 4.0);
  const auto g = star_statistics(s.basis, ground_state(s.basis), s.patch);
  REQUIRE(g.size() == s.patch.stars().size());
  for (const auto& pr : g) CHECK(pr[static_cast<int>(StarClass::Monomer)] == 1.0);
  const auto& star = s.patch.stars()[0];
  const auto one = star_statistics(s.basis, basis_state(s.basis, Occupancy{1} << star[0]), s.patch);
  CHECK(one[0][static_cast<int>(StarClass::Dimer)] == 1.0);
  const auto psi = random_state(static_cast<Eigen::Index>(s.basis.dim()), 77);
  for (const auto& pr : star_statistics(s.basis, psi, s.patch))
    CHECK(pr[0] + pr[1] + pr[2] + pr[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("g2 on product states vanishes") {
  const auto s = make("kagome-12", 4.0);
  const Occupancy st = s.basis.state(s.basis.dim() / 2);
  const auto series = g2_correlation(s.basis, basis_state(s.basis, st), s.patch);
  CHECK(series.entries.front().r_um == 0.0);
  for (const auto& e : series.entries) CHECK(e.g2 == 0.0);
  int pairs = 0;
  for (std::size_t k = 1; k < series.entries.size(); ++k) pairs += series.entries[k].n_pairs;
  CHECK(pairs == 66);
}

TEST_CASE("g2 on a Bell-like pair") {
  const double a = 4.0;
  const LatticePatch two("pair", a, {Eigen::Vector2d(0, 0), Eigen::Vector2d(a, 0)}, {Species::Rb, Species::Rb}, {});
  const auto b = build_basis(two, 0.5 * a, interaction_table(two, C6Table::defaults()));
  REQUIRE(b.dim() == 4);
  StateVector psi = StateVector::Zero(4);
  psi[static_cast<Eigen::Index>(*b.index_of(0b01))] = M_SQRT1_2;
  psi[static_cast<Eigen::Index>(*b.index_of(0b10))] = M_SQRT1_2;
  const auto series = g2_correlation(b, psi, two);
  REQUIRE(series.entries.size() == 2);
  CHECK(series.entries[0].g2 == doctest::Approx(0.25));
  CHECK(series.entries[1].r_um == doctest::Approx(a));
  CHECK(series.entries[1].g2 == doctest::Approx(-0.25));
}

TEST_CASE("g2 site filter") {
  const auto s = make("kagome-21", 4.0);
  const auto psi = random_state(static_cast<Eigen::Index>(s.basis.dim()), 9);
  std::vector<int> all(21);
  std::iota(all.begin(), all.end(), 0);
  const auto full = g2_correlation(s.basis, psi, s.patch);
  const auto filtered = g2_correlation(s.basis, psi, s.patch, all);
  REQUIRE(full.entries.size() == filtered.entries.size());
  for (std::size_t k = 0; k < full.entries.size(); ++k) {
    CHECK(full.entries[k].r_um == filtered.entries[k].r_um);
    CHECK(full.entries[k].g2 == filtered.entries[k].g2);
    CHECK(full.entries[k].n_pairs == filtered.entries[k].n_pairs);
  }
  const auto bulk = g2_correlation(s.basis, psi, s.patch, std::vector<int>{1, 5, 6, 7, 8, 9, 14, 16});
  CHECK(bulk.entries.front().n_pairs == 8);
  CHECK_THROWS(g2_correlation(s.basis, psi, s.patch, std::vector<int>{3}));
  CHECK_THROWS(g2_correlation(s.basis, psi, s.patch, std::vector<int>{3, 40}));
}

TEST_CASE("g2 is symmetric under an exchange of equivalent sites") {
  // the triangle's three sites are related by rotation; a symmetric state must give one value per distance
  const auto s = make("triangle-3", 4.0);
  StateVector psi(4);
  psi << 0.6, 0.4, 0.4, 0.4;
  psi.normalize();
  const auto series = g2_correlation(s.basis, psi, s.patch);
  REQUIRE(series.entries.size() == 2);
  CHECK(series.entries[1].n_pairs == 3);
  const double n = std::norm(psi[1]);
  CHECK(series.entries[1].g2 == doctest::Approx(-n * n));
}

}  // TEST_SUITE
