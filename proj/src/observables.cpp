#include "rydqsl/observables.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace rydqsl {

double config_probability(const ConstrainedBasis& basis, const StateVector& psi, Occupancy pattern) {
  const auto k = basis.index_of(pattern);
  if (!k) return 0.0;
  return std::norm(psi[static_cast<Eigen::Index>(*k)]);
}

Occupancy occupancy_from_sites(std::span<const int> sites) {
  Occupancy s = 0;
  for (int i : sites) {
    if (i < 0 || i >= 64) throw std::out_of_range("site id outside a 64-bit occupancy");
    s |= Occupancy{1} << i;
  }
  return s;
}

Eigen::VectorXd site_densities(const ConstrainedBasis& basis, const StateVector& psi) {
  Eigen::VectorXd n = Eigen::VectorXd::Zero(basis.n_sites());
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const double p = std::norm(psi[static_cast<Eigen::Index>(k)]);
    for (Occupancy a = basis.state(k); a; a &= a - 1) n[std::countr_zero(a)] += p;
  }
  return n;
}

double average_density(const ConstrainedBasis& basis, const StateVector& psi) {
  return basis.n_sites() == 0 ? 0.0 : site_densities(basis, psi).mean();
}

Eigen::MatrixXd density_correlations(const ConstrainedBasis& basis, const StateVector& psi) {
  const int n = basis.n_sites();
  Eigen::MatrixXd nn = Eigen::MatrixXd::Zero(n, n);
  std::vector<int> bits;
  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const double p = std::norm(psi[static_cast<Eigen::Index>(k)]);
    if (p == 0.0) continue;
    bits.clear();
    for (Occupancy a = basis.state(k); a; a &= a - 1) bits.push_back(std::countr_zero(a));
    for (std::size_t x = 0; x < bits.size(); ++x)
      for (std::size_t y = x; y < bits.size(); ++y) nn(bits[x], bits[y]) += p;
  }
  return nn.selfadjointView<Eigen::Upper>();
}

DensityWindow density_window(std::span<const std::pair<double, double>> curve, double level, double tol) {
  for (std::size_t k = 1; k < curve.size(); ++k)
    if (!(curve[k].first > curve[k - 1].first))
      throw std::invalid_argument("density curve must be sorted by strictly increasing detuning");
  DensityWindow w;
  w.level = level;
  w.tol = tol;
  if (curve.empty()) return w;

  auto crossing = [&](std::size_t lo, double target) {
    const auto [x0, y0] = curve[lo];
    const auto [x1, y1] = curve[lo + 1];
    if (y1 == y0) return x0;
    return x0 + (target - y0) / (y1 - y0) * (x1 - x0);
  };

  const double low = level - tol;
  std::optional<double> mu_i;
  for (std::size_t k = 0; k < curve.size(); ++k) {
    if (curve[k].second >= low) {
      mu_i = k == 0 ? curve[0].first : crossing(k - 1, low);
      break;
    }
  }
  std::optional<double> mu_f;
  for (std::size_t k = curve.size(); k-- > 0;) {
    if (curve[k].second <= level) {
      mu_f = k + 1 == curve.size() ? curve[k].first : crossing(k, level);
      break;
    }
  }
  if (mu_i && mu_f && *mu_i <= *mu_f) {
    w.mu_i = *mu_i;
    w.mu_f = *mu_f;
    w.empty = false;
  }
  return w;
}

std::vector<StarProbabilities> star_statistics(const ConstrainedBasis& basis, const StateVector& psi,
                                               const LatticePatch& patch) {
  const auto& stars = patch.stars();
  std::vector<StarProbabilities> out(stars.size(), StarProbabilities{0.0, 0.0, 0.0, 0.0});
  // classification of all 16 local patterns per star
  std::vector<std::array<StarClass, 16>> table(stars.size());
  for (std::size_t s = 0; s < stars.size(); ++s)
    for (unsigned occ = 0; occ < 16; ++occ) table[s][occ] = classify_star(occ, patch, stars[s]);

  for (std::size_t k = 0; k < basis.dim(); ++k) {
    const double p = std::norm(psi[static_cast<Eigen::Index>(k)]);
    if (p == 0.0) continue;
    const Occupancy occ = basis.state(k);
    for (std::size_t s = 0; s < stars.size(); ++s) {
      unsigned local = 0;
      for (int b = 0; b < 4; ++b) local |= static_cast<unsigned>((occ >> stars[s][b]) & 1u) << b;
      out[s][static_cast<std::size_t>(table[s][local])] += p;
    }
  }
  return out;
}

CorrelationSeries g2_correlation(const ConstrainedBasis& basis, const StateVector& psi, const LatticePatch& patch,
                                 std::optional<std::vector<int>> site_filter) {
  std::vector<int> sites;
  if (site_filter) {
    sites = *site_filter;
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    for (int i : sites) patch.site(i);
  } else {
    for (int i = 0; i < patch.size(); ++i) sites.push_back(i);
  }
  if (sites.size() < 2) throw std::invalid_argument("g2 correlation needs at least two included sites");

  const Eigen::MatrixXd nn = density_correlations(basis, psi);
  const Eigen::VectorXd n = nn.diagonal();

  CorrelationSeries series;
  series.a_um = patch.a();
  double q = 0.0;
  for (int i : sites) q += n[i] - n[i] * n[i];
  series.entries.push_back({0.0, q / static_cast<double>(sites.size()), static_cast<int>(sites.size())});

  struct PairValue {
    double r;
    double c;
  };
  std::vector<PairValue> pairs;
  for (std::size_t x = 0; x < sites.size(); ++x)
    for (std::size_t y = x + 1; y < sites.size(); ++y) {
      const int i = sites[x], j = sites[y];
      pairs.push_back({patch.distance(i, j), nn(i, j) - n[i] * n[j]});
    }
  std::sort(pairs.begin(), pairs.end(), [](const PairValue& l, const PairValue& r) { return l.r < r.r; });
  const double tol = kDistanceTolerance * patch.a();
  double bucket_start = -1.0;
  for (const auto& pv : pairs) {
    if (series.entries.size() == 1 || pv.r - bucket_start > tol) {
      series.entries.push_back({pv.r, 0.0, 0});
      bucket_start = pv.r;
    }
    auto& e = series.entries.back();
    e.g2 += pv.c;
    ++e.n_pairs;
  }
  for (std::size_t k = 1; k < series.entries.size(); ++k)
    series.entries[k].g2 /= static_cast<double>(series.entries[k].n_pairs);
  return series;
}

}  // namespace rydqsl
