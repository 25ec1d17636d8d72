#include "rydqsl/geometry.hpp"

#include "rydqsl/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace rydqsl {

std::string_view to_string(Species s) { return s == Species::Rb ? "Rb" : "Cs"; }

Species parse_species(std::string_view text) {
  if (text == "Rb") return Species::Rb;
  if (text == "Cs") return Species::Cs;
  throw std::invalid_argument("unknown species '" + std::string(text) + "' (expected Rb or Cs)");
}

double SpeciesAssignment::fraction_cs() const {
  if (labels.empty()) return 0.0;
  const auto cs = std::count(labels.begin(), labels.end(), Species::Cs);
  return static_cast<double>(cs) / static_cast<double>(labels.size());
}

LatticePatch::LatticePatch(std::string name, double a_um, std::vector<Eigen::Vector2d> coords_um,
                           std::vector<Species> species, std::vector<VertexStar> stars,
                           std::vector<int> edge_sites)
    : name_(std::move(name)), a_(a_um), stars_(std::move(stars)) {
  if (!(a_ > 0.0) || !std::isfinite(a_)) throw std::invalid_argument("lattice constant must be positive");
  const int n = static_cast<int>(coords_um.size());
  if (n > 64) throw std::invalid_argument("patches are limited to 64 sites");
  if (!species.empty() && static_cast<int>(species.size()) != n)
    throw std::invalid_argument("species list length does not match the number of sites");

  const double tol = kDistanceTolerance * a_;
  double min_dist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    if (!coords_um[i].allFinite()) throw std::invalid_argument("non-finite site coordinate");
    for (int j = 0; j < i; ++j) min_dist = std::min(min_dist, (coords_um[i] - coords_um[j]).norm());
  }
  if (n >= 2 && std::abs(min_dist - a_) > tol) {
    throw std::invalid_argument("minimum pair distance " + std::to_string(min_dist) +
                                " um differs from the lattice constant " + std::to_string(a_) + " um");
  }

  sites_.resize(n);
  for (int i = 0; i < n; ++i) {
    sites_[i].id = i;
    sites_[i].pos = coords_um[i];
    sites_[i].species = species.empty() ? Species::Rb : species[i];
  }

  std::vector<int> star_count(n, 0);
  for (const auto& star : stars_) {
    std::set<int> ids(star.begin(), star.end());
    if (ids.size() != 4) throw std::invalid_argument("vertex star must contain 4 distinct sites");
    for (int id : star) {
      if (id < 0 || id >= n) throw std::invalid_argument("vertex star references unknown site");
      ++star_count[id];
    }
  }

  if (edge_sites.empty()) {
    for (int i = 0; i < n; ++i) sites_[i].is_edge = star_count[i] < 2;
  } else {
    for (int id : edge_sites) {
      if (id < 0 || id >= n) throw std::invalid_argument("edge site references unknown site");
      sites_[id].is_edge = true;
    }
  }

  auto is_a = [&](int i, int j) { return std::abs(distance(i, j) - a_) <= tol; };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (!is_a(i, j)) continue;
      for (int k = j + 1; k < n; ++k)
        if (is_a(i, k) && is_a(j, k)) triangles_.push_back({i, j, k});
    }
}

const Site& LatticePatch::site(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("site id " + std::to_string(id) + " out of range");
  return sites_[id];
}

std::vector<int> LatticePatch::edge_sites() const {
  std::vector<int> out;
  for (const auto& s : sites_)
    if (s.is_edge) out.push_back(s.id);
  return out;
}

std::vector<Species> LatticePatch::species() const {
  std::vector<Species> out;
  out.reserve(sites_.size());
  for (const auto& s : sites_) out.push_back(s.species);
  return out;
}

double LatticePatch::distance(int i, int j) const { return (site(i).pos - site(j).pos).norm(); }

Eigen::MatrixXd LatticePatch::distance_matrix() const {
  const int n = size();
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = (sites_[i].pos - sites_[j].pos).norm();
  return d;
}

LatticePatch LatticePatch::scaled(double a_um) const {
  std::vector<Eigen::Vector2d> coords;
  coords.reserve(sites_.size());
  for (const auto& s : sites_) coords.push_back(s.pos * (a_um / a_));
  return LatticePatch(name_, a_um, std::move(coords), species(), stars_, edge_sites());
}

LatticePatch LatticePatch::with_species(const SpeciesAssignment& assignment) const {
  if (static_cast<int>(assignment.labels.size()) != size())
    throw std::invalid_argument("species assignment '" + assignment.patch_name + "' has " +
                                std::to_string(assignment.labels.size()) + " labels for a " +
                                std::to_string(size()) + "-site patch");
  std::vector<Eigen::Vector2d> coords;
  for (const auto& s : sites_) coords.push_back(s.pos);
  return LatticePatch(name_, a_, std::move(coords), assignment.labels, stars_, edge_sites());
}

double pair_distance(const LatticePatch& patch, int i, int j) {
  if (i == j) throw std::invalid_argument("pair_distance needs two distinct sites");
  return patch.distance(i, j);
}

std::vector<double> distinct_distances(const LatticePatch& patch) {
  std::vector<double> all;
  for (int i = 0; i < patch.size(); ++i)
    for (int j = i + 1; j < patch.size(); ++j) all.push_back(patch.distance(i, j));
  std::sort(all.begin(), all.end());
  std::vector<double> out;
  const double tol = kDistanceTolerance * patch.a();
  for (double d : all)
    if (out.empty() || d - out.back() > tol) out.push_back(d);
  return out;
}

std::string_view to_string(StarClass c) {
  switch (c) {
    case StarClass::Monomer: return "Monomer";
    case StarClass::Dimer: return "Dimer";
    case StarClass::DoubleDimer: return "DoubleDimer";
    case StarClass::Other: return "Other";
  }
  return "Other";
}

StarClass classify_star(unsigned occupancy, const LatticePatch& patch, const VertexStar& star) {
  occupancy &= 0xFu;
  switch (std::popcount(occupancy)) {
    case 0: return StarClass::Monomer;
    case 1: return StarClass::Dimer;
    case 2: {
      int first = std::countr_zero(occupancy);
      int second = std::countr_zero(occupancy & (occupancy - 1));
      const double d = patch.distance(star[first], star[second]);
      // adjacent (same-triangle) pairs sit at exactly a
      return d > patch.a() * (1.0 + 1.0e-3) ? StarClass::DoubleDimer : StarClass::Other;
    }
    default: return StarClass::Other;
  }
}

namespace {

// Kagome vertices in units of a; Bravais vectors (4, 0) and (2, 2√3).
Eigen::Vector2d kagome_vertex(int i, int j, int basis) {
  const double s3 = std::sqrt(3.0);
  Eigen::Vector2d r(4.0 * i + 2.0 * j, 2.0 * s3 * j);
  switch (basis) {
    case 0: return r;
    case 1: return r + Eigen::Vector2d(2.0, 0.0);
    default: return r + Eigen::Vector2d(1.0, s3);
  }
}

std::array<Eigen::Vector2d, 3> triangle_vertices(const KagomeTriangle& t) {
  if (t.orientation == KagomeOrientation::Up)
    return {kagome_vertex(t.i, t.j, 0), kagome_vertex(t.i, t.j, 1), kagome_vertex(t.i, t.j, 2)};
  return {kagome_vertex(t.i, t.j, 1), kagome_vertex(t.i + 1, t.j, 0), kagome_vertex(t.i + 1, t.j - 1, 2)};
}

std::pair<long, long> vertex_key(const Eigen::Vector2d& v) {
  return {std::lround(v.x() * 1.0e6), std::lround(v.y() * 1.0e6)};
}

}  // namespace

LatticePatch ruby_patch_from_kagome(std::string name, std::span<const KagomeTriangle> triangles,
                                    double a_um) {
  std::vector<Eigen::Vector2d> coords;
  // kagome vertex -> sites on edges incident to it
  std::map<std::pair<long, long>, std::vector<int>> incident;
  std::vector<std::pair<long, long>> vertex_order;
  for (const auto& t : triangles) {
    const auto v = triangle_vertices(t);
    const std::array<std::array<int, 2>, 3> edges{{{2, 0}, {1, 2}, {0, 1}}};
    for (const auto& e : edges) {
      const int id = static_cast<int>(coords.size());
      coords.push_back(0.5 * (v[e[0]] + v[e[1]]) * a_um);
      for (int end : e) {
        auto key = vertex_key(v[end]);
        auto [it, inserted] = incident.try_emplace(key);
        if (inserted) vertex_order.push_back(key);
        it->second.push_back(id);
      }
    }
  }
  std::vector<VertexStar> stars;
  for (const auto& key : vertex_order) {
    const auto& ids = incident.at(key);
    if (ids.size() == 4) stars.push_back({ids[0], ids[1], ids[2], ids[3]});
  }
  return LatticePatch(std::move(name), a_um, std::move(coords), {}, std::move(stars));
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("RYDQSL_DATA_DIR"); env && *env) return env;
  return RYDQSL_DATA_DIR;
}

std::vector<std::string> shipped_patch_names() {
  return {"triangle-3", "star-4", "kagome-9", "kagome-12", "kagome-18", "kagome-21", "kagome-30"};
}

LatticePatch load_ruby_patch(std::string_view descriptor) {
  std::filesystem::path path(descriptor);
  const auto names = shipped_patch_names();
  if (std::find(names.begin(), names.end(), descriptor) != names.end()) {
    path = data_dir() / (std::string(descriptor) + ".json");
  } else if (!std::filesystem::exists(path)) {
    throw std::invalid_argument("unknown patch '" + std::string(descriptor) +
                                "' (not a shipped patch name or an existing file)");
  }
  return load_patch(path);
}

LatticePatch build_ruby_patch(std::string_view descriptor, double a_um) { return load_ruby_patch(descriptor).scaled(a_um); }

}  // namespace rydqsl
