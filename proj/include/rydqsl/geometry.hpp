#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rydqsl {

enum class Species : std::uint8_t { Rb, Cs };

std::string_view to_string(Species s);
Species parse_species(std::string_view text);

/// Four site ids around one kagome vertex (a unit cell of the dimer model).
using VertexStar = std::array<int, 4>;
using Triangle = std::array<int, 3>;

struct Site {
  int id = 0;
  Eigen::Vector2d pos = Eigen::Vector2d::Zero();  // µm
  Species species = Species::Rb;
  bool is_edge = false;
};

struct SpeciesAssignment {
  std::string patch_name;
  std::vector<Species> labels;

  double fraction_cs() const;
};

/// Relative tolerance used to bucket geometric distances (in units of a).
inline constexpr double kDistanceTolerance = 1.0e-6;

/// Finite dual-species patch of atoms. Immutable after construction.
class LatticePatch {
 public:
  /// Coordinates are in µm. An empty `edge_sites` selects the default
  /// boundary set: sites that belong to fewer than two registered stars.
  LatticePatch(std::string name, double a_um, std::vector<Eigen::Vector2d> coords_um,
               std::vector<Species> species, std::vector<VertexStar> stars,
               std::vector<int> edge_sites = {});

  const std::string& name() const { return name_; }
  double a() const { return a_; }
  int size() const { return static_cast<int>(sites_.size()); }
  const std::vector<Site>& sites() const { return sites_; }
  const Site& site(int id) const;
  const std::vector<VertexStar>& stars() const { return stars_; }
  /// Site triples with all three pair distances equal to a.
  const std::vector<Triangle>& triangles() const { return triangles_; }

  std::vector<int> edge_sites() const;
  std::vector<Species> species() const;

  double distance(int i, int j) const;
  Eigen::MatrixXd distance_matrix() const;

  /// Same topology with every coordinate multiplied by a_um / a().
  LatticePatch scaled(double a_um) const;
  LatticePatch with_species(const SpeciesAssignment& assignment) const;

 private:
  std::string name_;
  double a_ = 0.0;
  std::vector<Site> sites_;
  std::vector<VertexStar> stars_;
  std::vector<Triangle> triangles_;
};

/// Euclidean distance in µm between two distinct sites.
double pair_distance(const LatticePatch& patch, int i, int j);

/// Sorted distinct pair distances, bucketed at kDistanceTolerance·a.
std::vector<double> distinct_distances(const LatticePatch& patch);

enum class StarClass : std::uint8_t { Monomer, Dimer, DoubleDimer, Other };

std::string_view to_string(StarClass c);

/// `occupancy` bit k refers to star[k].
StarClass classify_star(unsigned occupancy, const LatticePatch& patch, const VertexStar& star);

enum class KagomeOrientation : std::uint8_t { Up, Down };

/// Triangle of a kagome lattice with edge length 2a, addressed by its cell.
struct KagomeTriangle {
  int i = 0;
  int j = 0;
  KagomeOrientation orientation = KagomeOrientation::Up;
};

/// Atoms on the edge midpoints of the given kagome triangles. Sites are
/// numbered triangle by triangle; stars are the kagome vertices shared by two
/// listed triangles. All sites are Rb.
LatticePatch ruby_patch_from_kagome(std::string name, std::span<const KagomeTriangle> triangles,
                                    double a_um);

/// Directory holding the shipped patch, species and subset files.
std::filesystem::path data_dir();

std::vector<std::string> shipped_patch_names();

/// Loads a shipped patch by name, or a patch file by path, at its stored lattice constant.
LatticePatch load_ruby_patch(std::string_view descriptor);

/// load_ruby_patch rescaled to lattice constant a_um.
LatticePatch build_ruby_patch(std::string_view descriptor, double a_um);

}  // namespace rydqsl
