#pragma once

// File formats: patch, species and subset files are JSON; amplitude files are
// one JSON header line followed by little-endian float32 (re, im) pairs.

#include "rydqsl/entanglement.hpp"
#include "rydqsl/geometry.hpp"
#include "rydqsl/hilbert.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rydqsl {

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ull);
std::string hex64(std::uint64_t h);

nlohmann::json read_json_file(const std::filesystem::path& path);

/// Coordinates are written in units of a.
nlohmann::json patch_to_json(const LatticePatch& patch);
LatticePatch patch_from_json(const nlohmann::json& j, std::string fallback_name = "patch");
LatticePatch load_patch(const std::filesystem::path& path);
void save_patch(const std::filesystem::path& path, const LatticePatch& patch);

/// {"patch": name, "labels": ["Rb", "Cs", ...]}
SpeciesAssignment load_species(const std::filesystem::path& path);
/// Shipped species name (resolved in data_dir()/species) or file path.
SpeciesAssignment resolve_species(std::string_view descriptor);

/// {"patch": name, "A": [...], "B": [...], "C": [...], "ordering": [...]}
struct SubsetFile {
  std::string patch_name;
  std::map<std::string, SubsetSpec> subsets;
  std::optional<std::vector<int>> ordering;

  const SubsetSpec& at(const std::string& name) const;
};

SubsetFile load_subsets(const std::filesystem::path& path);
SubsetFile resolve_subsets(std::string_view descriptor);

/// Hash of the basis order; guards amplitude files against a mismatched basis.
std::uint64_t basis_hash(const ConstrainedBasis& basis);

struct AmplitudeFile {
  nlohmann::json header;  // patch, r_s_um, dim, basis_order, basis_hash, config_hash
  StateVector psi;
};

void write_amplitudes(const std::filesystem::path& path, const LatticePatch& patch, const ConstrainedBasis& basis,
                      const StateVector& psi, const std::string& config_hash);
AmplitudeFile read_amplitudes(const std::filesystem::path& path);

}  // namespace rydqsl
