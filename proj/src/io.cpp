#include "rydqsl/io.hpp"

#include "rydqsl/errors.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace rydqsl {

using nlohmann::json;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

json patch_to_json(const LatticePatch& patch) {
  json coords = json::array(), species = json::array(), stars = json::array();
  for (const auto& s : patch.sites()) {
    coords.push_back({s.pos.x() / patch.a(), s.pos.y() / patch.a()});
    species.push_back(std::string(to_string(s.species)));
  }
  for (const auto& st : patch.stars()) stars.push_back(st);
  return {{"name", patch.name()},     {"a_um", patch.a()},   {"coords", coords},
          {"species", species},       {"edge_sites", patch.edge_sites()}, {"stars", stars}};
}

LatticePatch patch_from_json(const json& j, std::string fallback_name) {
  try {
    const double a = j.at("a_um").get<double>();
    std::vector<Eigen::Vector2d> coords;
    for (const auto& c : j.at("coords")) {
      if (c.size() != 2) throw ConfigError("patch coordinate must be an [x, y] pair");
      coords.emplace_back(c[0].get<double>() * a, c[1].get<double>() * a);
    }
    std::vector<Species> species;
    if (j.contains("species"))
      for (const auto& s : j["species"]) species.push_back(parse_species(s.get<std::string>()));
    std::vector<VertexStar> stars;
    if (j.contains("stars"))
      for (const auto& s : j["stars"]) {
        if (s.size() != 4) throw ConfigError("vertex star must list 4 site ids");
        stars.push_back({s[0].get<int>(), s[1].get<int>(), s[2].get<int>(), s[3].get<int>()});
      }
    std::vector<int> edges = j.value("edge_sites", std::vector<int>{});
    return LatticePatch(j.value("name", fallback_name), a, std::move(coords), std::move(species), std::move(stars),
                        std::move(edges));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed patch: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid patch: ") + e.what());
  }
}

LatticePatch load_patch(const std::filesystem::path& path) {
  try {
    return patch_from_json(read_json_file(path), path.stem().string());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void save_patch(const std::filesystem::path& path, const LatticePatch& patch) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << patch_to_json(patch).dump(2) << '\n';
}

SpeciesAssignment load_species(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    SpeciesAssignment sa;
    sa.patch_name = j.value("patch", std::string{});
    for (const auto& s : j.at("labels")) sa.labels.push_back(parse_species(s.get<std::string>()));
    return sa;
  } catch (const std::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

namespace {

std::filesystem::path resolve(std::string_view descriptor, const char* subdir) {
  std::filesystem::path p(descriptor);
  if (std::filesystem::exists(p)) return p;
  auto shipped = data_dir() / subdir / (std::string(descriptor) + ".json");
  if (std::filesystem::exists(shipped)) return shipped;
  throw ConfigError("unknown " + std::string(subdir) + " file '" + std::string(descriptor) + "'");
}

}  // namespace

SpeciesAssignment resolve_species(std::string_view descriptor) { return load_species(resolve(descriptor, "species")); }

const SubsetSpec& SubsetFile::at(const std::string& name) const {
  auto it = subsets.find(name);
  if (it == subsets.end()) throw ConfigError("subset file does not define '" + name + "'");
  return it->second;
}

SubsetFile load_subsets(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  try {
    SubsetFile f;
    f.patch_name = j.value("patch", std::string{});
    for (const auto& [key, value] : j.items()) {
      if (key == "patch" || key == "ordering" || key == "comment") continue;
      f.subsets[key] = SubsetSpec{key, value.get<std::vector<int>>()};
    }
    if (j.contains("ordering")) f.ordering = j["ordering"].get<std::vector<int>>();
    return f;
  } catch (const json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

SubsetFile resolve_subsets(std::string_view descriptor) { return load_subsets(resolve(descriptor, "subsets")); }

std::uint64_t basis_hash(const ConstrainedBasis& basis) {
  std::uint64_t h = fnv1a(std::to_string(basis.n_sites()));
  for (Occupancy s : basis.states()) {
    char bytes[sizeof(Occupancy)];
    for (std::size_t b = 0; b < sizeof(Occupancy); ++b) bytes[b] = static_cast<char>((s >> (8 * b)) & 0xFFu);
    h = fnv1a(std::string_view(bytes, sizeof(bytes)), h);
  }
  return h;
}

namespace {

void put_f32(std::ostream& os, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  char b[4];
  for (int k = 0; k < 4; ++k) b[k] = static_cast<char>((bits >> (8 * k)) & 0xFFu);
  os.write(b, 4);
}

float get_f32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw ConfigError("amplitude file is truncated");
  std::uint32_t bits = 0;
  for (int k = 0; k < 4; ++k) bits |= std::uint32_t{b[k]} << (8 * k);
  return std::bit_cast<float>(bits);
}

}  // namespace

void write_amplitudes(const std::filesystem::path& path, const LatticePatch& patch, const ConstrainedBasis& basis,
                      const StateVector& psi, const std::string& config_hash) {
  if (psi.size() != static_cast<Eigen::Index>(basis.dim()))
    throw std::invalid_argument("state vector dimension does not match the basis");
  json header = {{"format", "rydqsl-amplitudes-1"},
                 {"encoding", "complex64-le"},
                 {"patch", patch_to_json(patch)},
                 {"r_s_um", basis.r_s()},
                 {"dim", basis.dim()},
                 {"basis_order", "popcount,value"},
                 {"basis_hash", hex64(basis_hash(basis))},
                 {"config_hash", config_hash}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << header.dump() << '\n';
  for (Eigen::Index k = 0; k < psi.size(); ++k) {
    put_f32(out, static_cast<float>(psi[k].real()));
    put_f32(out, static_cast<float>(psi[k].imag()));
  }
}

AmplitudeFile read_amplitudes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  AmplitudeFile f;
  try {
    f.header = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": bad amplitude header: " + e.what());
  }
  if (f.header.value("format", std::string{}) != "rydqsl-amplitudes-1")
    throw ConfigError(path.string() + ": not an amplitude file");
  const auto dim = f.header.at("dim").get<Eigen::Index>();
  f.psi.resize(dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const float re = get_f32(in);
    const float im = get_f32(in);
    f.psi[k] = {re, im};
  }
  return f;
}

}  // namespace rydqsl
