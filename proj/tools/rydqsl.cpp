// rydqsl: sweep-quench-sweep simulations of dual-species Rydberg arrays.
//
// Exit codes: 0 success, 1 config error, 2 invariant or validation failure,
// 3 resource budget exceeded.

#include "rydqsl/config.hpp"
#include "rydqsl/errors.hpp"
#include "rydqsl/geometry.hpp"
#include "rydqsl/io.hpp"
#include "rydqsl/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace rydqsl;

std::vector<KagomeTriangle> parse_triangles(const std::string& text) {
  // "U0,0 D0,0 U1,0": orientation letter then cell indices i,j
  std::vector<KagomeTriangle> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    KagomeTriangle t;
    if (tok.empty() || (tok[0] != 'U' && tok[0] != 'D')) throw ConfigError("bad kagome triangle '" + tok + "'");
    t.orientation = tok[0] == 'U' ? KagomeOrientation::Up : KagomeOrientation::Down;
    const auto comma = tok.find(',');
    if (comma == std::string::npos) throw ConfigError("bad kagome triangle '" + tok + "'");
    try {
      t.i = std::stoi(tok.substr(1, comma - 1));
      t.j = std::stoi(tok.substr(comma + 1));
    } catch (const std::exception&) {
      throw ConfigError("bad kagome triangle '" + tok + "'");
    }
    out.push_back(t);
  }
  if (out.empty()) throw ConfigError("no kagome triangles given");
  return out;
}

std::vector<int> parse_ids(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad site id '" + tok + "'");
    }
  }
  return out;
}

RunConfig config_from(const std::string& path, const std::vector<std::string>& sets) {
  RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
  return with_overrides(cfg, sets);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sweep-quench-sweep simulator for dual-species Rydberg arrays on ruby patches"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  auto add_config = [&](CLI::App* sub, bool required) {
    auto* opt = sub->add_option("config", config_path, "JSON run config");
    if (required) opt->required()->check(CLI::ExistingFile);
    sub->add_option("--set", sets, "Override a config key (key=value), repeatable");
  };

  auto* run = app.add_subcommand("run", "Single propagation with trajectory and final observables");
  add_config(run, true);
  auto* sweep = app.add_subcommand("sweep", "Cartesian parameter sweep to a long-format CSV");
  add_config(sweep, true);
  auto* validate = app.add_subcommand("validate", "Oracle comparisons and invariant suites (N <= 12)");
  add_config(validate, false);
  std::string fault;
  validate->add_option("--inject-fault", fault, "Corrupt the basis: drop_state, blockade_violation, corrupt_energy");

  auto* lattice = app.add_subcommand("lattice", "Emit patch geometry as CSV");
  add_config(lattice, false);
  std::string kagome, name = "custom", save_json, lattice_out;
  double lattice_a = 0.0;
  lattice->add_option("--kagome", kagome, "Build from kagome triangles, e.g. \"U0,0 D0,0 U1,0\"");
  lattice->add_option("--name", name, "Patch name for --kagome");
  lattice->add_option("--a", lattice_a, "Lattice constant in um");
  lattice->add_option("--save-json", save_json, "Also write the patch file");
  lattice->add_option("-o,--output", lattice_out, "CSV path (default stdout)");

  auto* entropy = app.add_subcommand("entropy", "Mutual information and TQEE from a saved amplitude file");
  EntropyRequest ereq;
  std::string amp_path, subsets, ordering, out_dir = "out";
  entropy->add_option("amplitudes", amp_path, "Amplitude file written by run")->required()->check(CLI::ExistingFile);
  entropy->add_option("--subsets", subsets, "Subset file or shipped subset name");
  entropy->add_option("--ordering", ordering, "Comma-separated site ordering for the mutual-information curve");
  entropy->add_option("--output-dir", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run) {
      cmd_run(config_from(config_path, sets), std::cerr);
    } else if (*sweep) {
      cmd_sweep(config_from(config_path, sets), std::cerr);
    } else if (*validate) {
      const auto report = cmd_validate(config_from(config_path, sets), std::cout, parse_fault(fault));
      if (!report.passed()) {
        std::cerr << "validation failed\n";
        return 2;
      }
    } else if (*lattice) {
      LatticePatch patch = [&] {
        if (!kagome.empty()) {
          const auto tris = parse_triangles(kagome);
          return ruby_patch_from_kagome(name, tris, lattice_a > 0.0 ? lattice_a : 1.0);
        }
        RunConfig cfg = config_from(config_path, sets);
        if (lattice_a > 0.0) cfg.a_um = lattice_a;
        return resolve(cfg).patch;
      }();
      if (!save_json.empty()) save_patch(save_json, patch);
      if (lattice_out.empty()) {
        write_lattice_csv(std::cout, patch);
      } else {
        std::ofstream out(lattice_out);
        if (!out) throw ConfigError("cannot write " + lattice_out);
        write_lattice_csv(out, patch);
      }
    } else if (*entropy) {
      ereq.amplitudes = amp_path;
      if (!subsets.empty()) ereq.subsets = subsets;
      if (!ordering.empty()) ereq.ordering = parse_ids(ordering);
      ereq.output_dir = out_dir;
      const auto result = cmd_entropy(ereq, std::cerr);
      std::cout << result.dump(2) << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    std::cerr << "resource budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
