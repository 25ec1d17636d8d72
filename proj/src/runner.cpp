#include "rydqsl/runner.hpp"

#include "rydqsl/entanglement.hpp"
#include "rydqsl/errors.hpp"
#include "rydqsl/io.hpp"
#include "rydqsl/observables.hpp"
#include "rydqsl/oracle.hpp"
#include "rydqsl/units.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace rydqsl {

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::ofstream open_output(const std::filesystem::path& dir, const std::string& file) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / file, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + (dir / file).string());
  return out;
}

StarProbabilities mean_star_statistics(const ConstrainedBasis& basis, const StateVector& psi,
                                       const LatticePatch& patch) {
  StarProbabilities mean{0.0, 0.0, 0.0, 0.0};
  const auto per_star = star_statistics(basis, psi, patch);
  for (const auto& s : per_star)
    for (int k = 0; k < 4; ++k) mean[k] += s[k] / static_cast<double>(per_star.size());
  return mean;
}

std::vector<int> interior_sites(const LatticePatch& patch) {
  std::vector<int> out;
  for (const auto& s : patch.sites())
    if (!s.is_edge) out.push_back(s.id);
  return out;
}

void add_fit(Scalars& out, const std::string& prefix, const CorrelationSeries& series, const RunConfig& cfg) {
  FitOptions opt;
  opt.rng_seed = cfg.rng_seed;
  opt.r_max_over_a = cfg.fit_r_max_over_a;
  try {
    const CorrelationFit fit = fit_correlation_length(series, opt);
    out.emplace_back(prefix + "xi_over_a", fit.xi_over_a);
    out.emplace_back(prefix + "kappa_a", fit.kappa_a);
    out.emplace_back(prefix + "A", fit.A);
    out.emplace_back(prefix + "phi", fit.phi);
    out.emplace_back(prefix + "B", fit.B);
    out.emplace_back(prefix + "fit_rms", fit.rms_residual);
    out.emplace_back(prefix + "fit_degenerate", fit.degenerate ? 1.0 : 0.0);
  } catch (const std::invalid_argument&) {
    out.emplace_back(prefix + "xi_over_a", kNaN);
  }
}

void add_entropies(Scalars& out, const RunConfig& cfg, const ConstrainedBasis& basis, const StateVector& psi) {
  const SubsetFile sf = resolve_subsets(*cfg.subsets);
  if (sf.subsets.contains("C")) {
    const EntropyReport rep = tqee(basis, psi, sf.at("A"), sf.at("B"), sf.at("C"));
    for (const auto& [label, s] : rep.entropies) out.emplace_back("S_" + label, s);
    out.emplace_back("gamma", *rep.gamma);
  } else if (sf.subsets.contains("B")) {
    out.emplace_back("I_AB", mutual_information(basis, psi, sf.at("A"), sf.at("B")));
  }
}

}  // namespace

std::shared_ptr<const RunContext> prepare(const RunConfig& cfg) {
  ResolvedRun run = resolve(cfg);
  InteractionTable vtab = interaction_table(run.patch, run.c6, run.cutoff_um);
  ConstrainedBasis basis = build_basis(run.patch, run.r_s_um, vtab, cfg.max_basis_states);
  return std::make_shared<const RunContext>(RunContext{std::move(run), std::move(vtab), std::move(basis)});
}

std::vector<NamedProbe> make_probes(const RunConfig& cfg, const LatticePatch& patch, const ConstrainedBasis& b) {
  std::vector<NamedProbe> probes;
  const ConstrainedBasis* basis = &b;
  for (const auto& name : cfg.probes) {
    if (name == "n_bar") {
      probes.push_back({name, [basis](double, const StateVector& psi) { return average_density(*basis, psi); }});
    } else if (name.rfind("n_", 0) == 0) {
      int site = -1;
      try {
        site = std::stoi(name.substr(2));
      } catch (const std::exception&) {
      }
      if (site < 0 || site >= patch.size()) throw ConfigError("probe '" + name + "' names no site");
      const Occupancy bit = Occupancy{1} << site;
      probes.push_back({name, [basis, bit](double, const StateVector& psi) {
                          double n = 0.0;
                          for (std::size_t k = 0; k < basis->dim(); ++k)
                            if (basis->state(k) & bit) n += std::norm(psi[static_cast<Eigen::Index>(k)]);
                          return n;
                        }});
    } else if (name.rfind("P_", 0) == 0) {
      auto it = cfg.patterns.find(name.substr(2));
      if (it == cfg.patterns.end()) throw ConfigError("probe '" + name + "' refers to an undefined pattern");
      const Occupancy s = parse_pattern(it->second, patch.size());
      probes.push_back(
          {name, [basis, s](double, const StateVector& psi) { return config_probability(*basis, psi, s); }});
    } else {
      throw ConfigError("unknown probe '" + name + "' (expected n_bar, n_<site> or P_<pattern>)");
    }
  }
  return probes;
}

Scalars final_scalars(const RunConfig& cfg, const LatticePatch& patch, const ConstrainedBasis& basis,
                      const StateVector& psi) {
  Scalars out;
  out.emplace_back("n_bar", average_density(basis, psi));
  for (const auto& [name, pattern] : cfg.patterns)
    out.emplace_back("P_" + name, config_probability(basis, psi, parse_pattern(pattern, patch.size())));
  if (!patch.stars().empty()) {
    const auto mean = mean_star_statistics(basis, psi, patch);
    out.emplace_back("star_monomer", mean[0]);
    out.emplace_back("star_dimer", mean[1]);
    out.emplace_back("star_double_dimer", mean[2]);
    out.emplace_back("star_other", mean[3]);
  }
  if (cfg.correlation) {
    const CorrelationSeries series = g2_correlation(basis, psi, patch);
    out.emplace_back("mandel_q", series.entries.front().g2);
    add_fit(out, "", series, cfg);
    if (cfg.edge_removed) {
      const auto inner = interior_sites(patch);
      if (inner.size() >= 2)
        add_fit(out, "edge_removed_", g2_correlation(basis, psi, patch, inner), cfg);
      else
        out.emplace_back("edge_removed_xi_over_a", kNaN);
    }
  }
  if (cfg.subsets) add_entropies(out, cfg, basis, psi);
  if (cfg.mi_curve) {
    std::vector<int> order(static_cast<std::size_t>(patch.size()));
    std::iota(order.begin(), order.end(), 0);
    for (const auto& [k, i] : mutual_information_curve(basis, psi, order)) out.emplace_back("I_" + std::to_string(k), i);
  }
  return out;
}

PointResult run_point(const RunConfig& cfg, const ResolvedRun& run, const ConstrainedBasis& basis,
                      bool with_probes) {
  const auto probes = with_probes ? make_probes(cfg, run.patch, basis) : std::vector<NamedProbe>{};
  PointResult r;
  r.trajectory = propagate(basis, run.pulse, ground_state(basis), run.evolution, probes, cfg.detuning_sign);
  r.scalars = final_scalars(cfg, run.patch, basis, r.trajectory.final_state);
  r.scalars.emplace_back("max_norm_drift", r.trajectory.max_norm_drift);
  return r;
}

json cmd_run(const RunConfig& cfg, std::ostream& log) {
  const auto ctx = prepare(cfg);
  const auto& patch = ctx->run.patch;
  const std::string hash = cfg.hash();
  log << "patch " << patch.name() << ": " << patch.size() << " sites, basis dim " << ctx->basis.dim() << " ("
      << ctx->basis.memory_bytes() / 1024 << " KiB)\n";

  const PointResult pr = run_point(cfg, ctx->run, ctx->basis);
  const auto& tr = pr.trajectory;
  const StateVector& psi = tr.final_state;
  log << "propagated " << tr.steps << " steps, " << tr.matvecs << " matvecs, max norm drift " << tr.max_norm_drift
      << '\n';

  const std::filesystem::path dir(cfg.output_dir);
  {
    auto out = open_output(dir, "trajectory.csv");
    out << "# rydqsl config_hash=" << hash << '\n';
    write_trajectory_csv(out, tr);
  }

  json summary;
  summary["config_hash"] = hash;
  summary["config"] = cfg.to_json();
  summary["patch"] = patch.name();
  summary["n_sites"] = patch.size();
  summary["basis_dim"] = ctx->basis.dim();
  summary["steps"] = tr.steps;
  summary["matvecs"] = tr.matvecs;
  summary["max_norm_drift"] = tr.max_norm_drift;
  summary["norm_contract_ok"] = tr.norm_contract_ok();
  json scalars = json::object();
  for (const auto& [k, v] : pr.scalars) scalars[k] = std::isfinite(v) ? json(v) : json(nullptr);
  summary["scalars"] = scalars;
  const Eigen::VectorXd n = site_densities(ctx->basis, psi);
  summary["site_densities"] = std::vector<double>(n.data(), n.data() + n.size());
  json stars = json::array();
  for (const auto& s : star_statistics(ctx->basis, psi, patch))
    stars.push_back({{"Monomer", s[0]}, {"Dimer", s[1]}, {"DoubleDimer", s[2]}, {"Other", s[3]}});
  summary["star_statistics"] = stars;
  if (cfg.correlation) {
    json series = json::array();
    for (const auto& e : g2_correlation(ctx->basis, psi, patch).entries)
      series.push_back({{"r_over_a", e.r_um / patch.a()}, {"g2", e.g2}, {"n_pairs", e.n_pairs}});
    summary["g2"] = series;
  }
  {
    auto out = open_output(dir, "summary.json");
    out << summary.dump(2) << '\n';
  }
  if (cfg.save_amplitudes) {
    std::filesystem::create_directories(dir);
    write_amplitudes(dir / "amplitudes.bin", patch, ctx->basis, psi, hash);
  }
  if (!tr.norm_contract_ok())
    throw InvariantError("norm drift " + std::to_string(tr.max_norm_drift) + " exceeds the 1e-7 contract");
  return summary;
}

SweepResult run_sweep(const RunConfig& cfg, std::ostream& log) {
  if (cfg.sweep.empty()) throw ConfigError("sweep needs at least one axis");
  SweepResult result;
  for (const auto& a : cfg.sweep) result.axes.push_back(a.name);

  std::vector<std::vector<double>> points{{}};
  for (const auto& axis : cfg.sweep) {
    std::vector<std::vector<double>> next;
    for (const auto& p : points)
      for (double v : axis.values) {
        auto q = p;
        q.push_back(v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  std::sort(points.begin(), points.end());
  result.rows.resize(points.size());

  // contexts shared by points with equal geometry and couplings
  std::mutex cache_mutex;
  std::map<std::string, std::shared_ptr<const RunContext>> cache;
  auto context_for = [&](const RunConfig& pc) {
    const json key = {pc.patch, pc.species ? *pc.species : "", pc.a_um ? *pc.a_um : 0.0, pc.r_s_over_a,
                      pc.c6_rbrb_ghz, pc.c6_cscs_ghz, pc.c6_rbcs_ghz,
                      pc.interaction_cutoff_over_a ? *pc.interaction_cutoff_over_a : -1.0, pc.max_basis_states};
    std::lock_guard lock(cache_mutex);
    auto& slot = cache[key.dump()];
    if (!slot) slot = prepare(pc);
    return slot;
  };

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < points.size(); k = next++) {
      SweepRow& row = result.rows[k];
      row.point = points[k];
      std::vector<std::pair<std::string, double>> assignment;
      for (std::size_t a = 0; a < result.axes.size(); ++a) assignment.emplace_back(result.axes[a], points[k][a]);
      try {
        const RunConfig pc = at_sweep_point(cfg, assignment);
        const auto ctx = context_for(pc);
        // the pulse may differ from the cached context's, the geometry may not
        auto pr = run_point(pc, resolve(pc), ctx->basis, false);
        row.scalars = std::move(pr.scalars);
        if (!pr.trajectory.norm_contract_ok()) row.status = "norm_drift";
      } catch (const ResourceError& e) {
        row.status = "resource_exceeded";
        std::lock_guard lock(log_mutex);
        log << "point " << k << ": " << e.what() << '\n';
      } catch (const ConfigError& e) {
        row.status = "invalid";
        std::lock_guard lock(log_mutex);
        log << "point " << k << ": " << e.what() << '\n';
      }
    }
  };
  const int n_threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  return result;
}

void write_sweep_csv(std::ostream& os, const SweepResult& result, const std::string& config_hash) {
  os << "# rydqsl sweep config_hash=" << config_hash << '\n';
  for (const auto& a : result.axes) os << a << ',';
  os << "scalar,value,status\n";
  os << std::setprecision(17);
  for (const auto& row : result.rows) {
    auto prefix = [&] {
      for (double v : row.point) os << v << ',';
    };
    if (row.scalars.empty()) {
      prefix();
      os << "-,nan," << row.status << '\n';
      continue;
    }
    for (const auto& [name, value] : row.scalars) {
      prefix();
      os << name << ',' << value << ',' << row.status << '\n';
    }
  }
}

SweepResult cmd_sweep(const RunConfig& cfg, std::ostream& log) {
  SweepResult result = run_sweep(cfg, log);
  auto out = open_output(cfg.output_dir, "sweep.csv");
  write_sweep_csv(out, result, cfg.hash());
  std::size_t failed = 0;
  for (const auto& r : result.rows) failed += r.status == "resource_exceeded";
  log << result.rows.size() << " sweep points written to " << (std::filesystem::path(cfg.output_dir) / "sweep.csv")
      << '\n';
  if (failed) throw ResourceError(std::to_string(failed) + " sweep point(s) exceeded the basis budget");
  return result;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ValidationCheck& c) { return c.passed; });
}

FaultInjection parse_fault(std::string_view name) {
  if (name.empty() || name == "none") return FaultInjection::None;
  if (name == "drop_state") return FaultInjection::DropState;
  if (name == "blockade_violation") return FaultInjection::BlockadeViolation;
  if (name == "corrupt_energy") return FaultInjection::CorruptEnergy;
  throw ConfigError("unknown fault '" + std::string(name) +
                    "' (expected drop_state, blockade_violation or corrupt_energy)");
}

namespace {

ConstrainedBasis corrupted(const RunContext& ctx, FaultInjection fault) {
  std::vector<Occupancy> states = ctx.basis.states();
  const auto& patch = ctx.run.patch;
  switch (fault) {
    case FaultInjection::DropState:
      // removing a single excitation breaks closure under bit clears
      states.erase(std::find_if(states.begin(), states.end(), [](Occupancy s) { return std::popcount(s) == 1; }));
      break;
    case FaultInjection::BlockadeViolation: {
      const auto& tri = patch.triangles().front();
      states.push_back((Occupancy{1} << tri[0]) | (Occupancy{1} << tri[1]));
      break;
    }
    case FaultInjection::CorruptEnergy:
    case FaultInjection::None:
      break;
  }
  if (fault == FaultInjection::CorruptEnergy) {
    InteractionTable bad = ctx.vtab * 1.5;
    return ConstrainedBasis::from_states(patch, ctx.basis.r_s(), states, bad);
  }
  return ConstrainedBasis::from_states(patch, ctx.basis.r_s(), states, ctx.vtab);
}

StateVector random_state(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  StateVector v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v[k] = {g(rng), g(rng)};
  return v.normalized();
}

}  // namespace

ValidationReport cmd_validate(const RunConfig& cfg, std::ostream& log, FaultInjection fault) {
  const auto ctx = prepare(cfg);
  const auto& patch = ctx->run.patch;
  const auto& pulse = ctx->run.pulse;
  if (patch.size() > oracle::kMaxSites)
    throw ConfigError("validate needs a patch with at most " + std::to_string(oracle::kMaxSites) + " sites");
  ValidationReport rep;
  auto check = [&](std::string name, double value, double threshold) {
    rep.checks.push_back({std::move(name), value <= threshold, value, threshold});
  };

  // basis invariants, optionally on a deliberately corrupted copy
  const ConstrainedBasis& basis = ctx->basis;
  const ConstrainedBasis tested = fault == FaultInjection::None ? basis : corrupted(*ctx, fault);
  const auto violated = check_basis_invariants(tested, patch, ctx->vtab);
  for (const char* name : {"blockade_independent_sets", "closure_under_single_bit_clears", "index_map_consistency",
                           "species_split_counts", "interaction_energy_cache", "canonical_order", "dimension_law"}) {
    const bool bad = std::find(violated.begin(), violated.end(), name) != violated.end();
    check(std::string("basis:") + name, bad ? 1.0 : 0.0, 0.0);
  }

  std::mt19937_64 rng(cfg.rng_seed);
  const Eigen::Index dim = static_cast<Eigen::Index>(basis.dim());
  const double t_probe = 0.37 * pulse.tau;
  const DriveSample drive = pulse.drive()(t_probe);
  {
    double worst = 0.0;
    StateVector hp(dim), hq(dim);
    for (int trial = 0; trial < 10; ++trial) {
      const StateVector p = random_state(dim, rng), q = random_state(dim, rng);
      apply_hamiltonian(basis, drive, p, hp, cfg.detuning_sign);
      apply_hamiltonian(basis, drive, q, hq, cfg.detuning_sign);
      const std::complex<double> lhs = q.dot(hp), rhs = std::conj(p.dot(hq));
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, hp.norm()));
    }
    check("hamiltonian:hermiticity", worst, 1e-12);
  }
  if (basis.dim() <= kDenseHamiltonianLimit) {
    const Eigen::MatrixXcd h = dense_hamiltonian(basis, drive, cfg.detuning_sign);
    double worst = 0.0;
    StateVector hx(dim);
    for (int trial = 0; trial < 10; ++trial) {
      const StateVector x = random_state(dim, rng);
      apply_hamiltonian(basis, drive, x, hx, cfg.detuning_sign);
      worst = std::max(worst, (h * x - hx).norm() / std::max(1.0, hx.norm()));
    }
    check("hamiltonian:dense_matvec", worst, 1e-12);
  }
  {
    double jump = 0.0, rate_err = 0.0;
    const auto bps = pulse.breakpoints();
    for (Species s : {Species::Rb, Species::Cs}) {
      const double scale = std::max({std::abs(pulse.chi1()), std::abs(pulse.chi2(s)), 1e-300});
      for (std::size_t b = 1; b + 1 < bps.size(); ++b) {
        const double eps = 1e-10 * pulse.tau;
        jump = std::max(jump, std::abs(detuning_at(pulse, bps[b] + eps, s) - detuning_at(pulse, bps[b] - eps, s)) /
                                  scale);
      }
      for (int k = 0; k < 200; ++k) {
        // cell centres stay clear of the breakpoints, where Δ is only C¹
        const double t = pulse.tau * (k + 0.5) / 200.0, h = 1e-6 * pulse.tau;
        if (std::any_of(bps.begin(), bps.end(), [&](double b) { return std::abs(t - b) < 2.0 * h; })) continue;
        const double fd = (detuning_at(pulse, t + h, s) - detuning_at(pulse, t - h, s)) / (2 * h);
        rate_err = std::max(rate_err, std::abs(fd - sweep_rate(pulse, t, s)) / (scale / pulse.tau));
      }
    }
    check("pulse:continuity", jump, 1e-6);
    check("pulse:sweep_rate_finite_difference", rate_err, 1e-6);
  }

  const Trajectory tr = propagate(basis, pulse, ground_state(basis), ctx->run.evolution, {}, cfg.detuning_sign);
  const StateVector& psi = tr.final_state;
  check("evolve:norm_drift", tr.max_norm_drift, kNormTolerance);
  {
    double star_err = 0.0;
    for (const auto& s : star_statistics(basis, psi, patch))
      star_err = std::max(star_err, std::abs(s[0] + s[1] + s[2] + s[3] - psi.squaredNorm()));
    check("observables:star_probabilities_sum", star_err, 1e-10);
  }

  const auto full = oracle::full_propagate(patch, ctx->run.c6, pulse, ctx->run.evolution, cfg.detuning_sign);
  const Eigen::VectorXd n_full = oracle::full_site_densities(full);
  const Eigen::VectorXd n_con = site_densities(basis, psi);
  check("oracle:site_densities", (n_full - n_con).cwiseAbs().maxCoeff(), 0.05);

  {
    std::vector<std::vector<int>> regions;
    std::vector<int> half;
    for (int i = 0; i < patch.size() / 2; ++i) half.push_back(i);
    if (!half.empty()) regions.push_back(half);
    if (cfg.subsets) {
      const SubsetFile sf = resolve_subsets(*cfg.subsets);
      for (const auto& [name, s] : sf.subsets) regions.push_back(s.sites);
    }
    const auto embedded = oracle::embed(basis.states(), psi / psi.norm(), patch.size());
    double rho_err = 0.0, purity_err = 0.0;
    for (const auto& region : regions) {
      if (region.empty() || static_cast<int>(region.size()) >= patch.size()) continue;
      const ReducedDensity rd = reduced_density(basis, psi / psi.norm(), SubsetSpec{"R", region});
      Eigen::MatrixXcd padded = Eigen::MatrixXcd::Zero(Eigen::Index{1} << region.size(), Eigen::Index{1} << region.size());
      for (std::size_t p = 0; p < rd.patterns.size(); ++p)
        for (std::size_t q = 0; q < rd.patterns.size(); ++q)
          padded(static_cast<Eigen::Index>(rd.patterns[p]), static_cast<Eigen::Index>(rd.patterns[q])) =
              rd.rho(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
      rho_err = std::max(rho_err, (padded - oracle::full_partial_trace(embedded, region)).cwiseAbs().maxCoeff());
      std::vector<int> rest;
      for (int i = 0; i < patch.size(); ++i)
        if (std::find(region.begin(), region.end(), i) == region.end()) rest.push_back(i);
      const double sa = von_neumann_entropy(rd.rho);
      const double sb = von_neumann_entropy(reduced_density(basis, psi / psi.norm(), SubsetSpec{"Rc", rest}).rho);
      purity_err = std::max(purity_err, std::abs(sa - sb));
    }
    check("entanglement:reduced_density_oracle", rho_err, 1e-10);
    check("entanglement:complement_symmetry", purity_err, 1e-8);
  }

  for (const auto& c : rep.checks)
    log << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << c.value << " threshold=" << c.threshold << '\n';
  return rep;
}

void write_lattice_csv(std::ostream& os, const LatticePatch& patch) {
  std::vector<int> star_count(static_cast<std::size_t>(patch.size()), 0);
  for (const auto& st : patch.stars())
    for (int id : st) ++star_count[static_cast<std::size_t>(id)];
  os << "id,x_um,y_um,species,is_edge,n_stars\n" << std::setprecision(17);
  for (const auto& s : patch.sites())
    os << s.id << ',' << s.pos.x() << ',' << s.pos.y() << ',' << to_string(s.species) << ',' << (s.is_edge ? 1 : 0)
       << ',' << star_count[static_cast<std::size_t>(s.id)] << '\n';
}

json cmd_entropy(const EntropyRequest& req, std::ostream& log) {
  AmplitudeFile af = read_amplitudes(req.amplitudes);
  const LatticePatch patch = patch_from_json(af.header.at("patch"));
  const double r_s = af.header.at("r_s_um").get<double>();
  const InteractionTable zero = InteractionTable::Zero(patch.size(), patch.size());
  const ConstrainedBasis basis = build_basis(patch, r_s, zero);
  if (hex64(basis_hash(basis)) != af.header.at("basis_hash").get<std::string>())
    throw InvariantError("amplitude file basis hash does not match the rebuilt basis");
  // amplitudes are stored in single precision
  const StateVector psi = af.psi / af.psi.norm();
  log << "loaded " << basis.dim() << " amplitudes for " << patch.name() << '\n';

  json out;
  out["config_hash"] = af.header.value("config_hash", "");
  out["patch"] = patch.name();
  if (req.subsets) {
    const SubsetFile sf = resolve_subsets(*req.subsets);
    if (sf.subsets.contains("C")) {
      const EntropyReport rep = tqee(basis, psi, sf.at("A"), sf.at("B"), sf.at("C"));
      out["entropies"] = rep.entropies;
      out["gamma"] = *rep.gamma;
      out["quantum_dimension"] = rep.quantum_dimension();
      out["eigen_floor"] = rep.eigen_floor;
    }
    if (sf.subsets.contains("A") && sf.subsets.contains("B"))
      out["mutual_information_AB"] = mutual_information(basis, psi, sf.at("A"), sf.at("B"));
  }
  std::vector<int> order(static_cast<std::size_t>(patch.size()));
  std::iota(order.begin(), order.end(), 0);
  if (req.ordering) order = *req.ordering;
  const auto curve = mutual_information_curve(basis, psi, order);
  {
    auto csv = open_output(req.output_dir, "mi_curve.csv");
    csv << "# rydqsl config_hash=" << out["config_hash"].get<std::string>() << '\n' << "k,I\n" << std::setprecision(17);
    for (const auto& [k, i] : curve) csv << k << ',' << i << '\n';
  }
  json jc = json::array();
  for (const auto& [k, i] : curve) jc.push_back({k, i});
  out["mi_curve"] = jc;
  auto js = open_output(req.output_dir, "entropy.json");
  js << out.dump(2) << '\n';
  return out;
}

}  // namespace rydqsl
