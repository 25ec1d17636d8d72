#include "rydqsl/evolve.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace rydqsl {

std::string_view to_string(Integrator m) {
  switch (m) {
    case Integrator::KrylovMidpoint: return "krylov_midpoint";
    case Integrator::KrylovMagnus4: return "krylov_magnus4";
    case Integrator::RK4: return "rk4";
  }
  return "krylov_midpoint";
}

Integrator parse_integrator(std::string_view text) {
  if (text == "krylov_midpoint") return Integrator::KrylovMidpoint;
  if (text == "krylov_magnus4") return Integrator::KrylovMagnus4;
  if (text == "rk4") return Integrator::RK4;
  throw std::invalid_argument("unknown integrator '" + std::string(text) +
                              "' (expected krylov_midpoint, krylov_magnus4 or rk4)");
}

void EvolutionConfig::validate() const {
  if (!(dt >= 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive (or 0 for the default)");
  if (krylov_dim < 2) throw std::invalid_argument("krylov_dim must be at least 2");
  if (!(krylov_tol > 0.0)) throw std::invalid_argument("krylov_tol must be positive");
  if (record_every < 0) throw std::invalid_argument("record_every must be non-negative");
}

const std::vector<double>& Trajectory::column(std::string_view name) const {
  for (std::size_t p = 0; p < probe_names.size(); ++p)
    if (probe_names[p] == name) return columns[p];
  throw std::out_of_range("no probe named '" + std::string(name) + "'");
}

namespace detail {

std::vector<std::pair<double, double>> time_grid(const Drive& drive, double dt) {
  std::vector<std::pair<double, double>> grid;
  const auto& bp = drive.breakpoints();
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    const double len = bp[k + 1] - bp[k];
    const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / dt - 1e-9)));
    const double h = len / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) grid.emplace_back(bp[k] + static_cast<double>(s) * h, h);
  }
  return grid;
}

}  // namespace detail

Trajectory propagate(const ConstrainedBasis& basis, const Drive& drive, const StateVector& psi0,
                     const EvolutionConfig& cfg, const std::vector<NamedProbe>& probes, double detuning_sign) {
  return propagate_operator(ConstrainedHamiltonian(basis, detuning_sign), drive, psi0, cfg, probes);
}

Trajectory propagate(const ConstrainedBasis& basis, const SweepQuenchSweep& pulse, const StateVector& psi0,
                     const EvolutionConfig& cfg, const std::vector<NamedProbe>& probes, double detuning_sign) {
  return propagate(basis, pulse.drive(), psi0, cfg, probes, detuning_sign);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  os << "t_us,norm";
  for (const auto& name : tr.probe_names) os << ',' << name;
  os << '\n';
  os << std::setprecision(17);
  for (std::size_t k = 0; k < tr.times.size(); ++k) {
    os << tr.times[k] << ',' << tr.norms[k];
    for (const auto& col : tr.columns) os << ',' << col[k];
    os << '\n';
  }
}

}  // namespace rydqsl
