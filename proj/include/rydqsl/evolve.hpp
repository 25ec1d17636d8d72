#pragma once

#include "rydqsl/hilbert.hpp"
#include "rydqsl/pulse.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rydqsl {

enum class Integrator { KrylovMidpoint, KrylovMagnus4, RK4 };

std::string_view to_string(Integrator m);
Integrator parse_integrator(std::string_view text);

struct EvolutionConfig {
  Integrator method = Integrator::KrylovMagnus4;
  /// Target step in µs; 0 selects duration / 4000.
  double dt = 0.0;
  int krylov_dim = 12;
  /// Lanczos stops early once its a-posteriori error estimate drops below this.
  double krylov_tol = 1.0e-13;
  /// Record observables every this many steps (0: only at the start and the end).
  int record_every = 0;
  bool renormalize = false;

  void validate() const;
};

using Probe = std::function<double(double t, const StateVector& psi)>;

struct NamedProbe {
  std::string name;
  Probe fn;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<double> norms;
  std::vector<std::string> probe_names;
  /// columns[p][k] is probe p at times[k].
  std::vector<std::vector<double>> columns;
  StateVector final_state;
  std::size_t steps = 0;
  std::size_t matvecs = 0;
  double max_norm_drift = 0.0;

  /// The unitarity contract |norm − 1| < 1e-7 held over the whole run.
  bool norm_contract_ok() const { return max_norm_drift < 1.0e-7; }
  const std::vector<double>& column(std::string_view name) const;
};

inline constexpr double kNormTolerance = 1.0e-7;

/// exp(−i·h·H)·psi by a Lanczos projection of at most `max_dim` vectors.
/// `op` is any type with `Eigen::Index dim() const` and
/// `void apply(const DriveSample&, Ref<const StateVector>, Ref<StateVector>) const`.
template <class Operator>
class KrylovExponential {
 public:
  explicit KrylovExponential(Eigen::Index dim, int max_dim, double tol)
      : basis_(dim, max_dim + 1), w_(dim), max_dim_(max_dim), tol_(tol) {}

  /// In-place step; returns the number of operator applications used. When
  /// the error estimate is still above tol at max_dim the step is split in two.
  int step(const Operator& op, const DriveSample& drive, double h, StateVector& psi, int depth = 0) {
    const double beta0 = psi.norm();
    if (beta0 == 0.0) return 0;
    basis_.col(0) = psi / beta0;
    std::vector<double> alpha, beta;
    Eigen::VectorXcd coeff;
    int m = 0;
    for (int j = 0; j < max_dim_; ++j) {
      op.apply(drive, basis_.col(j), w_);
      const double a = basis_.col(j).dot(w_).real();
      w_ -= a * basis_.col(j);
      if (j > 0) w_ -= beta.back() * basis_.col(j - 1);
      // one local re-orthogonalisation pass against the two most recent vectors
      w_ -= basis_.col(j).dot(w_) * basis_.col(j);
      if (j > 0) w_ -= basis_.col(j - 1).dot(w_) * basis_.col(j - 1);
      alpha.push_back(a);
      const double b = w_.norm();
      m = j + 1;
      coeff = small_exponential(alpha, beta, h);
      const bool breakdown = b < 1e-14 * std::max(1.0, std::abs(a));
      const bool converged = b * std::abs(coeff[m - 1]) * std::abs(h) < tol_;
      if (breakdown || (m >= 3 && converged)) break;
      if (m == max_dim_) {
        if (depth < kMaxSplits) {
          const int used = m + step(op, drive, 0.5 * h, psi, depth + 1);
          return used + step(op, drive, 0.5 * h, psi, depth + 1);
        }
        break;
      }
      beta.push_back(b);
      basis_.col(j + 1) = w_ / b;
    }
    psi = beta0 * (basis_.leftCols(m) * coeff);
    return m;
  }

  static constexpr int kMaxSplits = 16;

 private:
  static Eigen::VectorXcd small_exponential(const std::vector<double>& alpha, const std::vector<double>& beta,
                                            double h) {
    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      t(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::VectorXcd phase =
        (std::complex<double>(0.0, -h) * es.eigenvalues().cast<std::complex<double>>()).array().exp();
    const Eigen::VectorXd first_row = es.eigenvectors().row(0).transpose();
    return es.eigenvectors().cast<std::complex<double>>() * phase.cwiseProduct(first_row.cast<std::complex<double>>());
  }

  Eigen::MatrixXcd basis_;
  StateVector w_;
  int max_dim_;
  double tol_;
};

namespace detail {

/// Step sizes that place boundaries on every drive breakpoint.
std::vector<std::pair<double, double>> time_grid(const Drive& drive, double dt);

inline DriveSample combine(const DriveSample& a, double wa, const DriveSample& b, double wb) {
  return {wa * a.omega + wb * b.omega, wa * a.delta_rb + wb * b.delta_rb, wa * a.delta_cs + wb * b.delta_cs};
}

}  // namespace detail

/// Integrates dψ/dt = −i H(t) ψ over [0, drive.duration()] for an arbitrary
/// operator that is affine in the DriveSample components (true for the
/// Rydberg Hamiltonian); the fourth-order Magnus scheme relies on that to
/// evaluate its averaged generators as combined drive samples.
template <class Operator>
Trajectory propagate_operator(const Operator& op, const Drive& drive, const StateVector& psi0,
                              const EvolutionConfig& cfg, const std::vector<NamedProbe>& probes = {}) {
  cfg.validate();
  if (psi0.size() != op.dim()) throw std::invalid_argument("initial state dimension does not match the basis");
  if (std::abs(psi0.norm() - 1.0) > kNormTolerance) throw std::invalid_argument("initial state is not normalized");

  const double dt = cfg.dt > 0.0 ? cfg.dt : drive.duration() / 4000.0;
  const auto grid = detail::time_grid(drive, dt);

  Trajectory tr;
  for (const auto& p : probes) tr.probe_names.push_back(p.name);
  tr.columns.resize(probes.size());
  StateVector psi = psi0;

  auto record = [&](double t) {
    const double nrm = psi.norm();
    tr.times.push_back(t);
    tr.norms.push_back(nrm);
    for (std::size_t p = 0; p < probes.size(); ++p) tr.columns[p].push_back(probes[p].fn(t, psi));
  };
  record(0.0);

  KrylovExponential<Operator> krylov(op.dim(), cfg.krylov_dim, cfg.krylov_tol);
  StateVector k1, k2, k3, k4, tmp;
  if (cfg.method == Integrator::RK4) {
    k1.resize(op.dim()), k2.resize(op.dim()), k3.resize(op.dim()), k4.resize(op.dim()), tmp.resize(op.dim());
  }
  const std::complex<double> minus_i(0.0, -1.0);
  const double gauss = std::sqrt(3.0) / 6.0;

  for (std::size_t s = 0; s < grid.size(); ++s) {
    const auto [t, h] = grid[s];
    switch (cfg.method) {
      case Integrator::KrylovMidpoint:
        tr.matvecs += krylov.step(op, drive(t + 0.5 * h), h, psi);
        break;
      case Integrator::KrylovMagnus4: {
        // commutator-free fourth-order Magnus: two exponentials of Gauss-point combinations
        const DriveSample d1 = drive(t + (0.5 - gauss) * h);
        const DriveSample d2 = drive(t + (0.5 + gauss) * h);
        // exp(−i h (c₁H₁ + c₂H₂)) with c₁ + c₂ = 1/2 is a half step of an affine drive combination
        const double w1 = 0.5 + 2.0 * gauss, w2 = 0.5 - 2.0 * gauss;
        tr.matvecs += krylov.step(op, detail::combine(d1, w1, d2, w2), 0.5 * h, psi);
        tr.matvecs += krylov.step(op, detail::combine(d1, w2, d2, w1), 0.5 * h, psi);
        break;
      }
      case Integrator::RK4: {
        const DriveSample d0 = drive(t), dm = drive(t + 0.5 * h), d1 = drive(t + h);
        op.apply(d0, psi, k1);
        k1 *= minus_i;
        tmp = psi + (0.5 * h) * k1;
        op.apply(dm, tmp, k2);
        k2 *= minus_i;
        tmp = psi + (0.5 * h) * k2;
        op.apply(dm, tmp, k3);
        k3 *= minus_i;
        tmp = psi + h * k3;
        op.apply(d1, tmp, k4);
        k4 *= minus_i;
        psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        tr.matvecs += 4;
        break;
      }
    }
    tr.max_norm_drift = std::max(tr.max_norm_drift, std::abs(psi.norm() - 1.0));
    if (cfg.renormalize) psi.normalize();
    ++tr.steps;
    const bool last = s + 1 == grid.size();
    if (last || (cfg.record_every > 0 && tr.steps % static_cast<std::size_t>(cfg.record_every) == 0))
      record(last ? drive.duration() : t + h);
  }
  tr.final_state = std::move(psi);
  return tr;
}

Trajectory propagate(const ConstrainedBasis& basis, const Drive& drive, const StateVector& psi0,
                     const EvolutionConfig& cfg, const std::vector<NamedProbe>& probes = {},
                     double detuning_sign = kDefaultDetuningSign);

Trajectory propagate(const ConstrainedBasis& basis, const SweepQuenchSweep& pulse, const StateVector& psi0,
                     const EvolutionConfig& cfg, const std::vector<NamedProbe>& probes = {},
                     double detuning_sign = kDefaultDetuningSign);

/// CSV with columns t_us, norm, then one column per probe.
void write_trajectory_csv(std::ostream& os, const Trajectory& tr);

}  // namespace rydqsl
