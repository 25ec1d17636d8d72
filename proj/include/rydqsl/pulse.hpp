#pragma once

#include "rydqsl/geometry.hpp"

#include <functional>
#include <vector>

namespace rydqsl {

/// Instantaneous drive values in rad/µs.
struct DriveSample {
  double omega = 0.0;
  double delta_rb = 0.0;
  double delta_cs = 0.0;

  double delta(Species s) const { return s == Species::Rb ? delta_rb : delta_cs; }
};

/// A drive on [0, duration] given as a sampler plus the times where it is
/// not smooth; integrators place step boundaries on those breakpoints.
class Drive {
 public:
  Drive(double duration, std::function<DriveSample(double)> sampler, std::vector<double> breakpoints = {});

  static Drive constant(double duration, DriveSample sample);

  double duration() const { return duration_; }
  DriveSample operator()(double t) const { return sampler_(t); }
  /// Sorted segment boundaries including 0 and duration.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

 private:
  double duration_;
  std::function<DriveSample(double)> sampler_;
  std::vector<double> breakpoints_;
};

/// Sweep-quench-sweep protocol. Frequencies are stored in rad/µs, times in µs.
///
/// Timeline with f = ramp_fraction:
///   [0, fτ]            Ω ramps up (sin²), Δ = Δ_i
///   [fτ, τ/2]          Δ_i + χ₁ sin²(α₁ (t − fτ)/τ)
///   [τ/2, τ/2 + t_q]   Δ = Δ_q
///   [τ/2 + t_q, τ−fτ]  Δ_q + χ₂,s sin²(α₂ (t − t_q − τ/2)/τ)
///   [τ−fτ, τ]          Ω ramps down (sin²), Δ = Δ_f,s
/// Each sin² ramp reaches its maximum exactly at the end of its segment.
struct SweepQuenchSweep {
  double tau = 2.5;
  double t_q = 0.0;
  double delta_initial = 0.0;
  double delta_quench = 0.0;
  double delta_final_rb = 0.0;
  double nu = 1.0;  ///< Δ_f,Cs / Δ_f,Rb
  double omega0 = 0.0;
  double ramp_fraction = 0.1;

  /// Convenience constructor taking frequencies in MHz.
  static SweepQuenchSweep from_mhz(double tau_us, double tq_us, double delta_i_mhz, double delta_q_mhz,
                                   double delta_f_rb_mhz, double nu, double omega0_mhz);

  /// Throws std::invalid_argument when the parameter invariants fail.
  void validate() const;

  double delta_final(Species s) const { return s == Species::Rb ? delta_final_rb : nu * delta_final_rb; }
  double chi1() const { return delta_quench - delta_initial; }
  double chi2(Species s) const { return delta_final(s) - delta_quench; }
  double alpha1() const;
  double alpha2() const;

  std::vector<double> breakpoints() const;
  Drive drive() const;
};

double detuning_at(const SweepQuenchSweep& p, double t, Species s);
double rabi_at(const SweepQuenchSweep& p, double t);
/// Analytic dΔ_s/dt in rad/µs²; zero on the hold segments.
double sweep_rate(const SweepQuenchSweep& p, double t, Species s);

}  // namespace rydqsl
