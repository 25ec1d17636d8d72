#include "rydqsl/pulse.hpp"

#include "rydqsl/units.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rydqsl {

Drive::Drive(double duration, std::function<DriveSample(double)> sampler, std::vector<double> breakpoints)
    : duration_(duration), sampler_(std::move(sampler)), breakpoints_(std::move(breakpoints)) {
  if (!(duration_ > 0.0)) throw std::invalid_argument("drive duration must be positive");
  breakpoints_.push_back(0.0);
  breakpoints_.push_back(duration_);
  std::sort(breakpoints_.begin(), breakpoints_.end());
  std::vector<double> unique;
  for (double b : breakpoints_) {
    if (b < 0.0 || b > duration_) continue;
    if (unique.empty() || b - unique.back() > 1.0e-12 * duration_) unique.push_back(b);
  }
  unique.back() = duration_;
  breakpoints_ = std::move(unique);
}

Drive Drive::constant(double duration, DriveSample sample) {
  return Drive(duration, [sample](double) { return sample; });
}

SweepQuenchSweep SweepQuenchSweep::from_mhz(double tau_us, double tq_us, double delta_i_mhz,
                                            double delta_q_mhz, double delta_f_rb_mhz, double nu,
                                            double omega0_mhz) {
  SweepQuenchSweep p;
  p.tau = tau_us;
  p.t_q = tq_us;
  p.delta_initial = units::mhz_to_angular(delta_i_mhz);
  p.delta_quench = units::mhz_to_angular(delta_q_mhz);
  p.delta_final_rb = units::mhz_to_angular(delta_f_rb_mhz);
  p.nu = nu;
  p.omega0 = units::mhz_to_angular(omega0_mhz);
  p.validate();
  return p;
}

void SweepQuenchSweep::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("pulse: " + what); };
  if (!(tau > 0.0)) fail("tau must be positive");
  if (!(ramp_fraction > 0.0 && ramp_fraction < 0.4)) fail("ramp_fraction must lie in (0, 0.4)");
  if (!(t_q >= 0.0 && t_q <= tau / 10.0 * (1.0 + 1.0e-12))) fail("t_q must lie in [0, tau/10]");
  if (!(delta_initial < 0.0)) fail("initial detuning must be negative");
  if (!(delta_final_rb > 0.0)) fail("final Rb detuning must be positive");
  if (!(omega0 > 0.0)) fail("omega0 must be positive");
  if (!std::isfinite(nu) || !std::isfinite(delta_quench)) fail("non-finite parameter");
}

double SweepQuenchSweep::alpha1() const { return std::numbers::pi / (2.0 * (0.5 - ramp_fraction)); }

double SweepQuenchSweep::alpha2() const {
  return std::numbers::pi / (2.0 * (0.5 - ramp_fraction - t_q / tau));
}

std::vector<double> SweepQuenchSweep::breakpoints() const {
  return {0.0, ramp_fraction * tau, 0.5 * tau, 0.5 * tau + t_q, (1.0 - ramp_fraction) * tau, tau};
}

Drive SweepQuenchSweep::drive() const {
  validate();
  SweepQuenchSweep p = *this;
  return Drive(
      tau,
      [p](double t) {
        return DriveSample{rabi_at(p, t), detuning_at(p, t, Species::Rb), detuning_at(p, t, Species::Cs)};
      },
      breakpoints());
}

namespace {

void check_time(const SweepQuenchSweep& p, double t) {
  const double slack = 1.0e-12 * p.tau;
  if (!(t >= -slack && t <= p.tau + slack))
    throw std::out_of_range("time " + std::to_string(t) + " outside the pulse [0, tau]");
}

double sin2(double x) {
  const double s = std::sin(x);
  return s * s;
}

}  // namespace

double detuning_at(const SweepQuenchSweep& p, double t, Species s) {
  check_time(p, t);
  const double f = p.ramp_fraction * p.tau;
  const double mid = 0.5 * p.tau;
  if (t <= f) return p.delta_initial;
  if (t <= mid) return p.delta_initial + p.chi1() * sin2(p.alpha1() * (t - f) / p.tau);
  if (t <= mid + p.t_q) return p.delta_quench;
  if (t <= p.tau - f) return p.delta_quench + p.chi2(s) * sin2(p.alpha2() * (t - p.t_q - mid) / p.tau);
  return p.delta_final(s);
}

double rabi_at(const SweepQuenchSweep& p, double t) {
  check_time(p, t);
  const double f = p.ramp_fraction * p.tau;
  const double quarter = std::numbers::pi / 2.0;
  if (t < f) return p.omega0 * sin2(quarter * t / f);
  if (t <= p.tau - f) return p.omega0;
  return p.omega0 * sin2(quarter * (p.tau - t) / f);
}

double sweep_rate(const SweepQuenchSweep& p, double t, Species s) {
  check_time(p, t);
  const double f = p.ramp_fraction * p.tau;
  const double mid = 0.5 * p.tau;
  if (t > f && t < mid) {
    const double a1 = p.alpha1();
    return p.chi1() * a1 / p.tau * std::sin(2.0 * a1 * (t - f) / p.tau);
  }
  if (t > mid + p.t_q && t < p.tau - f) {
    const double a2 = p.alpha2();
    return p.chi2(s) * a2 / p.tau * std::sin(2.0 * a2 * (t - p.t_q - mid) / p.tau);
  }
  return 0.0;
}

}  // namespace rydqsl
