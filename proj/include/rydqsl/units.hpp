#pragma once

#include <numbers>

// Internal unit system: lengths in µm, times in µs, energies as angular
// frequencies in rad/µs. User-facing frequencies are plain MHz.
namespace rydqsl::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

constexpr double mhz_to_angular(double f_mhz) { return two_pi * f_mhz; }
constexpr double angular_to_mhz(double w) { return w / two_pi; }

/// C6 given as C6/2π in GHz·µm⁶ -> rad/µs·µm⁶.
constexpr double c6_ghz_to_angular(double c6_ghz) { return two_pi * c6_ghz * 1.0e3; }
constexpr double c6_angular_to_ghz(double c6) { return c6 / (two_pi * 1.0e3); }

}  // namespace rydqsl::units
