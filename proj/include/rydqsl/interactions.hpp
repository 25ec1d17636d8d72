#pragma once

#include "rydqsl/geometry.hpp"

#include <Eigen/Dense>

#include <optional>

namespace rydqsl {

/// van der Waals C6 coefficients in rad/µs·µm⁶.
struct C6Table {
  double rb_rb;
  double cs_cs;
  double rb_cs;

  /// Values given as C6/2π in GHz·µm⁶.
  static C6Table from_ghz(double rb_rb_ghz, double cs_cs_ghz, double rb_cs_ghz);
  /// 2π × (2550, 2350, 3700) GHz·µm⁶ for the 81S₁/₂ Rydberg state.
  static C6Table defaults();

  double for_pair(Species si, Species sj) const;
};

/// Symmetric N×N couplings V_ij in rad/µs with zero diagonal.
using InteractionTable = Eigen::MatrixXd;

/// C6/r⁶ in rad/µs for c6 in rad/µs·µm⁶ and r in µm.
double vdw_energy(double c6, double r_um);

/// Distance at which vdw_energy(c6, R_b) equals omega0 (rad/µs).
double blockade_radius(double c6, double omega0);

/// Pairwise vdW couplings; pairs beyond `cutoff_um` are zeroed when given.
InteractionTable interaction_table(const LatticePatch& patch, const C6Table& c6,
                                   std::optional<double> cutoff_um = std::nullopt);

}  // namespace rydqsl
