#include "rydqsl/interactions.hpp"

#include "rydqsl/units.hpp"

#include <cmath>
#include <stdexcept>

namespace rydqsl {

C6Table C6Table::from_ghz(double rb_rb_ghz, double cs_cs_ghz, double rb_cs_ghz) {
  if (!(rb_rb_ghz > 0.0 && cs_cs_ghz > 0.0 && rb_cs_ghz > 0.0))
    throw std::invalid_argument("C6 coefficients must be strictly positive");
  return {units::c6_ghz_to_angular(rb_rb_ghz), units::c6_ghz_to_angular(cs_cs_ghz),
          units::c6_ghz_to_angular(rb_cs_ghz)};
}

C6Table C6Table::defaults() { return from_ghz(2550.0, 2350.0, 3700.0); }

double C6Table::for_pair(Species si, Species sj) const {
  if (si != sj) return rb_cs;
  return si == Species::Rb ? rb_rb : cs_cs;
}

double vdw_energy(double c6, double r_um) {
  if (!(r_um > 0.0)) throw std::invalid_argument("vdw_energy needs a positive distance");
  const double r2 = r_um * r_um;
  return c6 / (r2 * r2 * r2);
}

double blockade_radius(double c6, double omega0) {
  if (!(omega0 > 0.0)) throw std::invalid_argument("blockade_radius needs a positive Rabi frequency");
  return std::pow(c6 / omega0, 1.0 / 6.0);
}

InteractionTable interaction_table(const LatticePatch& patch, const C6Table& c6,
                                   std::optional<double> cutoff_um) {
  const int n = patch.size();
  InteractionTable v = InteractionTable::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double r = patch.distance(i, j);
      if (cutoff_um && r > *cutoff_um) continue;
      v(i, j) = v(j, i) = vdw_energy(c6.for_pair(patch.site(i).species, patch.site(j).species), r);
    }
  return v;
}

}  // namespace rydqsl
