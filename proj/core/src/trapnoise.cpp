#include "adnoise/trapnoise.hpp"

#include <cmath>
#include <numbers>

#include "adnoise/units.hpp"

namespace adnoise {

using std::numbers::pi;
namespace C = units::constants;

void TrapGeometry::validate() const {
  if (!(charge_C > 0.0 && ion_mass_kg > 0.0 && trap_omega_rad_s > 0.0 &&
        distance_m > 0.0 && sigma_per_m2 >= 0.0))
    throw InvalidArgument("trap geometry: q, m_I, omega_t, d must be positive");
  if (!(distance_m > 1e-9))
    throw InvalidArgument("trap geometry: d must exceed 1 nm (far-field planar formula)");
}

double field_spectrum(double sigma_per_m2, double distance_m, double s_mu_si) {
  if (!(distance_m > 0.0)) throw InvalidArgument("field_spectrum: d must be positive");
  if (sigma_per_m2 < 0.0) throw InvalidArgument("field_spectrum: sigma must be >= 0");
  const double coulomb = 4.0 * pi * C::vacuum_permittivity_F_per_m;
  const double d2 = distance_m * distance_m;
  const double d4 = d2 * d2;
  return (3.0 * pi / 4.0) * sigma_per_m2 / (coulomb * coulomb) * s_mu_si / d4;
}

double heating_rate(const TrapGeometry& geom, double s_e_at_trap) {
  geom.validate();
  if (s_e_at_trap < 0.0) throw InvalidArgument("heating_rate: S_E must be >= 0");
  return geom.charge_C * geom.charge_C /
         (4.0 * geom.ion_mass_kg * C::hbar_Js * geom.trap_omega_rad_s) * s_e_at_trap;
}

HarmonicEstimates harmonic_estimates(double depth_J, double z0_m, double mass_kg,
                                     const HostMaterial& host, double zeta) {
  if (!(depth_J > 0.0 && z0_m > 0.0 && mass_kg > 0.0 && zeta > 0.0))
    throw InvalidArgument("harmonic_estimates: inputs must be positive");
  host.validate();
  HarmonicEstimates est;
  est.nu10_rad_s = zeta * std::sqrt(depth_J / (mass_kg * z0_m * z0_m));
  const double nu4 = est.nu10_rad_s * est.nu10_rad_s * est.nu10_rad_s * est.nu10_rad_s;
  const double v = host.sound_speed_m_s;
  est.gamma0_per_s = nu4 * mass_kg / (4.0 * pi * v * v * v * host.density_kg_m3);
  return est;
}

HarmonicEstimates mass_rescale(double nu10_ref, double gamma0_ref, double mass_ref,
                               double mass_new) {
  if (!(mass_ref > 0.0 && mass_new > 0.0))
    throw InvalidArgument("mass_rescale: masses must be positive");
  const double s = std::sqrt(mass_ref / mass_new);
  return HarmonicEstimates{nu10_ref * s, gamma0_ref * (mass_ref / mass_new)};
}

}  // namespace adnoise
