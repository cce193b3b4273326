#pragma once

#include "adnoise/errors.hpp"
#include "adnoise/phonons.hpp"

// Propagation of the single-dipole spectrum to trap observables, SI units:
//   S_E(omega) = (3 pi / 4) sigma / (4 pi eps0)^2 * S_mu(omega) / d^4
//   Gamma_h    = q^2 / (4 m_I hbar omega_t) * S_E(omega_t)
// plus the harmonic-well estimates
//   nu10 ~ zeta sqrt(U0 / (m z0^2)),  Gamma0 ~ nu10^4 m / (4 pi v^3 rho)
// and their mass-scaling laws nu10 ~ m^-1/2, Gamma0 ~ m^-1.

namespace adnoise {

struct TrapGeometry {
  double charge_C = 0.0;
  double ion_mass_kg = 0.0;
  double trap_omega_rad_s = 0.0;  // angular
  double distance_m = 0.0;        // ion-surface distance d
  double sigma_per_m2 = 0.0;      // adsorbate surface density

  void validate() const;  // all positive, d > 1 nm
};

// S_mu in SI: (C m)^2 s. Returns V^2 m^-2 Hz^-1.
double field_spectrum(double sigma_per_m2, double distance_m, double s_mu_si);

// quanta per second.
double heating_rate(const TrapGeometry& geom, double s_e_at_trap);

struct HarmonicEstimates {
  double nu10_rad_s = 0.0;
  double gamma0_per_s = 0.0;
};

// U0 in joule, z0 in meter, adatom mass in kg; zeta is the order-one factor.
HarmonicEstimates harmonic_estimates(double depth_J, double z0_m, double mass_kg,
                                     const HostMaterial& host, double zeta = 1.0);

// nu10 ~ m^-1/2 at fixed (U0, z0); Gamma0 ~ nu10^4 m ~ m^-1.
HarmonicEstimates mass_rescale(double nu10_ref, double gamma0_ref, double mass_ref,
                               double mass_new);

}  // namespace adnoise
