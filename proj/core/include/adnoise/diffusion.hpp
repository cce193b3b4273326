#pragma once

#include <string>
#include <vector>

#include "adnoise/errors.hpp"

// Lateral adatom kinetics on an fcc(111) surface, SI units:
//   Arrhenius hopping      Gamma_therm = gamma exp(-E_a / kB T)
//   Redhead migration rule T_mig = E_a[kcal/mol] / 0.06 K
//   parabolic double-well tunneling with omega = sqrt(2 E_a / (m b^2))
//   de Broglie wavelength  lambda_B = 2 pi hbar / sqrt(3 m kB T)
//   diffusion coefficient  D = (sqrt(3)/4) r0^2 Gamma

namespace adnoise {

struct DiffusionInput {
  double activation_energy_J = 0.0;  // E_a
  double attempt_prefactor_Hz = 0.0; // gamma
  double temperature_K = 0.0;
  double adatom_mass_kg = 0.0;
  double barrier_width_m = 0.0;      // b
  double lattice_parameter_m = 0.0;  // r0

  // Non-fatal sanity notes, e.g. gamma outside the usual 1e11..1e14 Hz window.
  std::vector<std::string> warnings() const;
  void validate() const;
};

// Throws InvalidArgument at T = 0 (rate identically zero, flagged explicitly).
// E_a = 0 returns gamma exactly (barrierless limit).
double arrhenius_rate(const DiffusionInput& in);

double redhead_temperature(double activation_energy_J);  // kelvin

// Temperature-independent ground-level tunneling rate, Hz.
double tunneling_rate(const DiffusionInput& in);

double debroglie_wavelength(double mass_kg, double temperature_K);  // meter

double diffusion_coefficient(double lattice_parameter_m, double jump_rate_Hz);  // m^2/s

// T* where the Arrhenius rate crosses the tunneling rate.
double thermal_tunneling_crossover(const DiffusionInput& in);  // kelvin

}  // namespace adnoise
