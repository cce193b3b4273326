#include "adnoise/diffusion.hpp"

#include <cmath>
#include <numbers>

#include "adnoise/units.hpp"

namespace adnoise {

using std::numbers::pi;
namespace C = units::constants;

void DiffusionInput::validate() const {
  if (activation_energy_J < 0.0)
    throw InvalidArgument("diffusion: E_a must be >= 0");
  if (!(attempt_prefactor_Hz > 0.0))
    throw InvalidArgument("diffusion: attempt prefactor must be positive");
  if (temperature_K < 0.0) throw InvalidArgument("diffusion: T must be >= 0");
}

std::vector<std::string> DiffusionInput::warnings() const {
  std::vector<std::string> w;
  if (attempt_prefactor_Hz < 1e11 || attempt_prefactor_Hz > 1e14)
    w.push_back("attempt prefactor " + std::to_string(attempt_prefactor_Hz) +
                " Hz outside the usual 1e11..1e14 Hz surface range");
  return w;
}

double arrhenius_rate(const DiffusionInput& in) {
  in.validate();
  if (in.temperature_K == 0.0)
    throw InvalidArgument(
        "arrhenius_rate: T = 0 (thermal rate identically zero; use the tunneling rate)");
  return in.attempt_prefactor_Hz *
         std::exp(-in.activation_energy_J / (C::boltzmann_J_per_K * in.temperature_K));
}

double redhead_temperature(double activation_energy_J) {
  if (!(activation_energy_J > 0.0))
    throw InvalidArgument("redhead_temperature: E_a must be positive");
  const double e_kcal_mol = activation_energy_J / C::kcal_per_mol_J;
  return e_kcal_mol / 0.06;
}

double tunneling_rate(const DiffusionInput& in) {
  if (!(in.activation_energy_J > 0.0 && in.adatom_mass_kg > 0.0 &&
        in.barrier_width_m > 0.0))
    throw InvalidArgument("tunneling_rate: E_a, m, b must be positive");
  const double omega = std::sqrt(2.0 * in.activation_energy_J /
                                 (in.adatom_mass_kg * in.barrier_width_m * in.barrier_width_m));
  const double s = 2.0 * in.activation_energy_J / (C::hbar_Js * omega);
  return 2.0 * omega / std::pow(pi, 1.5) * std::sqrt(s) * std::exp(-s);
}

double debroglie_wavelength(double mass_kg, double temperature_K) {
  if (!(mass_kg > 0.0 && temperature_K > 0.0))
    throw InvalidArgument("debroglie_wavelength: m and T must be positive");
  return 2.0 * pi * C::hbar_Js /
         std::sqrt(3.0 * mass_kg * C::boltzmann_J_per_K * temperature_K);
}

double diffusion_coefficient(double lattice_parameter_m, double jump_rate_Hz) {
  if (!(lattice_parameter_m > 0.0))
    throw InvalidArgument("diffusion_coefficient: r0 must be positive");
  if (jump_rate_Hz < 0.0)
    throw InvalidArgument("diffusion_coefficient: jump rate must be >= 0");
  return std::sqrt(3.0) / 4.0 * lattice_parameter_m * lattice_parameter_m * jump_rate_Hz;
}

double thermal_tunneling_crossover(const DiffusionInput& in) {
  const double gt = tunneling_rate(in);
  if (!(in.attempt_prefactor_Hz > gt))
    throw InvalidArgument("crossover: prefactor must exceed the tunneling rate");
  return in.activation_energy_J /
         (C::boltzmann_J_per_K * std::log(in.attempt_prefactor_Hz / gt));
}

}  // namespace adnoise
