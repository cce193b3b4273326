#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "adnoise/errors.hpp"

// Physical constants and unit conversion. Everything numerical in the library
// runs in Hartree atomic units; conversions happen at I/O boundaries only.

namespace adnoise::units {

// CODATA-2018 values, SI. Exact values (2019 SI redefinition) are marked.
namespace constants {
inline constexpr double planck_Js = 6.62607015e-34;             // exact
inline constexpr double boltzmann_J_per_K = 1.380649e-23;       // exact
inline constexpr double elementary_charge_C = 1.602176634e-19;  // exact
inline constexpr double avogadro = 6.02214076e23;               // exact
inline constexpr double light_speed_m_per_s = 299792458.0;      // exact
inline constexpr double hbar_Js = planck_Js / 6.283185307179586476925287;
inline constexpr double hartree_J = 4.3597447222071e-18;
inline constexpr double hartree_eV = 27.211386245988;
inline constexpr double bohr_m = 5.29177210903e-11;
inline constexpr double electron_mass_kg = 9.1093837015e-31;
inline constexpr double amu_kg = 1.66053906660e-27;
inline constexpr double vacuum_permittivity_F_per_m = 8.8541878128e-12;

inline constexpr double eV_J = elementary_charge_C;  // 1 eV in joule
// thermochemical calorie, 1 kcal/mol in joule per particle
inline constexpr double kcal_per_mol_J = 4184.0 / avogadro;
inline constexpr double debye_Cm = 1e-21 / light_speed_m_per_s;

// Derived atomic-unit scales.
inline constexpr double atomic_time_s = hbar_Js / hartree_J;
inline constexpr double atomic_angular_frequency_rad_s = hartree_J / hbar_Js;
inline constexpr double amu_me = amu_kg / electron_mass_kg;
inline constexpr double hartree_per_kB_K = hartree_J / boltzmann_J_per_K;
inline constexpr double ebohr_Cm = elementary_charge_C * bohr_m;
inline constexpr double atomic_velocity_m_per_s = bohr_m / atomic_time_s;

inline constexpr const char* version = "CODATA-2018";
}  // namespace constants

enum class Dimension {
  Energy,
  Length,
  Mass,
  Frequency,
  AngularFrequency,
  Temperature,
  Rate,
  Dipole,
  DiffusionCoefficient,
  FieldSpectralDensity,
};

enum class Unit {
  // energy
  Hartree,
  ElectronVolt,
  Joule,
  KcalPerMol,
  // length
  Bohr,
  Angstrom,
  Meter,
  Nanometer,
  Micrometer,
  // mass
  Amu,
  Kilogram,
  ElectronMass,
  // frequency (ordinary)
  Hertz,
  Terahertz,
  // angular frequency
  RadPerSecond,
  AtomicAngularFrequency,  // hartree / hbar
  // temperature
  Kelvin,
  // rate
  PerSecond,
  PerAtomicTime,
  // dipole
  Debye,
  EBohr,
  CoulombMeter,
  // diffusion coefficient
  M2PerSecond,
  Cm2PerSecond,
  // electric-field spectral density
  V2PerM2PerHz,
};

struct Quantity {
  double value = 0.0;
  Unit unit = Unit::Hartree;
};

Dimension dimension_of(Unit u);
const char* unit_name(Unit u);
const char* dimension_name(Dimension d);

// Factor that takes one of `u` to the dimension's SI reference unit
// (J, m, kg, Hz, rad/s, K, 1/s, C·m, m²/s, V²m⁻²Hz⁻¹).
double to_si_factor(Unit u);

// Parses the names produced by unit_name() plus a few common aliases
// ("eV", "THz", "angstrom", ...). Returns nullopt when unknown.
std::optional<Unit> unit_from_name(std::string_view name);

// Pure conversion; throws DimensionError naming both units on a mismatch.
Quantity convert(const Quantity& q, Unit target);
double convert_value(double value, Unit from, Unit to);

}  // namespace adnoise::units
