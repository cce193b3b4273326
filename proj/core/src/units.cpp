#include "adnoise/units.hpp"

#include <array>
#include <cctype>

namespace adnoise::units {

namespace {

struct UnitInfo {
  Unit unit;
  Dimension dim;
  double to_si;
  const char* name;
};

using namespace constants;

constexpr std::array<UnitInfo, 25> kUnits{{
    {Unit::Hartree, Dimension::Energy, hartree_J, "hartree"},
    {Unit::ElectronVolt, Dimension::Energy, eV_J, "eV"},
    {Unit::Joule, Dimension::Energy, 1.0, "J"},
    {Unit::KcalPerMol, Dimension::Energy, kcal_per_mol_J, "kcal_per_mol"},
    {Unit::Bohr, Dimension::Length, bohr_m, "bohr"},
    {Unit::Angstrom, Dimension::Length, 1e-10, "angstrom"},
    {Unit::Meter, Dimension::Length, 1.0, "m"},
    {Unit::Nanometer, Dimension::Length, 1e-9, "nm"},
    {Unit::Micrometer, Dimension::Length, 1e-6, "um"},
    {Unit::Amu, Dimension::Mass, amu_kg, "amu"},
    {Unit::Kilogram, Dimension::Mass, 1.0, "kg"},
    {Unit::ElectronMass, Dimension::Mass, electron_mass_kg, "m_e"},
    {Unit::Hertz, Dimension::Frequency, 1.0, "Hz"},
    {Unit::Terahertz, Dimension::Frequency, 1e12, "THz"},
    {Unit::RadPerSecond, Dimension::AngularFrequency, 1.0, "rad_s"},
    {Unit::AtomicAngularFrequency, Dimension::AngularFrequency,
     atomic_angular_frequency_rad_s, "hartree_per_hbar"},
    {Unit::Kelvin, Dimension::Temperature, 1.0, "K"},
    {Unit::PerSecond, Dimension::Rate, 1.0, "per_s"},
    {Unit::PerAtomicTime, Dimension::Rate, 1.0 / atomic_time_s, "per_atomic_time"},
    {Unit::Debye, Dimension::Dipole, debye_Cm, "debye"},
    {Unit::EBohr, Dimension::Dipole, ebohr_Cm, "e_bohr"},
    {Unit::CoulombMeter, Dimension::Dipole, 1.0, "C_m"},
    {Unit::M2PerSecond, Dimension::DiffusionCoefficient, 1.0, "m2_s"},
    {Unit::Cm2PerSecond, Dimension::DiffusionCoefficient, 1e-4, "cm2_s"},
    {Unit::V2PerM2PerHz, Dimension::FieldSpectralDensity, 1.0, "V2_m2_Hz"},
}};

const UnitInfo& info(Unit u) {
  for (const auto& e : kUnits)
    if (e.unit == u) return e;
  return kUnits.back();
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Dimension dimension_of(Unit u) { return info(u).dim; }

const char* unit_name(Unit u) { return info(u).name; }

const char* dimension_name(Dimension d) {
  switch (d) {
    case Dimension::Energy: return "energy";
    case Dimension::Length: return "length";
    case Dimension::Mass: return "mass";
    case Dimension::Frequency: return "frequency";
    case Dimension::AngularFrequency: return "angular-frequency";
    case Dimension::Temperature: return "temperature";
    case Dimension::Rate: return "rate";
    case Dimension::Dipole: return "dipole";
    case Dimension::DiffusionCoefficient: return "diffusion-coefficient";
    case Dimension::FieldSpectralDensity: return "electric-field-spectral-density";
  }
  return "?";
}

double to_si_factor(Unit u) { return info(u).to_si; }

std::optional<Unit> unit_from_name(std::string_view name) {
  const std::string n = lower(name);
  for (const auto& e : kUnits)
    if (lower(e.name) == n) return e.unit;
  // common aliases
  if (n == "ha" || n == "hartrees") return Unit::Hartree;
  if (n == "ev" || n == "electronvolt") return Unit::ElectronVolt;
  if (n == "joule") return Unit::Joule;
  if (n == "kcal/mol" || n == "kcal_mol") return Unit::KcalPerMol;
  if (n == "a" || n == "ang" || n == "aa") return Unit::Angstrom;
  if (n == "meter" || n == "metre") return Unit::Meter;
  if (n == "micrometer" || n == "micron") return Unit::Micrometer;
  if (n == "hz") return Unit::Hertz;
  if (n == "thz") return Unit::Terahertz;
  if (n == "rad/s" || n == "rad_per_s" || n == "rad_s^-1") return Unit::RadPerSecond;
  if (n == "kelvin") return Unit::Kelvin;
  if (n == "1/s" || n == "s^-1" || n == "per_second") return Unit::PerSecond;
  if (n == "d") return Unit::Debye;
  if (n == "e*bohr" || n == "ebohr") return Unit::EBohr;
  if (n == "m^2/s" || n == "m2/s") return Unit::M2PerSecond;
  if (n == "cm^2/s" || n == "cm2/s") return Unit::Cm2PerSecond;
  if (n == "electron_mass" || n == "me") return Unit::ElectronMass;
  return std::nullopt;
}

Quantity convert(const Quantity& q, Unit target) {
  const auto& from = info(q.unit);
  const auto& to = info(target);
  if (from.dim != to.dim) {
    throw DimensionError(std::string("cannot convert '") + from.name + "' (" +
                         dimension_name(from.dim) + ") to '" + to.name + "' (" +
                         dimension_name(to.dim) + ")");
  }
  return Quantity{q.value * (from.to_si / to.to_si), target};
}

double convert_value(double value, Unit from, Unit to) {
  return convert(Quantity{value, from}, to).value;
}

}  // namespace adnoise::units
