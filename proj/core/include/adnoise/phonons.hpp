#pragma once

#include <string>
#include <vector>

#include "adnoise/errors.hpp"

// Phonon density of states g(omega) per surface atom, normalized so that
// integral g d(omega) = 3 (three modes per atom). With that convention the
// golden-rule rate of a harmonic well against a Debye bath reduces to the
// closed form Gamma0 = nu10^4 m / (4 pi v^3 rho), which is how the
// normalization is pinned down. Internal units: atomic (omega in hartree/hbar).

namespace adnoise {

struct HostMaterial {
  // SI fields; atomic-unit accessors below.
  double atom_mass_kg = 0.0;  // surface atom mass M
  double density_kg_m3 = 0.0; // slab mass density rho
  double sound_speed_m_s = 0.0;

  double atom_mass_au() const;
  double density_au() const;     // m_e / bohr^3
  double sound_speed_au() const; // bohr / atomic time
  double debye_cutoff_au() const;  // omega_D = v (6 pi^2 rho / M)^(1/3)
  double debye_cutoff_rad_s() const;

  void validate() const;

  // Handbook values: M = 197 amu, rho = 19300 kg/m^3, v = 3200 m/s.
  static HostMaterial gold();
};

class PhononModel {
 public:
  enum class Kind { Debye, Tabulated };

  static PhononModel debye(const HostMaterial& host);
  // omega ascending (atomic units), g >= 0; renormalized to integral = 3.
  static PhononModel tabulated(const HostMaterial& host, std::vector<double> omega,
                               std::vector<double> g);

  // g(omega) per atom per unit angular frequency (atomic units);
  // zero outside the support, linear interpolation for tables.
  double eval(double omega) const;

  Kind kind() const { return kind_; }
  const HostMaterial& host() const { return host_; }
  double support_max() const;

  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

 private:
  PhononModel() = default;
  Kind kind_ = Kind::Debye;
  HostMaterial host_;
  std::vector<double> omega_, g_;
  std::string provenance_;
};

// CSV "freq_thz,g_per_thz_per_atom" (ordinary frequency), "#" comments allowed;
// converted to angular frequency and renormalized on load.
PhononModel load_tabulated_pdos(const std::string& path, const HostMaterial& host);

// Thermal occupation n(omega) = 1/(exp(hbar omega / kB T) - 1).
// omega in atomic units, T in kelvin; T = 0 returns exactly 0.
double bose_occupation(double omega, double temperature_K);

}  // namespace adnoise
