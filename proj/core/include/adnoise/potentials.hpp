#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adnoise/errors.hpp"

// Adatom-surface potentials U(z) and induced dipole curves mu(z), evaluated in
// Hartree atomic units (energies in hartree, lengths in bohr, dipoles in
// e*bohr). Models are immutable after construction; concurrent reads are safe.

namespace adnoise {

// Natural cubic spline on a strictly increasing grid (>= 4 points).
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double eval(double x) const;   // throws OutOfDomainError outside [x_min, x_max]
  double deriv(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  std::size_t size() const { return x_.size(); }

 private:
  std::size_t segment(double x) const;
  std::vector<double> x_, y_, y2_;  // y2_: second derivatives at the knots
};

// Asymptotic -[(eps-1)/(eps+1)] * C3 / z^3 branch, attached beyond z_match.
struct LongRangeTail {
  double c3 = 0.0;       // hartree * bohr^3
  double epsilon = 1.0;  // dielectric constant of the substrate
  double z_match = 0.0;  // bohr

  double prefactor() const { return (epsilon - 1.0) / (epsilon + 1.0) * c3; }
  double eval(double z) const;
  double deriv(double z) const;
};

class PotentialModel {
 public:
  enum class Kind { Morse, Harmonic, Tabulated };

  // U(z) = U0 * (exp(-2a(z-z0)) - 2 exp(-a(z-z0))); depth U0 > 0, width a > 0.
  static PotentialModel morse(double depth, double z0, double a);
  // U(z) = -U0 + m_ref omega^2 (z-z0)^2 / 2. Included for analytic checks;
  // unlike the decaying wells it grows without bound away from z0.
  static PotentialModel harmonic(double depth, double z0, double omega, double m_ref);
  // Natural cubic spline through (z, U) samples; grid strictly increasing,
  // at least 4 rows.
  static PotentialModel tabulated(std::vector<double> z, std::vector<double> u);

  // Returns a copy with the asymptotic tail attached for z >= z_match.
  // The value mismatch at z_match must be <= 1e-6 * depth().
  PotentialModel with_tail(const LongRangeTail& tail) const;

  double eval(double z) const;
  double deriv(double z) const;

  Kind kind() const { return kind_; }
  double depth() const { return depth_; }           // U0 (positive)
  double minimum_position() const { return z0_; }   // z0
  double morse_width() const;                       // a, Morse only
  double harmonic_omega() const;                    // omega, harmonic only
  double harmonic_mass() const;                     // m_ref, harmonic only
  const std::optional<LongRangeTail>& tail() const { return tail_; }
  // Tabulated domain limits (infinite for analytic kinds).
  double domain_min() const;
  double domain_max() const;

  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

 private:
  PotentialModel() = default;
  Kind kind_ = Kind::Morse;
  double depth_ = 0.0, z0_ = 0.0;
  double morse_a_ = 0.0;
  double omega_ = 0.0, m_ref_ = 0.0;
  CubicSpline table_;
  std::optional<LongRangeTail> tail_;
  std::string provenance_;
};

// Fixes the Morse width from the harmonic frequency at the minimum:
// a = nu10 * sqrt(m / (2 U0)), so that U''(z0) = m * nu10^2.
// nu10 is an angular frequency in atomic units; m in electron masses.
PotentialModel morse_from_observables(double depth, double z0, double nu10, double mass);

// For a given model, the C3 that makes the tail continuous at z_match.
double tail_matching_c3(const PotentialModel& model, double epsilon, double z_match);

// CSV ingestion: header "z_angstrom,value", a "# unit: <name>" comment line
// declaring the value unit, rows ascending in z. Converted to atomic units.
PotentialModel load_tabulated_potential(const std::string& path);

class DipoleCurve {
 public:
  enum class Kind { PowerLawSaturating, Tabulated };

  // mu(z) = mu_contact for z < z0, mu_contact * (z0/z)^4 for z >= z0.
  static DipoleCurve power_law(double mu_contact, double z0);
  static DipoleCurve tabulated(std::vector<double> z, std::vector<double> mu);

  double eval(double z) const;
  Kind kind() const { return kind_; }
  double contact_value() const { return mu_contact_; }
  const std::string& provenance() const { return provenance_; }
  void set_provenance(std::string p) { provenance_ = std::move(p); }

 private:
  DipoleCurve() = default;
  Kind kind_ = Kind::PowerLawSaturating;
  double mu_contact_ = 0.0, z0_ = 0.0;
  CubicSpline table_;
  std::string provenance_;
};

DipoleCurve load_tabulated_dipole(const std::string& path);

}  // namespace adnoise
