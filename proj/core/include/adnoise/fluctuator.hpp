#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adnoise/boundstates.hpp"
#include "adnoise/phonons.hpp"

// Multi-level Markov fluctuator: golden-rule transition rates between bound
// vibrational levels, the stationary occupation, and the Lorentzian
// decomposition of the dipole fluctuation spectrum
//   S_mu(omega) = sum_a  w_a * 2 lambda_a / (lambda_a^2 + omega^2),
// obtained by symmetrizing the rate matrix with the sqrt(p_n) similarity
// transform and dropping the zero mode (which carries <mu>^2).
// Atomic units throughout; temperatures in kelvin.

namespace adnoise {

struct FluctuatorSystem {
  int n_levels = 0;
  std::vector<double> level_energies;       // ascending, hartree
  std::vector<double> level_dipoles;        // e*bohr
  std::vector<std::vector<double>> rates;   // rates[n][m] = Gamma_{n->m}, 1/atomic time
  double temperature_K = 0.0;
  std::vector<double> stationary;           // p_n from the rate-matrix null space

  double total_exit_rate(int n) const;
  double max_rate() const;

  // Validates shapes, non-negative off-diagonals and detailed balance, then
  // solves the stationary law. Hand-built systems (tests, oracles) enter here.
  static FluctuatorSystem from_rates(std::vector<double> energies,
                                     std::vector<double> dipoles,
                                     std::vector<std::vector<double>> rates,
                                     double temperature_K);
};

// Rates per the golden rule with the per-atom PDOS normalization:
//   Gamma_{n->m} = pi g(nu)/(3 M nu) |<n|U'|m>|^2 (n_B(nu)+1)   downward,
//   Gamma_{m->n} = same prefactor * n_B(nu)                      upward.
// Throws PhononSilentError when every level pair falls outside the PDOS
// support. T = 0 gives zero upward rates (valid, not an error).
FluctuatorSystem transition_rates(const BoundStateSet& states,
                                  const PotentialModel& model,
                                  const DipoleCurve& dipole,
                                  const PhononModel& phonons,
                                  double temperature_K, int n_levels);

// Null-space solve of the generator; T = 0 returns the ground-state point
// mass. Throws NumericalError for a reducible rate matrix at T > 0.
std::vector<double> stationary_distribution(const FluctuatorSystem& sys);

struct SpectralMode {
  double weight = 0.0;  // w_a, (e*bohr)^2
  double decay = 0.0;   // lambda_a > 0, 1/atomic time
};

struct SpectralDecomposition {
  std::vector<SpectralMode> modes;
  double mean_dipole = 0.0;
  double variance = 0.0;

  double eval(double omega) const;  // S_mu(omega), (e*bohr)^2 * atomic time
  double sum_of_weights() const;
};

SpectralDecomposition dipole_spectrum_decomposition(const FluctuatorSystem& sys);

struct SpectrumResult {
  SpectralDecomposition decomposition;
  std::vector<double> values;  // S_mu on the requested grid
};

SpectrumResult dipole_spectrum(const FluctuatorSystem& sys,
                               std::span<const double> omega_grid);

// The low-temperature two-level form
//   (delta_mu)^2 * 2 Gamma0/(Gamma0^2+omega^2) * exp(-nu10/kT);
// exact zero at T = 0. Atomic units; T in kelvin.
double two_level_spectrum(double delta_mu, double gamma0, double nu10,
                          double temperature_K, double omega);

// Half width at half maximum of a spectrum sampled on an ascending grid that
// starts at omega = 0; linear interpolation in (omega^2, 1/S), which is exact
// for a single Lorentzian.
double half_width_at_half_max(std::span<const double> omega,
                              std::span<const double> values);

// Continuous-time Markov trajectory with exponential waiting times.
// mt19937_64 driven; doubles from the top 53 bits; inverse-CDF sampling.
// Identical seeds give identical trajectories.
struct Trajectory {
  std::vector<double> times;   // times[0] = 0, then jump times
  std::vector<int> levels;     // levels[k] occupied from times[k] to times[k+1]
  double t_total = 0.0;
  bool too_short = false;      // t_total < 50 / (slowest nonzero exit rate)
};

Trajectory gillespie_sample(const FluctuatorSystem& sys, double t_total,
                            std::uint64_t seed);

}  // namespace adnoise
