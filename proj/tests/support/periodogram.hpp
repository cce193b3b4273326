#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "adnoise/fluctuator.hpp"
#include "adnoise/units.hpp"

// Monte-Carlo spectrum estimator used as the independent oracle for the
// master-equation decomposition: averaged periodograms of independent
// Gillespie batches. mu(t) is piecewise constant, so the finite-time Fourier
// transform has a closed form per jump interval.

namespace testsupport {

struct BatchedEstimate {
  std::vector<double> mean;
  std::vector<double> std_error;  // of the mean, from batch scatter
};

inline BatchedEstimate estimate_spectrum(const adnoise::FluctuatorSystem& sys,
                                         const std::vector<double>& omegas,
                                         int batches, double t_batch,
                                         std::uint64_t seed0) {
  double mean_mu = 0.0;
  for (int i = 0; i < sys.n_levels; ++i)
    mean_mu += sys.stationary[i] * sys.level_dipoles[i];

  const std::size_t nw = omegas.size();
  std::vector<double> sum(nw, 0.0), sumsq(nw, 0.0);

  for (int b = 0; b < batches; ++b) {
    const adnoise::Trajectory traj =
        adnoise::gillespie_sample(sys, t_batch, seed0 + static_cast<std::uint64_t>(b));
    const std::size_t njump = traj.times.size();
    for (std::size_t iw = 0; iw < nw; ++iw) {
      const double w = omegas[iw];
      std::complex<double> x(0.0, 0.0);
      for (std::size_t k = 0; k < njump; ++k) {
        const double mu_k = sys.level_dipoles[traj.levels[k]] - mean_mu;
        const double t0 = traj.times[k];
        const double t1 = k + 1 < njump ? traj.times[k + 1] : traj.t_total;
        if (w == 0.0) {
          x += mu_k * (t1 - t0);
        } else {
          const std::complex<double> e0 = std::polar(1.0, -w * t0);
          const std::complex<double> e1 = std::polar(1.0, -w * t1);
          x += mu_k * (e1 - e0) / std::complex<double>(0.0, -w);
        }
      }
      const double p = std::norm(x) / traj.t_total;
      sum[iw] += p;
      sumsq[iw] += p * p;
    }
  }

  BatchedEstimate est;
  est.mean.resize(nw);
  est.std_error.resize(nw);
  for (std::size_t iw = 0; iw < nw; ++iw) {
    est.mean[iw] = sum[iw] / batches;
    const double var = sumsq[iw] / batches - est.mean[iw] * est.mean[iw];
    est.std_error[iw] = std::sqrt(std::max(var, 0.0) / batches);
  }
  return est;
}

inline BatchedEstimate estimate_occupations(const adnoise::FluctuatorSystem& sys,
                                            int batches, double t_batch,
                                            std::uint64_t seed0) {
  const int n = sys.n_levels;
  std::vector<double> sum(n, 0.0), sumsq(n, 0.0);
  for (int b = 0; b < batches; ++b) {
    const adnoise::Trajectory traj =
        adnoise::gillespie_sample(sys, t_batch, seed0 + static_cast<std::uint64_t>(b));
    std::vector<double> occupied(n, 0.0);
    const std::size_t njump = traj.times.size();
    for (std::size_t k = 0; k < njump; ++k) {
      const double t1 = k + 1 < njump ? traj.times[k + 1] : traj.t_total;
      occupied[traj.levels[k]] += t1 - traj.times[k];
    }
    for (int i = 0; i < n; ++i) {
      const double f = occupied[i] / traj.t_total;
      sum[i] += f;
      sumsq[i] += f * f;
    }
  }
  BatchedEstimate est;
  est.mean.resize(n);
  est.std_error.resize(n);
  for (int i = 0; i < n; ++i) {
    est.mean[i] = sum[i] / batches;
    const double var = sumsq[i] / batches - est.mean[i] * est.mean[i];
    est.std_error[i] = std::sqrt(std::max(var, 0.0) / batches);
  }
  return est;
}

// Three-level detailed-balance test system with order-one rates.
inline adnoise::FluctuatorSystem three_level_fixture() {
  const double kT_au = 1.0;  // model temperature; T_K chosen to make kT = 1 a.u.
  const double t_kelvin = kT_au * adnoise::units::constants::hartree_per_kB_K;
  const std::vector<double> energies{0.0, 1.0, 2.5};
  const std::vector<double> dipoles{0.0, 0.8, 1.9};
  const double c10 = 1.0, c21 = 1.7, c20 = 0.6;
  std::vector<std::vector<double>> rates(3, std::vector<double>(3, 0.0));
  rates[1][0] = c10;
  rates[0][1] = c10 * std::exp(-(energies[1] - energies[0]) / kT_au);
  rates[2][1] = c21;
  rates[1][2] = c21 * std::exp(-(energies[2] - energies[1]) / kT_au);
  rates[2][0] = c20;
  rates[0][2] = c20 * std::exp(-(energies[2] - energies[0]) / kT_au);
  return adnoise::FluctuatorSystem::from_rates(energies, dipoles, rates, t_kelvin);
}

}  // namespace testsupport
