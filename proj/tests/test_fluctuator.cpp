#include <doctest.h>

#include <cmath>
#include <vector>

#include "adnoise/fluctuator.hpp"
#include "adnoise/units.hpp"
#include "support/checks.hpp"

using namespace adnoise;
namespace C = units::constants;
using testsupport::close_rel;

namespace {

const double kNu10Au = 2.0 * M_PI * 4.5e12 * C::atomic_time_s;  // a.u. angular
const double kMass100 = 100.0 * C::amu_me;

struct Surrogate {
  PotentialModel model;
  BoundStateSet states;
  DipoleCurve dipole;
  PhononModel phonons;
};

// Harmonic surrogate of the clean-surface adsorbate against Debye gold.
Surrogate make_harmonic_surrogate(double nu10_au, int n_points_tol = 0) {
  const double z0 = 1.59e-10 / C::bohr_m;
  PotentialModel m = PotentialModel::harmonic(0.068, z0, nu10_au, kMass100);
  Grid1D grid = Grid1D::default_for(m, kMass100);
  SolveOptions opts;
  opts.n_max = 6;
  if (n_points_tol > 0) {
    grid.n_points = n_points_tol;
    opts.refine_rel_tol = 1e-9;
  }
  BoundStateSet states = solve_bound_states(m, kMass100, grid, opts);
  DipoleCurve dip = DipoleCurve::power_law(0.4, z0);
  PhononModel ph = PhononModel::debye(HostMaterial::gold());
  return Surrogate{std::move(m), std::move(states), std::move(dip), std::move(ph)};
}

Surrogate make_morse_system(double temperature_unused = 0.0) {
  (void)temperature_unused;
  const double z0 = 1.59e-10 / C::bohr_m;
  PotentialModel m = morse_from_observables(0.068, z0, kNu10Au, kMass100);
  Grid1D grid = Grid1D::default_for(m, kMass100);
  BoundStateSet states = solve_bound_states(m, kMass100, grid, 6);
  DipoleCurve dip = DipoleCurve::power_law(0.4, z0);
  PhononModel ph = PhononModel::debye(HostMaterial::gold());
  return Surrogate{std::move(m), std::move(states), std::move(dip), std::move(ph)};
}

}  // namespace

TEST_CASE("T = 0: upward rates vanish exactly, emission survives") {
  const Surrogate s = make_harmonic_surrogate(kNu10Au);
  const FluctuatorSystem sys =
      transition_rates(s.states, s.model, s.dipole, s.phonons, 0.0, 4);
  CHECK(sys.rates[1][0] > 0.0);
  for (int n = 0; n < sys.n_levels; ++n)
    for (int m = n + 1; m < sys.n_levels; ++m) CHECK(sys.rates[n][m] == 0.0);
  CHECK(sys.stationary[0] == 1.0);
}

TEST_CASE("detailed balance at 10, 50, 150, 300 K to 1e-10") {
  const Surrogate s = make_morse_system();
  for (double T : {10.0, 50.0, 150.0, 300.0}) {
    const FluctuatorSystem sys =
        transition_rates(s.states, s.model, s.dipole, s.phonons, T, 4);
    const double kT_au = T / C::hartree_per_kB_K;
    for (int n = 0; n < sys.n_levels; ++n) {
      for (int m = 0; m < n; ++m) {
        if (sys.rates[m][n] <= 0.0) continue;  // frozen-out or outside PDOS
        const double nu = sys.level_energies[n] - sys.level_energies[m];
        const double ratio = sys.rates[n][m] / sys.rates[m][n];
        CHECK(close_rel(ratio, std::exp(nu / kT_au), 1e-10));
      }
    }
  }
}

TEST_CASE("clean-surface surrogate rate lands on the quoted 2.2 THz scale") {
  const Surrogate s = make_harmonic_surrogate(kNu10Au);
  const FluctuatorSystem sys =
      transition_rates(s.states, s.model, s.dipole, s.phonons, 0.0, 4);
  const double gamma_thz = sys.rates[1][0] / C::atomic_time_s / (2.0 * M_PI) / 1e12;
  CHECK(close_rel(gamma_thz, 2.2, 0.20));     // quoted value
  CHECK(close_rel(gamma_thz, 2.1253, 0.01));  // closed-form pin
}

TEST_CASE("Debye identity: pipeline reproduces nu10^4 m/(4 pi v^3 rho) to 1e-6") {
  const Surrogate s = make_harmonic_surrogate(kNu10Au, 8192);
  const FluctuatorSystem sys =
      transition_rates(s.states, s.model, s.dipole, s.phonons, 0.0, 2);
  const HostMaterial au = HostMaterial::gold();
  const double v = au.sound_speed_au();
  const double closed = std::pow(kNu10Au, 4) * kMass100 /
                        (4.0 * M_PI * v * v * v * au.density_au());
  CHECK(close_rel(sys.rates[1][0], closed, 1e-6));
}

TEST_CASE("phonon-silent system is a typed error") {
  const Surrogate s = make_harmonic_surrogate(kNu10Au);
  // support ends far below every level spacing
  std::vector<double> w{0.0, kNu10Au * 0.01, kNu10Au * 0.02};
  std::vector<double> g{0.0, 1.0, 0.0};
  const PhononModel silent = PhononModel::tabulated(HostMaterial::gold(), w, g);
  CHECK_THROWS_AS(transition_rates(s.states, s.model, s.dipole, silent, 50.0, 4),
                  PhononSilentError);
}

TEST_CASE("stationary distribution: point mass, Boltzmann pair, 4-level Morse") {
  SUBCASE("T = 0 point mass") {
    const Surrogate s = make_harmonic_surrogate(kNu10Au);
    const FluctuatorSystem sys =
        transition_rates(s.states, s.model, s.dipole, s.phonons, 0.0, 3);
    const auto p = stationary_distribution(sys);
    CHECK(p[0] == 1.0);
    CHECK(p[1] == 0.0);
    CHECK(p[2] == 0.0);
  }

  SUBCASE("two levels at hbar nu / kT = 1") {
    const double nu = 1e-3;
    const double T = nu * C::hartree_per_kB_K;
    std::vector<std::vector<double>> rates{{0.0, std::exp(-1.0)}, {1.0, 0.0}};
    const FluctuatorSystem sys =
        FluctuatorSystem::from_rates({0.0, nu}, {0.0, 1.0}, rates, T);
    CHECK(sys.stationary[1] / sys.stationary[0] ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  }

  SUBCASE("4-level Morse system matches Boltzmann to 1e-8") {
    const Surrogate s = make_morse_system();
    const FluctuatorSystem sys =
        transition_rates(s.states, s.model, s.dipole, s.phonons, 150.0, 4);
    const double kT_au = 150.0 / C::hartree_per_kB_K;
    double z = 0.0;
    std::vector<double> boltz(4);
    for (int n = 0; n < 4; ++n) {
      boltz[n] = std::exp(-(sys.level_energies[n] - sys.level_energies[0]) / kT_au);
      z += boltz[n];
    }
    for (int n = 0; n < 4; ++n) {
      CHECK(std::abs(sys.stationary[n] - boltz[n] / z) < 1e-8);
    }
    double sum = 0.0;
    for (double p : sys.stationary) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-12);
  }
}

TEST_CASE("spectrum: sum rule, weights positive, even and monotone") {
  const Surrogate s = make_morse_system();
  const FluctuatorSystem sys =
      transition_rates(s.states, s.model, s.dipole, s.phonons, 150.0, 5);
  const SpectralDecomposition dec = dipole_spectrum_decomposition(sys);

  for (const auto& m : dec.modes) {
    CHECK(m.weight >= 0.0);
    CHECK(m.decay > 0.0);
  }
  // (1/2pi) integral S dw = sum of weights = Var(mu), analytically per mode
  CHECK(close_rel(dec.sum_of_weights(), dec.variance, 1e-8));

  // non-increasing on omega >= 0, and even by construction (omega^2 only)
  const double w_scale = sys.max_rate();
  double prev = dec.eval(0.0);
  for (int i = 1; i <= 200; ++i) {
    const double w = w_scale * 10.0 * i / 200.0;
    const double cur = dec.eval(w);
    CHECK(cur <= prev * (1.0 + 1e-14));
    CHECK(dec.eval(-w) == cur);
    prev = cur;
  }
}

TEST_CASE("two-level scaled level at the quoted 50 K operating point") {
  // nu10/2pi = 4.5 THz, Gamma0/2pi = 2.2 THz, kT = 0.20 hbar nu10; in units of
  // mu0^2/Gamma0 the zero-frequency level is 2 exp(-5).
  const double nu10 = 2.0 * M_PI * 4.5e12 * C::atomic_time_s;
  const double gamma0 = 2.0 * M_PI * 2.2e12 * C::atomic_time_s;
  const double T = 0.20 * nu10 * C::hartree_per_kB_K;
  const double mu0 = 0.4;
  const double level = two_level_spectrum(mu0, gamma0, nu10, T, 0.0) * gamma0 /
                       (mu0 * mu0);
  CHECK(level == doctest::Approx(2.0 * std::exp(-5.0)).epsilon(1e-12));
}

TEST_CASE("two-level spectrum: Lorentzian landmarks") {
  const double dmu = 0.3, gamma0 = 2e-4, nu10 = 1e-3;
  const double T = 0.25 * nu10 * C::hartree_per_kB_K;  // kT = nu10/4

  const double s0 = two_level_spectrum(dmu, gamma0, nu10, T, 0.0);
  CHECK(s0 == doctest::Approx(dmu * dmu * 2.0 / gamma0 * std::exp(-4.0)).epsilon(1e-12));
  const double shalf = two_level_spectrum(dmu, gamma0, nu10, T, gamma0);
  CHECK(shalf == doctest::Approx(0.5 * s0).epsilon(1e-12));
  CHECK(two_level_spectrum(dmu, gamma0, nu10, 0.0, 0.0) == 0.0);
  // S(10 G)/S(0) = 1/101
  const double s10 = two_level_spectrum(dmu, gamma0, nu10, T, 10.0 * gamma0);
  CHECK(s10 / s0 == doctest::Approx(1.0 / 101.0).epsilon(1e-12));
}

TEST_CASE("low-T limit: analytic two-level formula within 5% of the master equation") {
  // Two-level system built directly from golden-rule-style rates.
  const double nu10 = 1e-3;
  const double gamma0 = 2.3e-4;
  const double dmu = 0.7;
  for (double ratio : {0.05, 0.10, 0.15, 0.20, 0.225}) {
    const double T = ratio * nu10 * C::hartree_per_kB_K;
    const double kT_au = nu10 * ratio;
    const double occ = 1.0 / std::expm1(nu10 / kT_au);
    std::vector<std::vector<double>> rates{{0.0, gamma0 * occ},
                                           {gamma0 * (occ + 1.0), 0.0}};
    const FluctuatorSystem sys =
        FluctuatorSystem::from_rates({0.0, nu10}, {0.1, 0.1 + dmu}, rates, T);
    const SpectralDecomposition dec = dipole_spectrum_decomposition(sys);
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double w = gamma0 * 10.0 * i / 400.0;
      const double exact = dec.eval(w);
      const double approx = two_level_spectrum(dmu, gamma0, nu10, T, w);
      worst = std::max(worst, testsupport::sym_rel_err(exact, approx));
    }
    CHECK(worst <= 0.05);
  }
}

TEST_CASE("the exact two-level decomposition is the telegraph process") {
  const double nu10 = 1e-3, gamma0 = 2.3e-4, T = 80.0;
  const double kT_au = T / C::hartree_per_kB_K;
  const double occ = 1.0 / std::expm1(nu10 / kT_au);
  std::vector<std::vector<double>> rates{{0.0, gamma0 * occ},
                                         {gamma0 * (occ + 1.0), 0.0}};
  const FluctuatorSystem sys =
      FluctuatorSystem::from_rates({0.0, nu10}, {0.0, 1.0}, rates, T);
  const SpectralDecomposition dec = dipole_spectrum_decomposition(sys);
  REQUIRE(dec.modes.size() == 1);
  const double gtot = gamma0 * (2.0 * occ + 1.0);
  CHECK(close_rel(dec.modes[0].decay, gtot, 1e-12));
  const double p1 = occ / (2.0 * occ + 1.0), p0 = 1.0 - p1;
  CHECK(close_rel(dec.modes[0].weight, p0 * p1, 1e-12));
}

TEST_CASE("zero temperature spectrum is identically zero") {
  const Surrogate s = make_harmonic_surrogate(kNu10Au);
  const FluctuatorSystem sys =
      transition_rates(s.states, s.model, s.dipole, s.phonons, 0.0, 3);
  std::vector<double> grid{0.0, 1e-5, 1e-4};
  const SpectrumResult res = dipole_spectrum(sys, grid);
  for (double v : res.values) CHECK(v == 0.0);
  CHECK(res.decomposition.modes.empty());
}

TEST_CASE("half-width fit is exact for a single Lorentzian") {
  SpectralDecomposition dec;
  dec.modes.push_back({1.7, 3.3e-4});
  std::vector<double> w(200), s(200);
  for (int i = 0; i < 200; ++i) {
    w[i] = 3.3e-3 * i / 199.0;
    s[i] = dec.eval(w[i]);
  }
  CHECK(close_rel(half_width_at_half_max(w, s), 3.3e-4, 1e-10));
}

TEST_CASE("from_rates rejects malformed systems") {
  CHECK_THROWS_AS(FluctuatorSystem::from_rates({0.0}, {0.0}, {{0.0}}, 10.0),
                  InvalidArgument);
  std::vector<std::vector<double>> neg{{0.0, -1.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(FluctuatorSystem::from_rates({0.0, 1.0}, {0.0, 1.0}, neg, 10.0),
                  InvalidArgument);
  std::vector<std::vector<double>> ragged{{0.0, 1.0}, {1.0}};
  CHECK_THROWS_AS(FluctuatorSystem::from_rates({0.0, 1.0}, {0.0, 1.0}, ragged, 10.0),
                  InvalidArgument);
}

TEST_CASE("dipole spectrum rejects negative grid points") {
  const Surrogate s = make_harmonic_surrogate(kNu10Au);
  const FluctuatorSystem sys =
      transition_rates(s.states, s.model, s.dipole, s.phonons, 50.0, 3);
  std::vector<double> bad{0.0, -1.0};
  CHECK_THROWS_AS(dipole_spectrum(sys, bad), InvalidArgument);
}
