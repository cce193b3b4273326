#include <doctest.h>

#include <cmath>
#include <vector>

#include "adnoise/fluctuator.hpp"
#include "adnoise/units.hpp"
#include "support/checks.hpp"
#include "support/periodogram.hpp"

using namespace adnoise;
namespace C = units::constants;

TEST_CASE("fixed seed reproduces the trajectory exactly") {
  const FluctuatorSystem sys = testsupport::three_level_fixture();
  const Trajectory a = gillespie_sample(sys, 500.0, 42);
  const Trajectory b = gillespie_sample(sys, 500.0, 42);
  REQUIRE(a.times.size() == b.times.size());
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    CHECK(a.times[i] == b.times[i]);  // bitwise
    CHECK(a.levels[i] == b.levels[i]);
  }
  const Trajectory c = gillespie_sample(sys, 500.0, 43);
  REQUIRE(c.times.size() >= 2);
  CHECK(a.times.at(1) != c.times.at(1));
}

TEST_CASE("two-level symmetric rates occupy both levels equally") {
  const double r = 1.0;
  std::vector<std::vector<double>> rates{{0.0, r}, {r, 0.0}};
  // equal energies: detailed balance ratio 1 at any T
  const FluctuatorSystem sys =
      FluctuatorSystem::from_rates({0.0, 0.0}, {0.0, 1.0}, rates, 300.0);
  const auto occ = testsupport::estimate_occupations(sys, 64, 400.0, 7);
  for (int i = 0; i < 2; ++i) {
    const double sigma = std::max(occ.std_error[i], 1e-6);
    CHECK(std::abs(occ.mean[i] - 0.5) <= 3.0 * sigma);
  }
}

TEST_CASE("empirical occupations of the 3-level system are Boltzmann within 3 sigma") {
  const FluctuatorSystem sys = testsupport::three_level_fixture();
  const auto occ = testsupport::estimate_occupations(sys, 96, 400.0, 11);
  for (int i = 0; i < sys.n_levels; ++i) {
    const double sigma = std::max(occ.std_error[i], 1e-6);
    CHECK(std::abs(occ.mean[i] - sys.stationary[i]) <= 3.0 * sigma);
  }
}

TEST_CASE("empirical occupations of the 4-level Morse system are Boltzmann in 3 sigma") {
  const double z0 = 1.59e-10 / C::bohr_m;
  const double nu10 = 2.0 * M_PI * 4.5e12 * C::atomic_time_s;
  const double mass = 100.0 * C::amu_me;
  const PotentialModel m = morse_from_observables(0.068, z0, nu10, mass);
  const BoundStateSet states =
      solve_bound_states(m, mass, Grid1D::default_for(m, mass), 4);
  const DipoleCurve dip = DipoleCurve::power_law(0.4, z0);
  const FluctuatorSystem sys = transition_rates(
      states, m, dip, PhononModel::debye(HostMaterial::gold()), 150.0, 4);

  // batch duration well past the slowest relaxation (the upward 0->1 rate)
  const double slow = sys.rates[0][1];
  const auto occ = testsupport::estimate_occupations(sys, 48, 400.0 / slow, 23);
  for (int i = 0; i < sys.n_levels; ++i) {
    const double sigma = std::max(occ.std_error[i], 1e-7);
    CHECK(std::abs(occ.mean[i] - sys.stationary[i]) <= 3.0 * sigma);
  }
}

TEST_CASE("trajectories start from the stationary law and respect t_total") {
  const FluctuatorSystem sys = testsupport::three_level_fixture();
  const Trajectory t = gillespie_sample(sys, 200.0, 5);
  CHECK(t.times.front() == 0.0);
  CHECK(t.times.back() < 200.0);
  CHECK(!t.too_short);
  for (int lvl : t.levels) {
    CHECK(lvl >= 0);
    CHECK(lvl < 3);
  }
}

TEST_CASE("too-short trajectories are flagged, not rejected") {
  const FluctuatorSystem sys = testsupport::three_level_fixture();
  const Trajectory t = gillespie_sample(sys, 1.0, 5);
  CHECK(t.too_short);
}

TEST_CASE("gillespie needs T > 0") {
  std::vector<std::vector<double>> rates{{0.0, 0.0}, {1.0, 0.0}};
  const FluctuatorSystem sys =
      FluctuatorSystem::from_rates({0.0, 1.0}, {0.0, 1.0}, rates, 0.0);
  CHECK_THROWS_AS(gillespie_sample(sys, 100.0, 1), InvalidArgument);
}

TEST_CASE("periodogram of the 3-level system matches the decomposition in 3 sigma") {
  const FluctuatorSystem sys = testsupport::three_level_fixture();
  const SpectralDecomposition dec = dipole_spectrum_decomposition(sys);

  std::vector<double> omegas;
  for (int i = 0; i < 16; ++i)
    omegas.push_back(0.05 * std::pow(10.0 / 0.05, i / 15.0));  // log grid

  const auto est = testsupport::estimate_spectrum(sys, omegas, 192, 400.0, 99);
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    const double analytic = dec.eval(omegas[i]);
    const double sigma = std::max(est.std_error[i], 1e-12);
    CHECK(std::abs(est.mean[i] - analytic) <= 3.0 * sigma);
  }
}
