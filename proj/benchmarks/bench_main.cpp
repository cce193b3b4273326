#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "adnoise/boundstates.hpp"
#include "adnoise/fluctuator.hpp"
#include "adnoise/units.hpp"

using namespace adnoise;
namespace C = units::constants;

namespace {

PotentialModel surface_well() {
  const double z0 = 1.59e-10 / C::bohr_m;
  const double nu10 = 2.0 * M_PI * 4.5e12 * C::atomic_time_s;
  return morse_from_observables(0.068, z0, nu10, 100.0 * C::amu_me);
}

FluctuatorSystem surface_system(double t_kelvin) {
  static const PotentialModel m = surface_well();
  const double mass = 100.0 * C::amu_me;
  static const BoundStateSet states =
      solve_bound_states(m, mass, Grid1D::default_for(m, mass), 8);
  static const DipoleCurve dip = DipoleCurve::power_law(0.4, m.minimum_position());
  static const PhononModel ph = PhononModel::debye(HostMaterial::gold());
  return transition_rates(states, m, dip, ph, t_kelvin, states.size());
}

}  // namespace

static void BM_solve_bound_states(benchmark::State& state) {
  const PotentialModel m = surface_well();
  const double mass = 100.0 * C::amu_me;
  Grid1D grid = Grid1D::default_for(m, mass);
  grid.n_points = static_cast<int>(state.range(0));
  SolveOptions opts;
  opts.n_max = 8;
  opts.refine_rel_tol = 0.0;  // fixed grid, no refinement
  opts.max_points = grid.n_points;
  for (auto _ : state) {
    const BoundStateSet s = solve_bound_states(m, mass, grid, opts);
    benchmark::DoNotOptimize(s.energy(0));
  }
}
BENCHMARK(BM_solve_bound_states)->RangeMultiplier(2)->Range(2048, 16384);

static void BM_transition_rates(benchmark::State& state) {
  const PotentialModel m = surface_well();
  const double mass = 100.0 * C::amu_me;
  const BoundStateSet states =
      solve_bound_states(m, mass, Grid1D::default_for(m, mass), 8);
  const DipoleCurve dip = DipoleCurve::power_law(0.4, m.minimum_position());
  const PhononModel ph = PhononModel::debye(HostMaterial::gold());
  for (auto _ : state) {
    const FluctuatorSystem sys = transition_rates(states, m, dip, ph, 150.0, 8);
    benchmark::DoNotOptimize(sys.rates[1][0]);
  }
}
BENCHMARK(BM_transition_rates);

static void BM_dipole_spectrum(benchmark::State& state) {
  const FluctuatorSystem sys = surface_system(150.0);
  std::vector<double> grid(static_cast<std::size_t>(state.range(0)));
  const double wmax = 10.0 * sys.max_rate();
  for (std::size_t i = 0; i < grid.size(); ++i)
    grid[i] = wmax * double(i) / double(grid.size() - 1);
  for (auto _ : state) {
    const SpectrumResult res = dipole_spectrum(sys, grid);
    benchmark::DoNotOptimize(res.values.front());
  }
}
BENCHMARK(BM_dipole_spectrum)->Arg(256)->Arg(1024);

static void BM_gillespie(benchmark::State& state) {
  const FluctuatorSystem sys = surface_system(150.0);
  const double t_total = state.range(0) / sys.max_rate();
  std::uint64_t seed = 1;
  for (auto _ : state) {
    const Trajectory t = gillespie_sample(sys, t_total, seed++);
    benchmark::DoNotOptimize(t.times.size());
  }
}
BENCHMARK(BM_gillespie)->Arg(1000)->Arg(10000);

BENCHMARK_MAIN();
