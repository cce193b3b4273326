#include "adnoise/fluctuator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "adnoise/units.hpp"

namespace adnoise {

using std::numbers::pi;
namespace C = units::constants;

namespace {

// Cyclic Jacobi eigensolver for small dense symmetric matrices. Returns
// eigenvalues ascending with matching unit eigenvectors in the columns of V.
void jacobi_eigen(std::vector<std::vector<double>> a, std::vector<double>& eigval,
                  std::vector<std::vector<double>>& eigvec) {
  const std::size_t n = a.size();
  eigvec.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) eigvec[i][i] = 1.0;

  auto offdiag = [&]() {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a[i][j] * a[i][j];
    return s;
  };
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) norm += a[i][j] * a[i][j];

  for (int sweep = 0; sweep < 100 && offdiag() > 1e-30 * (norm + 1e-300); ++sweep) {
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = eigvec[k][p], vkq = eigvec[k][q];
          eigvec[k][p] = c * vkp - s * vkq;
          eigvec[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  eigval.resize(n);
  for (std::size_t i = 0; i < n; ++i) eigval[i] = a[i][i];
  // sort ascending, carrying columns along
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return eigval[i] < eigval[j]; });
  std::vector<double> ev(n);
  std::vector<std::vector<double>> vv(n, std::vector<double>(n));
  for (std::size_t c2 = 0; c2 < n; ++c2) {
    ev[c2] = eigval[order[c2]];
    for (std::size_t r = 0; r < n; ++r) vv[r][c2] = eigvec[r][order[c2]];
  }
  eigval = std::move(ev);
  eigvec = std::move(vv);
}

// Gaussian elimination, partial pivoting; solves the n x n system in place.
std::vector<double> solve_dense(std::vector<std::vector<double>> m,
                                std::vector<double> rhs) {
  const std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (std::abs(m[piv][col]) < 1e-300)
      throw NumericalError("stationary solve: singular system (reducible rate matrix?)");
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = m[r][col] / m[col][col];
      for (std::size_t c2 = col; c2 < n; ++c2) m[r][c2] -= f * m[col][c2];
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double acc = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= m[i][j] * x[j];
    x[i] = acc / m[i][i];
  }
  return x;
}

double kT_au(double temperature_K) {
  return temperature_K / C::hartree_per_kB_K;
}

}  // namespace

// ---------------------------------------------------------------------------
// FluctuatorSystem

double FluctuatorSystem::total_exit_rate(int n) const {
  double s = 0.0;
  for (int m = 0; m < n_levels; ++m)
    if (m != n) s += rates[n][m];
  return s;
}

double FluctuatorSystem::max_rate() const {
  double mx = 0.0;
  for (int n = 0; n < n_levels; ++n) mx = std::max(mx, total_exit_rate(n));
  return mx;
}

FluctuatorSystem FluctuatorSystem::from_rates(std::vector<double> energies,
                                              std::vector<double> dipoles,
                                              std::vector<std::vector<double>> rates,
                                              double temperature_K) {
  FluctuatorSystem sys;
  sys.n_levels = static_cast<int>(energies.size());
  if (sys.n_levels < 2) throw InvalidArgument("fluctuator: need at least 2 levels");
  if (dipoles.size() != energies.size() || rates.size() != energies.size())
    throw InvalidArgument("fluctuator: level array sizes disagree");
  for (const auto& row : rates)
    if (row.size() != energies.size())
      throw InvalidArgument("fluctuator: rate matrix must be square");
  for (int n = 0; n < sys.n_levels; ++n)
    for (int m = 0; m < sys.n_levels; ++m)
      if (n != m && !(rates[n][m] >= 0.0))
        throw InvalidArgument("fluctuator: off-diagonal rates must be >= 0");
  if (temperature_K < 0.0) throw InvalidArgument("fluctuator: T must be >= 0");

  sys.level_energies = std::move(energies);
  sys.level_dipoles = std::move(dipoles);
  sys.rates = std::move(rates);
  sys.temperature_K = temperature_K;
  sys.stationary = stationary_distribution(sys);
  return sys;
}

// ---------------------------------------------------------------------------
// transition_rates

FluctuatorSystem transition_rates(const BoundStateSet& states,
                                  const PotentialModel& model,
                                  const DipoleCurve& dipole,
                                  const PhononModel& phonons,
                                  double temperature_K, int n_levels) {
  if (n_levels < 2) throw InvalidArgument("transition_rates: n_levels must be >= 2");
  if (states.size() < n_levels)
    throw InsufficientBoundStates("transition_rates: " + std::to_string(n_levels) +
                                  " levels requested, " + std::to_string(states.size()) +
                                  " bound states available");
  if (temperature_K < 0.0) throw InvalidArgument("transition_rates: T must be >= 0");

  const double M = phonons.host().atom_mass_au();
  std::vector<double> energies(n_levels), dipoles(n_levels);
  for (int n = 0; n < n_levels; ++n) {
    energies[n] = states.energy(n);
    dipoles[n] = dipole_expectation(states, dipole, n);
  }

  std::vector<std::vector<double>> rates(n_levels, std::vector<double>(n_levels, 0.0));
  bool any_phonon = false;
  for (int n = 1; n < n_levels; ++n) {
    for (int m = 0; m < n; ++m) {
      const double nu = energies[n] - energies[m];  // hbar = 1
      const double g = phonons.eval(nu);
      if (g <= 0.0) continue;
      any_phonon = true;
      const double me = matrix_element_uprime(states, model, n, m);
      const double prefactor = pi * g / (3.0 * M * nu) * me * me;
      const double occ = temperature_K > 0.0 ? bose_occupation(nu, temperature_K) : 0.0;
      rates[n][m] = prefactor * (occ + 1.0);  // emission
      rates[m][n] = prefactor * occ;          // absorption
    }
  }
  if (!any_phonon)
    throw PhononSilentError(
        "every level spacing lies outside the phonon density-of-states support");

  return FluctuatorSystem::from_rates(std::move(energies), std::move(dipoles),
                                      std::move(rates), temperature_K);
}

// ---------------------------------------------------------------------------
// stationary_distribution

std::vector<double> stationary_distribution(const FluctuatorSystem& sys) {
  const int n = sys.n_levels;

  // T = 0: no upward rates; the chain collapses to the ground state.
  bool any_up = false;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (sys.rates[a][b] > 0.0) any_up = true;
  if (!any_up) {
    std::vector<double> p(n, 0.0);
    p[0] = 1.0;
    return p;
  }

  // Generator L[m][n] = Gamma_{n->m} (n != m), columns summing to zero.
  // Replace the last row by the normalization sum p = 1.
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (int col = 0; col < n; ++col) {
    double exit = 0.0;
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      m[row][col] = sys.rates[col][row];
      exit += sys.rates[col][row];
    }
    m[col][col] = -exit;
  }
  for (int col = 0; col < n; ++col) m[n - 1][col] = 1.0;
  std::vector<double> rhs(n, 0.0);
  rhs[n - 1] = 1.0;

  std::vector<double> p = solve_dense(std::move(m), std::move(rhs));
  double sum = 0.0;
  for (double v : p) {
    if (!(v > -1e-12))
      throw NumericalError("stationary solve: negative occupation (reducible matrix?)");
    sum += v;
  }
  for (double& v : p) v = std::max(v, 0.0) / sum;
  return p;
}

// ---------------------------------------------------------------------------
// spectrum

double SpectralDecomposition::eval(double omega) const {
  double s = 0.0;
  for (const auto& m : modes)
    s += m.weight * 2.0 * m.decay / (m.decay * m.decay + omega * omega);
  return s;
}

double SpectralDecomposition::sum_of_weights() const {
  double s = 0.0;
  for (const auto& m : modes) s += m.weight;
  return s;
}

SpectralDecomposition dipole_spectrum_decomposition(const FluctuatorSystem& sys) {
  const int n = sys.n_levels;
  const auto& p = sys.stationary;

  SpectralDecomposition out;
  out.mean_dipole = 0.0;
  double second = 0.0;
  for (int i = 0; i < n; ++i) {
    out.mean_dipole += p[i] * sys.level_dipoles[i];
    second += p[i] * sys.level_dipoles[i] * sys.level_dipoles[i];
  }
  out.variance = second - out.mean_dipole * out.mean_dipole;

  // T = 0 point mass: the dipole never fluctuates; S is identically zero
  // (the low-T formula is exponentially small, not zero, at small T > 0).
  bool point_mass = true;
  for (int i = 1; i < n; ++i)
    if (p[i] > 0.0) point_mass = false;
  if (point_mass) return out;

  // A = P^{-1/2} L P^{1/2}; detailed balance makes A symmetric negative
  // semidefinite with the zero mode v0 = sqrt(p).
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) {
        a[i][i] = -sys.total_exit_rate(i);
      } else {
        a[i][j] = sys.rates[j][i] * std::sqrt(p[j] / p[i]);
      }
    }
  }
  // enforce exact symmetry against roundoff in the sqrt factors
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double sym = 0.5 * (a[i][j] + a[j][i]);
      a[i][j] = a[j][i] = sym;
    }

  std::vector<double> eigval;
  std::vector<std::vector<double>> eigvec;
  jacobi_eigen(a, eigval, eigvec);

  // zero mode = eigenvalue of smallest magnitude; must vanish numerically
  int zero_idx = 0;
  for (int k = 1; k < n; ++k)
    if (std::abs(eigval[k]) < std::abs(eigval[zero_idx])) zero_idx = k;
  const double mx = sys.max_rate();
  if (std::abs(eigval[zero_idx]) > 1e-10 * mx)
    throw NumericalError("spectrum: zero mode |" + std::to_string(eigval[zero_idx]) +
                         "| exceeds 1e-10 * max rate " + std::to_string(mx));

  for (int k = 0; k < n; ++k) {
    if (k == zero_idx) continue;
    const double lambda = -eigval[k];
    if (!(lambda > 0.0))
      throw NumericalError("spectrum: non-decaying mode with eigenvalue " +
                           std::to_string(eigval[k]));
    double proj = 0.0;
    for (int i = 0; i < n; ++i)
      proj += sys.level_dipoles[i] * std::sqrt(p[i]) * eigvec[i][k];
    const double w = proj * proj;
    if (w > 0.0) out.modes.push_back({w, lambda});
  }
  std::sort(out.modes.begin(), out.modes.end(),
            [](const SpectralMode& x, const SpectralMode& y) {
              return x.weight > y.weight;
            });
  return out;
}

SpectrumResult dipole_spectrum(const FluctuatorSystem& sys,
                               std::span<const double> omega_grid) {
  for (double w : omega_grid)
    if (!(w >= 0.0)) throw InvalidArgument("dipole_spectrum: omega grid must be >= 0");
  SpectrumResult res;
  res.decomposition = dipole_spectrum_decomposition(sys);
  res.values.reserve(omega_grid.size());
  for (double w : omega_grid) res.values.push_back(res.decomposition.eval(w));
  return res;
}

double two_level_spectrum(double delta_mu, double gamma0, double nu10,
                          double temperature_K, double omega) {
  if (!(gamma0 > 0.0) || !(nu10 > 0.0))
    throw InvalidArgument("two_level_spectrum: gamma0 and nu10 must be positive");
  if (temperature_K < 0.0) throw InvalidArgument("two_level_spectrum: T must be >= 0");
  if (temperature_K == 0.0) return 0.0;
  const double x = nu10 / kT_au(temperature_K);
  return delta_mu * delta_mu * 2.0 * gamma0 / (gamma0 * gamma0 + omega * omega) *
         std::exp(-x);
}

double half_width_at_half_max(std::span<const double> omega,
                              std::span<const double> values) {
  if (omega.size() != values.size() || omega.size() < 3)
    throw InvalidArgument("half_width: need matching grids with >= 3 points");
  if (omega[0] != 0.0)
    throw InvalidArgument("half_width: grid must start at omega = 0");
  const double s0 = values[0];
  if (!(s0 > 0.0)) throw InvalidArgument("half_width: S(0) must be positive");
  const double target = 2.0 / s0;  // in 1/S space
  for (std::size_t k = 1; k < omega.size(); ++k) {
    if (values[k] <= 0.5 * s0) {
      const double x0 = omega[k - 1] * omega[k - 1], x1 = omega[k] * omega[k];
      const double y0 = 1.0 / values[k - 1], y1 = 1.0 / values[k];
      const double x = x0 + (target - y0) * (x1 - x0) / (y1 - y0);
      return std::sqrt(x);
    }
  }
  throw InvalidArgument("half_width: grid does not reach S(0)/2");
}

// ---------------------------------------------------------------------------
// Gillespie

Trajectory gillespie_sample(const FluctuatorSystem& sys, double t_total,
                            std::uint64_t seed) {
  if (!(sys.temperature_K > 0.0))
    throw InvalidArgument("gillespie: T must be > 0 (irreducible chain)");
  if (!(t_total > 0.0)) throw InvalidArgument("gillespie: t_total must be positive");

  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() {
    // top 53 bits -> (0,1]; fully pinned, no library distribution involved
    return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
  };

  const int n = sys.n_levels;
  std::vector<double> exit(n);
  double min_exit = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    exit[i] = sys.total_exit_rate(i);
    if (exit[i] > 0.0) min_exit = std::min(min_exit, exit[i]);
  }

  Trajectory traj;
  traj.t_total = t_total;
  traj.too_short = !(t_total * min_exit >= 50.0);

  // stationary start
  int level = n - 1;
  {
    const double u = uniform();
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += sys.stationary[i];
      if (u <= acc) { level = i; break; }
    }
  }
  traj.times.push_back(0.0);
  traj.levels.push_back(level);

  double t = 0.0;
  while (true) {
    const double r = exit[level];
    if (!(r > 0.0))
      throw NumericalError("gillespie: absorbing level encountered at T > 0");
    t += -std::log(uniform()) / r;
    if (t >= t_total) break;
    const double u = uniform() * r;
    double acc = 0.0;
    int next = level;
    for (int m = 0; m < n; ++m) {
      if (m == level) continue;
      acc += sys.rates[level][m];
      if (u <= acc) { next = m; break; }
    }
    level = next;
    traj.times.push_back(t);
    traj.levels.push_back(level);
  }
  return traj;
}

}  // namespace adnoise
