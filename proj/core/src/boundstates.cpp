#include "adnoise/boundstates.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "adnoise/units.hpp"

namespace adnoise {

namespace {

// Number of eigenvalues of the symmetric tridiagonal (d, e) strictly below x,
// by the LDL^T Sturm count with the usual underflow guard.
int sturm_count(const std::vector<double>& d, const std::vector<double>& e, double x) {
  const double tiny = 1e-300;
  int count = 0;
  double q = d[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (q == 0.0) q = tiny;
    q = d[i] - x - e[i - 1] * e[i - 1] / q;
    if (q < 0.0) ++count;
  }
  return count;
}

// k-th (0-based) eigenvalue by bisection on the Sturm count.
double bisect_eigenvalue(const std::vector<double>& d, const std::vector<double>& e,
                         int k, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (std::abs(lo) + std::abs(hi)) + 1e-300;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(d, e, mid) > k)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Solves (T - shift I) y = r in place; partial-pivoting LU specialized to
// tridiagonal, tolerant of the near-singular shifts inverse iteration uses.
void shifted_tridiag_solve(const std::vector<double>& d, const std::vector<double>& e,
                           double shift, std::vector<double>& r) {
  const std::size_t n = d.size();
  std::vector<double> a(n), b(n - 1), c(n >= 2 ? n - 2 : 0, 0.0);
  for (std::size_t i = 0; i < n; ++i) a[i] = d[i] - shift;
  for (std::size_t i = 0; i + 1 < n; ++i) b[i] = e[i];
  std::vector<double> sub(e);  // subdiagonal, modified by pivoting

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(sub[i]) > std::abs(a[i])) {
      // swap rows i, i+1
      std::swap(a[i], sub[i]);
      std::swap(b[i], a[i + 1]);
      if (i + 2 < n) std::swap(c[i], b[i + 1]);
      std::swap(r[i], r[i + 1]);
    }
    double piv = a[i];
    if (piv == 0.0) piv = 1e-300;
    const double m = sub[i] / piv;
    a[i + 1] -= m * b[i];
    if (i + 2 < n) b[i + 1] -= m * c[i];
    r[i + 1] -= m * r[i];
  }
  // back substitution
  double piv = a[n - 1];
  if (piv == 0.0) piv = 1e-300;
  r[n - 1] /= piv;
  if (n >= 2) {
    piv = a[n - 2];
    if (piv == 0.0) piv = 1e-300;
    r[n - 2] = (r[n - 2] - b[n - 2] * r[n - 1]) / piv;
  }
  for (std::size_t i = n - 2; i-- > 0;) {
    piv = a[i];
    if (piv == 0.0) piv = 1e-300;
    double rhs = r[i] - b[i] * r[i + 1];
    if (i + 2 < n) rhs -= c[i] * r[i + 2];
    r[i] = rhs / piv;
  }
}

void normalize_with_weight(std::vector<double>& v, double h) {
  double s = 0.0;
  for (double x : v) s += x * x;
  s = std::sqrt(s * h);
  if (s == 0.0) throw NumericalError("inverse iteration produced a zero vector");
  for (double& x : v) x /= s;
}

// Eigenvector by inverse iteration at the bisected eigenvalue; deterministic
// start vector, orthogonalization against already-found states.
std::vector<double> inverse_iteration(const std::vector<double>& d,
                                      const std::vector<double>& e, double lambda,
                                      const std::vector<std::vector<double>>& found,
                                      double h) {
  const std::size_t n = d.size();
  std::vector<double> v(n);
  // deterministic pseudo-random start (LCG), independent of library rand
  std::uint64_t s = 0x9e3779b97f4a7c15ull;
  for (std::size_t i = 0; i < n; ++i) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    v[i] = (double)(s >> 11) * 0x1.0p-53 - 0.5;
  }
  const double shift = lambda * (1.0 + 1e-14) + 1e-300;
  for (int iter = 0; iter < 6; ++iter) {
    shifted_tridiag_solve(d, e, shift, v);
    for (const auto& f : found) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += v[i] * f[i];
      dot *= h;
      for (std::size_t i = 0; i < n; ++i) v[i] -= dot * f[i];
    }
    normalize_with_weight(v, h);
  }
  // Sign convention: first lobe positive.
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(v[i]) > 1e-3 * vmax) {
      if (v[i] < 0.0)
        for (double& x : v) x = -x;
      break;
    }
  }
  return v;
}

struct TridiagSolveResult {
  std::vector<double> energies;
  std::vector<std::vector<double>> vectors;
};

// Lowest `want` eigenpairs of the FD Hamiltonian on `grid`, keeping E < 0.
TridiagSolveResult solve_on_grid(const PotentialModel& model, double mass,
                                 const Grid1D& grid, int want) {
  const int n = grid.n_points - 2;  // interior points (Dirichlet)
  const double h = grid.spacing();
  const double kin = 1.0 / (2.0 * mass * h * h);
  std::vector<double> d(n), e(n - 1, -kin);
  for (int i = 0; i < n; ++i) d[i] = 2.0 * kin + model.eval(grid.z(i + 1));

  // Gershgorin bounds
  double lo = d[0], hi = d[0];
  for (int i = 0; i < n; ++i) {
    double r = (i > 0 ? kin : 0.0) + (i + 1 < n ? kin : 0.0);
    lo = std::min(lo, d[i] - r);
    hi = std::max(hi, d[i] + r);
  }

  TridiagSolveResult out;
  const int n_below_zero = sturm_count(d, e, 0.0);
  const int take = std::min(want, n_below_zero);
  double prev = lo;
  for (int k = 0; k < take; ++k) {
    const double lambda = bisect_eigenvalue(d, e, k, prev, hi);
    out.energies.push_back(lambda);
    prev = lambda;  // eigenvalues ascending; reuse as lower bound
  }
  for (int k = 0; k < take; ++k) {
    auto v = inverse_iteration(d, e, out.energies[k], out.vectors, h);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

int node_count(const std::vector<double>& v) {
  int nodes = 0;
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  const double floor = 1e-7 * vmax;
  double last = 0.0;
  for (double x : v) {
    if (std::abs(x) < floor) continue;
    if (last != 0.0 && x * last < 0.0) ++nodes;
    last = x;
  }
  return nodes;
}

}  // namespace

// ---------------------------------------------------------------------------
// Grid1D

Grid1D Grid1D::default_for(const PotentialModel& model, double mass) {
  Grid1D g;
  g.n_points = 2048;
  const double z0 = model.minimum_position();
  switch (model.kind()) {
    case PotentialModel::Kind::Morse: {
      const double a = model.morse_width();
      g.z_min = std::max(z0 - 5.0 / a, 1e-3);
      g.z_max = z0 + 20.0 / a;
      break;
    }
    case PotentialModel::Kind::Harmonic: {
      // curvature k = m_ref w^2; state width for the solve mass
      const double k = model.harmonic_mass() * model.harmonic_omega() *
                       model.harmonic_omega();
      const double omega_eff = std::sqrt(k / mass);
      const double sigma = 1.0 / std::sqrt(mass * omega_eff);
      g.z_min = std::max(z0 - 12.0 * sigma, 1e-3);
      g.z_max = z0 + 12.0 * sigma;
      break;
    }
    case PotentialModel::Kind::Tabulated: {
      // left edge: where U crosses +2 U0 coming down the wall
      const double u_target = 2.0 * model.depth();
      double zl = model.domain_min();
      const int probes = 4096;
      for (int i = 0; i <= probes; ++i) {
        const double z = model.domain_min() +
                         (z0 - model.domain_min()) * double(i) / double(probes);
        if (model.eval(z) <= u_target) { zl = z; break; }
      }
      g.z_min = zl;
      g.z_max = model.domain_max();
      if (!std::isfinite(g.z_max)) g.z_max = model.tail()->z_match * 4.0;
      break;
    }
  }
  return g;
}

void Grid1D::validate(const PotentialModel& model) const {
  if (n_points < 128) throw InvalidArgument("grid: n_points must be >= 128");
  if (!(z_min < model.minimum_position() && model.minimum_position() < z_max))
    throw InvalidArgument("grid: must bracket the potential minimum");
  // A harmonic well grows on both sides; its Dirichlet box is the confinement
  // and carries no wall/decay requirements beyond bracketing the minimum.
  if (model.kind() == PotentialModel::Kind::Harmonic) return;
  if (!(model.eval(z_min) > 0.0))
    throw InvalidArgument("grid: z_min must sit inside the repulsive wall (U > 0)");
  if (!(std::abs(model.eval(z_max)) < 1e-3 * model.depth()))
    throw InvalidArgument("grid: |U(z_max)| must be < 1e-3 * U0");
}

// ---------------------------------------------------------------------------
// BoundStateSet

BoundStateSet::BoundStateSet(Grid1D grid, double mass, std::vector<double> energies,
                             std::vector<double> psi_flat)
    : grid_(grid), mass_(mass), energies_(std::move(energies)), psi_(std::move(psi_flat)) {}

std::span<const double> BoundStateSet::wavefunction(int n) const {
  if (n < 0 || n >= size()) throw InvalidArgument("wavefunction index out of range");
  const std::size_t np = static_cast<std::size_t>(grid_.n_points);
  return std::span<const double>(psi_.data() + n * np, np);
}

// ---------------------------------------------------------------------------
// Solver

BoundStateSet solve_bound_states(const PotentialModel& model, double mass,
                                 Grid1D grid, int n_max) {
  SolveOptions opts;
  opts.n_max = n_max;
  return solve_bound_states(model, mass, grid, opts);
}

BoundStateSet solve_bound_states(const PotentialModel& model, double mass,
                                 Grid1D grid, const SolveOptions& opts) {
  if (opts.n_max < 2) throw InvalidArgument("solve_bound_states: n_max must be >= 2");
  if (!(mass > 0.0)) throw InvalidArgument("solve_bound_states: mass must be positive");
  grid.validate(model);

  // Solve, then halve the spacing until E0 and E1 are grid-converged.
  Grid1D g = grid;
  TridiagSolveResult cur = solve_on_grid(model, mass, g, opts.n_max);
  while (static_cast<int>(cur.energies.size()) >= 2) {
    Grid1D finer = g;
    finer.n_points = 2 * g.n_points - 1;
    if (finer.n_points > opts.max_points) break;
    TridiagSolveResult next = solve_on_grid(model, mass, finer, opts.n_max);
    if (next.energies.size() >= 2) {
      const double d0 = std::abs(next.energies[0] - cur.energies[0]) /
                        std::abs(next.energies[0]);
      const double d1 = std::abs(next.energies[1] - cur.energies[1]) /
                        std::abs(next.energies[1]);
      g = finer;
      cur = std::move(next);
      if (d0 < opts.refine_rel_tol && d1 < opts.refine_rel_tol) break;
    } else {
      g = finer;
      cur = std::move(next);
      break;
    }
  }

  if (cur.energies.size() < 2)
    throw InsufficientBoundStates(
        "found " + std::to_string(cur.energies.size()) +
        " bound state(s); the fluctuator needs at least 2");

  // Interior solution -> full grid with Dirichlet zeros at the ends.
  const std::size_t np = static_cast<std::size_t>(g.n_points);
  std::vector<double> psi_flat(cur.energies.size() * np, 0.0);
  for (std::size_t k = 0; k < cur.vectors.size(); ++k) {
    std::copy(cur.vectors[k].begin(), cur.vectors[k].end(),
              psi_flat.begin() + k * np + 1);
  }

  BoundStateSet set(g, mass, cur.energies, std::move(psi_flat));

  // Cheap structural checks; failures here mean the eigensolve went wrong.
  for (int n = 0; n < set.size(); ++n) {
    if (n > 0 && !(set.energy(n) > set.energy(n - 1)))
      throw NumericalError("eigenvalues not strictly increasing");
    const int nodes = node_count(cur.vectors[n]);
    if (nodes != n)
      throw NumericalError("state " + std::to_string(n) + " has " +
                           std::to_string(nodes) + " nodes");
  }
  return set;
}

double matrix_element_uprime(const BoundStateSet& states, const PotentialModel& model,
                             int n, int m) {
  if (n < 0 || m < 0 || n >= states.size() || m >= states.size())
    throw InvalidArgument("matrix_element_uprime: index out of range");
  const auto pn = states.wavefunction(n);
  const auto pm = states.wavefunction(m);
  const double h = states.grid().spacing();
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < pn.size(); ++i)
    acc += (pn[i] * pm[i]) * model.deriv(states.z(static_cast<int>(i)));
  return acc * h;
}

double dipole_expectation(const BoundStateSet& states, const DipoleCurve& curve, int n) {
  if (n < 0 || n >= states.size())
    throw InvalidArgument("dipole_expectation: index out of range");
  const auto pn = states.wavefunction(n);
  const double h = states.grid().spacing();
  double acc = 0.0;
  for (std::size_t i = 1; i + 1 < pn.size(); ++i)
    acc += pn[i] * pn[i] * curve.eval(states.z(static_cast<int>(i)));
  return acc * h;
}

void dump_wavefunctions_csv(const BoundStateSet& states, std::ostream& os) {
  os << "z_angstrom";
  for (int n = 0; n < states.size(); ++n) os << ",psi_" << n;
  os << "\n";
  char buf[32];
  const double bohr_A = units::constants::bohr_m * 1e10;
  for (int i = 0; i < states.grid().n_points; ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", states.z(i) * bohr_A);
    os << buf;
    for (int n = 0; n < states.size(); ++n) {
      std::snprintf(buf, sizeof buf, "%.17g", states.wavefunction(n)[i]);
      os << ',' << buf;
    }
    os << "\n";
  }
}

}  // namespace adnoise
