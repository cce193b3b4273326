#pragma once

#include <ostream>
#include <span>
#include <vector>

#include "adnoise/potentials.hpp"

// One-dimensional bound states of an adatom of mass m in U(z):
//   [-1/(2m) d2/dz2 + U(z)] psi = E psi      (atomic units, hbar = 1)
// discretized with second-order central differences and Dirichlet boundaries,
// which gives a symmetric tridiagonal eigenproblem. Only states with E < 0
// under the U(inf) = 0 convention are kept.

namespace adnoise {

struct Grid1D {
  double z_min = 0.0;  // bohr
  double z_max = 0.0;
  int n_points = 0;

  double spacing() const { return (z_max - z_min) / (n_points - 1); }
  double z(int i) const { return z_min + spacing() * i; }

  // z_min = z0 - 5/a (clipped positive), z_max = z0 + 20/a, 2048 points for
  // Morse; +-12 sigma for harmonic; the sampled domain for tabulated data
  // with the left edge pulled in to where U crosses +2 U0.
  static Grid1D default_for(const PotentialModel& model, double mass);

  // Invariants: n_points >= 128, z_min < z0 < z_max, U(z_min) > 0, and for
  // decaying wells |U(z_max)| < 1e-3 U0. Harmonic wells grow on both sides,
  // so there the right edge must also sit high up the wall.
  void validate(const PotentialModel& model) const;
};

struct SolveOptions {
  int n_max = 8;                  // levels requested (>= 2)
  double refine_rel_tol = 1e-6;   // grid-doubling convergence on E0, E1
  int max_points = (1 << 17) + 1; // refinement cap
};

class BoundStateSet {
 public:
  const Grid1D& grid() const { return grid_; }
  int size() const { return static_cast<int>(energies_.size()); }
  double energy(int n) const { return energies_.at(n); }
  const std::vector<double>& energies() const { return energies_; }
  std::span<const double> wavefunction(int n) const;
  double adatom_mass() const { return mass_; }
  double z(int i) const { return grid_.z(i); }

  BoundStateSet(Grid1D grid, double mass, std::vector<double> energies,
                std::vector<double> psi_flat);

 private:
  Grid1D grid_;
  double mass_ = 0.0;
  std::vector<double> energies_;
  std::vector<double> psi_;  // row n = psi_n on the grid, L2-normalized with weight h
};

BoundStateSet solve_bound_states(const PotentialModel& model, double mass,
                                 Grid1D grid, int n_max);
BoundStateSet solve_bound_states(const PotentialModel& model, double mass,
                                 Grid1D grid, const SolveOptions& opts);

// <n| U'(z) |m> by trapezoid quadrature on the solver grid (hartree/bohr).
double matrix_element_uprime(const BoundStateSet& states,
                             const PotentialModel& model, int n, int m);

// mu_n = <n| mu(z) |n> (e*bohr).
double dipole_expectation(const BoundStateSet& states, const DipoleCurve& curve,
                          int n);

// CSV dump "z_angstrom,psi_0,..." (psi in bohr^-1/2).
void dump_wavefunctions_csv(const BoundStateSet& states, std::ostream& os);

}  // namespace adnoise
