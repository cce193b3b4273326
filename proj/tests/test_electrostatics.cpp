#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "adnoise/electrostatics.hpp"
#include "adnoise/units.hpp"
#include "support/checks.hpp"

using namespace adnoise;
namespace C = units::constants;
namespace fs = std::filesystem;
using testsupport::close_rel;

namespace {

PotentialGrid3D make_grid(int nx, int ny, int nz, double c_A) {
  PotentialGrid3D g;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  g.a_m = 6.4e-10;
  g.b_m = 6.4e-10;
  g.c_m = c_A * 1e-10;
  g.values_V.assign(static_cast<std::size_t>(nx) * ny * nz, 0.0);
  return g;
}

double smooth_step(double z, double z0, double w) {
  return 0.5 * (1.0 + std::tanh((z - z0) / w));
}

// Slab profile: bulk level -> vacuum plateau, plus an optional dipole-sheet
// step further out. Lengths in angstrom.
double slab_profile(double z_A, double v_bulk, double v_vac, double dv_sheet,
                    double z_sheet) {
  return v_bulk + (v_vac - v_bulk) * smooth_step(z_A, 6.0, 0.8) +
         dv_sheet * smooth_step(z_A, z_sheet, 0.6);
}

}  // namespace

TEST_CASE("plane average of a constant grid is the constant") {
  PotentialGrid3D g = make_grid(4, 5, 6, 12.0);
  for (auto& v : g.values_V) v = 3.75;
  const PlaneProfile p = plane_average(g);
  REQUIRE(p.vbar_V.size() == 6);
  for (double v : p.vbar_V) CHECK(v == doctest::Approx(3.75).epsilon(1e-15));
}

TEST_CASE("x-y structure with zero plane sum drops out") {
  PotentialGrid3D g = make_grid(8, 8, 40, 20.0);
  auto f = [](double z_A) { return -4.0 + 0.3 * z_A; };
  for (int k = 0; k < g.nz; ++k) {
    const double z_A = g.z_of_slice(k) * 1e10;
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        // checkerboard: sums to zero over every plane
        const double ripple = ((i + j) % 2 == 0 ? 1.0 : -1.0) * 0.8;
        g.values_V[(static_cast<std::size_t>(k) * g.ny + j) * g.nx + i] =
            f(z_A) + ripple;
      }
  }
  const PlaneProfile p = plane_average(g);
  for (int k = 0; k < g.nz; ++k)
    CHECK(p.vbar_V[k] == doctest::Approx(f(p.z_m[k] * 1e10)).epsilon(1e-12));
}

TEST_CASE("synthetic dipole-sheet grid reproduces the generator profile") {
  PotentialGrid3D g = make_grid(6, 6, 160, 32.0);
  for (int k = 0; k < g.nz; ++k) {
    const double z_A = g.z_of_slice(k) * 1e10;
    const double v = slab_profile(z_A, -8.0, 3.21, 0.0, 0.0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        g.values_V[(static_cast<std::size_t>(k) * g.ny + j) * g.nx + i] = v;
  }
  const PlaneProfile p = plane_average(g);
  for (int k = 0; k < g.nz; ++k) {
    const double z_A = p.z_m[k] * 1e10;
    CHECK(std::abs(p.vbar_V[k] - slab_profile(z_A, -8.0, 3.21, 0.0, 0.0)) < 1e-10);
  }
}

TEST_CASE("plane average is linear and permutation invariant") {
  PotentialGrid3D g = make_grid(4, 4, 8, 8.0);
  std::uint64_t s = 99;
  for (auto& v : g.values_V) {
    s = s * 6364136223846793005ull + 1442695040888963407ull;
    v = (double)(s >> 11) * 0x1.0p-53 - 0.5;
  }
  const PlaneProfile base = plane_average(g);

  // scale + shift
  PotentialGrid3D g2 = g;
  for (auto& v : g2.values_V) v = 2.0 * v + 1.0;
  const PlaneProfile lin = plane_average(g2);
  for (int k = 0; k < g.nz; ++k)
    CHECK(lin.vbar_V[k] == doctest::Approx(2.0 * base.vbar_V[k] + 1.0).epsilon(1e-13));

  // swap two x-columns everywhere
  PotentialGrid3D g3 = g;
  for (int k = 0; k < g.nz; ++k)
    for (int j = 0; j < g.ny; ++j)
      std::swap(g3.values_V[(static_cast<std::size_t>(k) * g.ny + j) * g.nx + 0],
                g3.values_V[(static_cast<std::size_t>(k) * g.ny + j) * g.nx + 3]);
  const PlaneProfile perm = plane_average(g3);
  for (int k = 0; k < g.nz; ++k)
    CHECK(perm.vbar_V[k] == doctest::Approx(base.vbar_V[k]).epsilon(1e-15));
}

TEST_CASE("work function arithmetic from the published slab numbers") {
  PlaneProfile p;
  for (int k = 0; k < 100; ++k) {
    p.z_m.push_back(k * 0.3e-10);
    p.vbar_V.push_back(k < 50 ? -8.0 : 3.21);
  }
  const WorkFunctionReport clean = work_function(p, -2.36, 20e-10, 29e-10);
  CHECK(clean.work_function_eV == doctest::Approx(5.57).epsilon(1e-12));

  for (auto& v : p.vbar_V)
    if (v > 0.0) v = 4.68;
  const WorkFunctionReport n_covered = work_function(p, -2.36, 20e-10, 29e-10);
  CHECK(n_covered.work_function_eV == doctest::Approx(7.04).epsilon(1e-12));

  for (auto& v : p.vbar_V)
    if (v > 0.0) v = 3.24;
  const WorkFunctionReport he_covered = work_function(p, -2.36, 20e-10, 29e-10);
  CHECK(he_covered.work_function_eV == doctest::Approx(5.60).epsilon(1e-12));

  // E_F at the plateau level: W = 0
  const WorkFunctionReport zero = work_function(p, 3.24, 20e-10, 29e-10);
  CHECK(zero.work_function_eV == doctest::Approx(0.0));
}

TEST_CASE("missing plateau is reported with the flatness value") {
  PlaneProfile p;
  for (int k = 0; k < 100; ++k) {
    p.z_m.push_back(k * 0.3e-10);
    p.vbar_V.push_back(0.05 * k);  // steadily rising, never flat
  }
  CHECK_THROWS_WITH_AS(work_function(p, 0.0, 15e-10, 25e-10),
                       doctest::Contains("no vacuum plateau"), InvalidArgument);
}

TEST_CASE("surface dipoles from work-function shifts") {
  const double area = 41e-20;
  const double mu_n = dipole_from_workfunction(1.47 * C::eV_J, area);
  CHECK(close_rel(mu_n / C::debye_Cm, 1.60, 0.02));
  CHECK(mu_n / C::debye_Cm == doctest::Approx(1.599818).epsilon(1e-5));

  const double mu_he = dipole_from_workfunction(0.03 * C::eV_J, area);
  CHECK(mu_he / C::debye_Cm == doctest::Approx(0.032649).epsilon(1e-4));
  CHECK(close_rel(mu_he / C::debye_Cm, 0.03, 0.10));

  CHECK(dipole_from_workfunction(0.0, area) == 0.0);

  // inverse op closes the loop
  const double back = workfunction_shift_from_dipole(mu_n, area) / C::eV_J;
  CHECK(back == doctest::Approx(1.47).epsilon(1e-12));
}

TEST_CASE("end to end: inserted dipole sheet is recovered within 1%") {
  // Known per-adatom dipole -> potential step dV = e mu / (eps0 A).
  const double area = 41e-20;
  const double mu_in = 1.60 * C::debye_Cm;
  const double dv = C::elementary_charge_C * mu_in /
                    (C::vacuum_permittivity_F_per_m * area) / C::eV_J;  // volts

  PotentialGrid3D g = make_grid(6, 6, 160, 32.0);
  for (int k = 0; k < g.nz; ++k) {
    const double z_A = g.z_of_slice(k) * 1e10;
    const double v = slab_profile(z_A, -8.0, 3.21, dv, 14.0);
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i)
        g.values_V[(static_cast<std::size_t>(k) * g.ny + j) * g.nx + i] = v;
  }
  const PlaneProfile p = plane_average(g);
  const WorkFunctionReport ads = work_function(p, -2.36, 24e-10, 30e-10);
  const double delta_w = ads.work_function_eV - 5.57;  // clean reference
  const double mu_out = dipole_from_workfunction(delta_w * C::eV_J, area);
  CHECK(close_rel(mu_out, mu_in, 0.01));
}

TEST_CASE("grid file parsing and failure modes") {
  const fs::path dir = fs::temp_directory_path();

  SUBCASE("well-formed file") {
    std::ostringstream os;
    os << "# demo slab grid\n2 2 3\n5.0 5.0 9.0\n";
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 4; ++i) os << (k + 0.5 * i) << ' ';
    os << '\n';
    const fs::path path = dir / "adnoise_grid_ok.dat";
    std::ofstream(path) << os.str();
    const PotentialGrid3D g = load_potential_grid(path.string());
    CHECK(g.nx == 2);
    CHECK(g.nz == 3);
    CHECK(g.c_m == doctest::Approx(9.0e-10));
    CHECK(g.at(1, 0, 2) == doctest::Approx(2.5));
  }

  SUBCASE("value count mismatch") {
    const fs::path path = dir / "adnoise_grid_short.dat";
    std::ofstream(path) << "2 2 3\n5.0 5.0 9.0\n1 2 3 4 5\n";
    CHECK_THROWS_AS(load_potential_grid(path.string()), ParseError);
  }

  SUBCASE("non-numeric token") {
    const fs::path path = dir / "adnoise_grid_bad.dat";
    std::ofstream(path) << "2 2 2\n5.0 5.0 9.0\n1 2 3 x 5 6 7 8\n";
    CHECK_THROWS_AS(load_potential_grid(path.string()), ParseError);
  }

  SUBCASE("dimensions below 2") {
    const fs::path path = dir / "adnoise_grid_dim.dat";
    std::ofstream(path) << "1 2 2\n5.0 5.0 9.0\n1 2 3 4\n";
    CHECK_THROWS_AS(load_potential_grid(path.string()), ParseError);
  }
}

TEST_CASE("profile CSV carries the declared header") {
  PlaneProfile p;
  p.z_m = {0.0, 1e-10};
  p.vbar_V = {1.0, 2.0};
  std::ostringstream os;
  write_profile_csv(p, os);
  CHECK(os.str().rfind("z_angstrom,vbar_volts\n", 0) == 0);
}
