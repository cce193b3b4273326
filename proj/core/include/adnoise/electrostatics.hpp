#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "adnoise/errors.hpp"

// Slab electrostatics: plane-averaged potential profiles, work function
// extraction W = Vbar(inf) - E_F, and the work-function-shift <-> surface
// dipole relation  dW = e dmu / (eps0 A).
// Grid potentials are in volts; the z-axis is the surface normal.

namespace adnoise {

struct PotentialGrid3D {
  int nx = 0, ny = 0, nz = 0;
  double a_m = 0.0, b_m = 0.0, c_m = 0.0;  // cell edges; c along z
  std::vector<double> values_V;            // x fastest, then y, then z

  double at(int i, int j, int k) const {
    return values_V[(static_cast<std::size_t>(k) * ny + j) * nx + i];
  }
  double z_of_slice(int k) const { return c_m * k / nz; }
  void validate() const;
};

// Text format: optional '#' comments, then "nx ny nz", then
// "a_angstrom b_angstrom c_angstrom", then nx*ny*nz whitespace-separated
// values in volts (x fastest, then y, then z).
PotentialGrid3D load_potential_grid(const std::string& path);

struct PlaneProfile {
  std::vector<double> z_m;
  std::vector<double> vbar_V;
};

// Vbar(z_k) = mean over the (x, y) plane of slice k.
PlaneProfile plane_average(const PotentialGrid3D& grid);

struct WorkFunctionReport {
  double v_infinity_V = 0.0;   // plateau mean
  double fermi_energy_eV = 0.0;
  double work_function_eV = 0.0;  // W = Vbar(inf) - E_F
  double window_lo_m = 0.0, window_hi_m = 0.0;
  double flatness_V = 0.0;     // max - min over the window
};

// Vacuum plateau declared by [window_lo, window_hi]; throws InvalidArgument
// ("no vacuum plateau") when max-min over the window exceeds flatness_tol.
WorkFunctionReport work_function(const PlaneProfile& profile, double fermi_energy_eV,
                                 double window_lo_m, double window_hi_m,
                                 double flatness_tol_eV = 0.010);

// dmu = dW eps0 A / e, the adatom's surface-normal dipole. dW in joule,
// A in m^2, result in C m.
double dipole_from_workfunction(double delta_w_J, double area_m2);

// Inverse: dW = e dmu / (eps0 A), joule.
double workfunction_shift_from_dipole(double dipole_Cm, double area_m2);

// CSV "z_angstrom,vbar_volts".
void write_profile_csv(const PlaneProfile& profile, std::ostream& os);

}  // namespace adnoise
