#include "adnoise/electrostatics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "adnoise/units.hpp"

namespace adnoise {

namespace C = units::constants;

void PotentialGrid3D::validate() const {
  if (nx < 2 || ny < 2 || nz < 2)
    throw InvalidArgument("grid: nx, ny, nz must all be >= 2");
  if (!(a_m > 0.0 && b_m > 0.0 && c_m > 0.0))
    throw InvalidArgument("grid: cell edges must be positive");
  if (values_V.size() != static_cast<std::size_t>(nx) * ny * nz)
    throw InvalidArgument("grid: value count does not match nx*ny*nz");
  for (double v : values_V)
    if (!std::isfinite(v)) throw InvalidArgument("grid: values must be finite");
}

PotentialGrid3D load_potential_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");

  // Strip comments, then tokenize the rest.
  std::vector<double> tokens;
  std::string line;
  int lineno = 0;
  int header_ints = 0;
  PotentialGrid3D g;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      double v;
      try {
        v = std::stod(tok);
      } catch (const std::exception&) {
        throw ParseError("non-numeric token '" + tok + "'", lineno);
      }
      if (header_ints < 3) {
        const int n = static_cast<int>(v);
        if (n != v || n < 2) throw ParseError("grid dimensions must be integers >= 2", lineno);
        (header_ints == 0 ? g.nx : header_ints == 1 ? g.ny : g.nz) = n;
        ++header_ints;
      } else if (header_ints < 6) {
        const double m = v * 1e-10;  // angstrom -> meter
        (header_ints == 3 ? g.a_m : header_ints == 4 ? g.b_m : g.c_m) = m;
        ++header_ints;
      } else {
        tokens.push_back(v);
      }
    }
  }
  if (header_ints < 6) throw ParseError("missing grid header in '" + path + "'");
  g.values_V = std::move(tokens);
  try {
    g.validate();
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string(e.what()) + " in '" + path + "'");
  }
  return g;
}

PlaneProfile plane_average(const PotentialGrid3D& grid) {
  grid.validate();
  PlaneProfile p;
  p.z_m.resize(grid.nz);
  p.vbar_V.resize(grid.nz);
  const double inv = 1.0 / (static_cast<double>(grid.nx) * grid.ny);
  for (int k = 0; k < grid.nz; ++k) {
    double acc = 0.0;
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i) acc += grid.at(i, j, k);
    p.z_m[k] = grid.z_of_slice(k);
    p.vbar_V[k] = acc * inv;
  }
  return p;
}

WorkFunctionReport work_function(const PlaneProfile& profile, double fermi_energy_eV,
                                 double window_lo_m, double window_hi_m,
                                 double flatness_tol_eV) {
  if (profile.z_m.empty()) throw InvalidArgument("work_function: empty profile");
  if (!(window_lo_m < window_hi_m))
    throw InvalidArgument("work_function: window must have positive extent");
  if (window_lo_m < profile.z_m.front() || window_hi_m > profile.z_m.back())
    throw InvalidArgument("work_function: window outside the profile domain");

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  int count = 0;
  for (std::size_t k = 0; k < profile.z_m.size(); ++k) {
    if (profile.z_m[k] < window_lo_m || profile.z_m[k] > window_hi_m) continue;
    lo = std::min(lo, profile.vbar_V[k]);
    hi = std::max(hi, profile.vbar_V[k]);
    acc += profile.vbar_V[k];
    ++count;
  }
  if (count == 0) throw InvalidArgument("work_function: window contains no samples");
  const double flatness = hi - lo;
  if (flatness > flatness_tol_eV)
    throw InvalidArgument("work_function: no vacuum plateau (flatness " +
                          std::to_string(flatness) + " V over the window exceeds " +
                          std::to_string(flatness_tol_eV) + " V)");

  WorkFunctionReport rep;
  rep.v_infinity_V = acc / count;
  rep.fermi_energy_eV = fermi_energy_eV;
  // potential in volts -> electron potential energy in eV, numerically equal
  rep.work_function_eV = rep.v_infinity_V - fermi_energy_eV;
  rep.window_lo_m = window_lo_m;
  rep.window_hi_m = window_hi_m;
  rep.flatness_V = flatness;
  return rep;
}

double dipole_from_workfunction(double delta_w_J, double area_m2) {
  if (!(area_m2 > 0.0)) throw InvalidArgument("dipole_from_workfunction: A must be positive");
  return delta_w_J * C::vacuum_permittivity_F_per_m * area_m2 / C::elementary_charge_C;
}

double workfunction_shift_from_dipole(double dipole_Cm, double area_m2) {
  if (!(area_m2 > 0.0)) throw InvalidArgument("workfunction_shift: A must be positive");
  return C::elementary_charge_C * dipole_Cm /
         (C::vacuum_permittivity_F_per_m * area_m2);
}

void write_profile_csv(const PlaneProfile& profile, std::ostream& os) {
  os << "z_angstrom,vbar_volts\n";
  char buf[32];
  for (std::size_t k = 0; k < profile.z_m.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", profile.z_m[k] * 1e10);
    os << buf << ',';
    std::snprintf(buf, sizeof buf, "%.17g", profile.vbar_V[k]);
    os << buf << '\n';
  }
}

}  // namespace adnoise
