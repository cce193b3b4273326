#include "adnoise/phonons.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "adnoise/units.hpp"

namespace adnoise {

using std::numbers::pi;
namespace C = units::constants;

// ---------------------------------------------------------------------------
// HostMaterial

double HostMaterial::atom_mass_au() const { return atom_mass_kg / C::electron_mass_kg; }

double HostMaterial::density_au() const {
  return density_kg_m3 / C::electron_mass_kg * (C::bohr_m * C::bohr_m * C::bohr_m);
}

double HostMaterial::sound_speed_au() const {
  return sound_speed_m_s / C::atomic_velocity_m_per_s;
}

double HostMaterial::debye_cutoff_au() const {
  return sound_speed_au() * std::cbrt(6.0 * pi * pi * density_au() / atom_mass_au());
}

double HostMaterial::debye_cutoff_rad_s() const {
  return debye_cutoff_au() * C::atomic_angular_frequency_rad_s;
}

void HostMaterial::validate() const {
  if (!(atom_mass_kg > 0.0 && density_kg_m3 > 0.0 && sound_speed_m_s > 0.0))
    throw InvalidArgument("host material: M, rho, v must all be positive");
}

HostMaterial HostMaterial::gold() {
  return HostMaterial{197.0 * C::amu_kg, 19300.0, 3200.0};
}

// ---------------------------------------------------------------------------
// PhononModel

PhononModel PhononModel::debye(const HostMaterial& host) {
  host.validate();
  PhononModel m;
  m.kind_ = Kind::Debye;
  m.host_ = host;
  m.provenance_ = "debye";
  return m;
}

PhononModel PhononModel::tabulated(const HostMaterial& host, std::vector<double> omega,
                                   std::vector<double> g) {
  host.validate();
  if (omega.size() != g.size() || omega.size() < 2)
    throw InvalidArgument("pdos table: need matching omega/g arrays, >= 2 points");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (i > 0 && !(omega[i] > omega[i - 1]))
      throw InvalidArgument("pdos table: omega must be strictly increasing");
    if (!(g[i] >= 0.0) || !std::isfinite(g[i]))
      throw InvalidArgument("pdos table: g must be finite and non-negative");
  }
  // Renormalize: trapezoid integral over the support equals 3 modes/atom.
  double integral = 0.0;
  for (std::size_t i = 1; i < omega.size(); ++i)
    integral += 0.5 * (g[i] + g[i - 1]) * (omega[i] - omega[i - 1]);
  if (!(integral > 0.0)) throw InvalidArgument("pdos table: integral vanishes");
  const double scale = 3.0 / integral;
  for (auto& v : g) v *= scale;

  PhononModel m;
  m.kind_ = Kind::Tabulated;
  m.host_ = host;
  m.omega_ = std::move(omega);
  m.g_ = std::move(g);
  m.provenance_ = "tabulated";
  return m;
}

double PhononModel::eval(double omega) const {
  if (!(omega >= 0.0)) throw InvalidArgument("pdos: omega must be >= 0");
  if (kind_ == Kind::Debye) {
    const double wd = host_.debye_cutoff_au();
    if (omega > wd) return 0.0;
    const double v = host_.sound_speed_au();
    return 3.0 * host_.atom_mass_au() * omega * omega /
           (2.0 * pi * pi * v * v * v * host_.density_au());
  }
  if (omega < omega_.front() || omega > omega_.back()) return 0.0;
  auto it = std::upper_bound(omega_.begin(), omega_.end(), omega);
  std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - omega_.begin()),
                                           1, omega_.size() - 1);
  const std::size_t lo = hi - 1;
  const double t = (omega - omega_[lo]) / (omega_[hi] - omega_[lo]);
  return g_[lo] + t * (g_[hi] - g_[lo]);
}

double PhononModel::support_max() const {
  return kind_ == Kind::Debye ? host_.debye_cutoff_au() : omega_.back();
}

PhononModel load_tabulated_pdos(const std::string& path, const HostMaterial& host) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::vector<double> omega, g;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string trimmed = line;
    trimmed.erase(0, trimmed.find_first_not_of(" \t"));
    if (trimmed.empty() || trimmed[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // "freq_thz,g_per_thz_per_atom"
      continue;
    }
    std::istringstream ss(trimmed);
    std::string fa, ga;
    if (!std::getline(ss, fa, ',') || !std::getline(ss, ga))
      throw ParseError("expected two comma-separated columns", lineno);
    double f, gv;
    try {
      f = std::stod(fa);
      gv = std::stod(ga);
    } catch (const std::exception&) {
      throw ParseError("non-numeric row '" + trimmed + "'", lineno);
    }
    // THz ordinary frequency -> atomic angular frequency; per-THz -> per-a.u.
    const double w_au = 2.0 * pi * f * 1e12 / C::atomic_angular_frequency_rad_s;
    const double g_au = gv / (2.0 * pi * 1e12) * C::atomic_angular_frequency_rad_s;
    omega.push_back(w_au);
    g.push_back(g_au);
  }
  if (omega.size() < 2) throw ParseError("pdos table '" + path + "' has fewer than 2 rows");
  PhononModel m = PhononModel::tabulated(host, std::move(omega), std::move(g));
  m.set_provenance("file:" + path);
  return m;
}

// ---------------------------------------------------------------------------

double bose_occupation(double omega, double temperature_K) {
  if (!(omega > 0.0)) throw InvalidArgument("bose_occupation: omega must be positive");
  if (temperature_K < 0.0) throw InvalidArgument("bose_occupation: T must be >= 0");
  if (temperature_K == 0.0) return 0.0;
  const double kT_au = temperature_K / C::hartree_per_kB_K;
  const double x = omega / kT_au;
  if (x > 700.0) return 0.0;  // below double range
  return 1.0 / std::expm1(x);
}

}  // namespace adnoise
