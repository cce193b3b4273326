#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adnoise/boundstates.hpp"
#include "adnoise/diffusion.hpp"
#include "adnoise/fluctuator.hpp"
#include "adnoise/phonons.hpp"
#include "adnoise/potentials.hpp"
#include "adnoise/trapnoise.hpp"

// Declarative scenario files (JSON, every physical quantity carrying an
// explicit unit string) bound to end-to-end runs: potential -> bound states ->
// rates -> spectrum -> optional trap noise, diffusion and slab
// electrostatics. Outputs are CSV/JSON files plus a manifest with input
// hashes; identical scenario + seed reruns are byte-identical.

namespace adnoise {

inline constexpr const char* kVersion = "1.0.0";

struct MorseSpec {
  double depth_au = 0.0;
  double z0_au = 0.0;
  double nu10_au = 0.0;  // angular, atomic units
};

struct SpectrumSection {
  double adatom_mass_au = 0.0;
  std::optional<MorseSpec> morse;
  std::optional<std::string> potential_file;
  std::optional<double> mu_contact_au;  // power-law dipole contact value
  double dipole_z0_au = 0.0;
  std::optional<std::string> dipole_file;
  HostMaterial host;
  bool debye_phonons = true;
  std::optional<std::string> pdos_file;
  std::vector<double> temperatures_K;
  double omega_max_rad_s = 0.0;
  int omega_points = 0;
  int n_levels = 8;
  int solver_points = 2048;
};

struct DiffusionSection {
  DiffusionInput input;  // temperature_K unused here
  std::vector<double> temperatures_K;
};

struct WorkFunctionSection {
  std::string grid_file;
  double fermi_energy_eV = 0.0;
  double window_lo_m = 0.0, window_hi_m = 0.0;
  double flatness_tol_eV = 0.010;
  std::optional<double> reference_workfunction_eV;
  std::optional<double> area_m2;
};

struct Scenario {
  std::string name;
  std::string source_path;
  std::string base_dir;
  std::uint64_t content_hash = 0;
  double zeta = 1.0;
  std::optional<SpectrumSection> spectrum;
  std::optional<TrapGeometry> trap;
  std::optional<DiffusionSection> diffusion;
  std::optional<WorkFunctionSection> workfunction;
};

// Parses and validates; every problem is reported at once in the
// ValidationError. Referenced files are resolved against the scenario's
// directory and must exist at validation time.
Scenario load_scenario(const std::string& path);

enum class OutputFormat { Csv, Json };

struct RunOptions {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::Csv;
  // Section switches so CLI subcommands can run slices; sections missing
  // from the scenario are skipped regardless.
  bool want_spectrum = true;
  bool want_heating = true;
  bool want_diffusion = true;
  bool want_workfunction = true;
  bool want_boundstates_dump = false;
};

struct SpectrumSummary {
  double temperature_K = 0.0;
  double s_mu_zero_si = 0.0;       // S_mu(0), (C m)^2 s
  double hwhm_rad_s = 0.0;         // fitted dominant Lorentzian width
  std::optional<double> s_e_si;    // at the trap frequency
  std::optional<double> heating_quanta_per_s;
};

struct RunReport {
  std::vector<std::string> outputs;  // files written (absolute paths)
  double nu10_rad_s = 0.0;           // (E1 - E0)/hbar
  double gamma0_per_s = 0.0;         // Gamma_{1->0} at T = 0
  int levels_used = 0;
  std::vector<SpectrumSummary> spectra;
};

// Executes every requested section present in the scenario and writes the
// artifact files plus manifest.json. Numerical failures are rethrown as
// NumericalError tagged with the failing stage.
RunReport run_scenario(const Scenario& scenario, const RunOptions& opts);

// One-parameter scan. Scannables and the units scan values are given in:
//   T [K], d [um], m [amu], omega_t [MHz, ordinary], sigma [1/m^2], zeta [-].
// Writes scan_<parameter>.csv into out_dir; one row per value.
struct ScanResult {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::string csv_path;
};

ScanResult scan(const Scenario& scenario, const std::string& parameter,
                const std::vector<double>& values, const RunOptions& opts);

// FNV-1a over raw bytes; used for scenario content hashes in manifests.
std::uint64_t fnv1a64(const std::string& bytes);

// "%.17g" formatting used for every CSV number (shortest exact round-trip is
// not needed; fixed formatting keeps reruns byte-identical).
std::string format_double(double v);

}  // namespace adnoise
