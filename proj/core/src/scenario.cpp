#include "adnoise/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "adnoise/electrostatics.hpp"
#include "adnoise/units.hpp"

namespace adnoise {

namespace fs = std::filesystem;
using nlohmann::json;
using std::numbers::pi;
namespace C = units::constants;

// ---------------------------------------------------------------------------
// helpers

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Problems {
  std::vector<std::string> list;
  void add(std::string s) { list.push_back(std::move(s)); }
  bool any() const { return !list.empty(); }
};

// {"value": <num>, "unit": "<name>"} converted to `target`'s unit.
std::optional<double> parse_quantity(const json& parent, const char* key,
                                     units::Unit target, Problems& problems,
                                     const std::string& where, bool required) {
  if (!parent.contains(key)) {
    if (required) problems.add(where + ": missing '" + key + "'");
    return std::nullopt;
  }
  const json& node = parent.at(key);
  if (!node.is_object() || !node.contains("value") || !node.contains("unit") ||
      !node.at("value").is_number() || !node.at("unit").is_string()) {
    problems.add(where + "." + key + ": expected {\"value\": <number>, \"unit\": \"<name>\"}");
    return std::nullopt;
  }
  const std::string unit_str = node.at("unit").get<std::string>();
  const auto unit = units::unit_from_name(unit_str);
  if (!unit) {
    problems.add(where + "." + key + ": unknown unit '" + unit_str + "'");
    return std::nullopt;
  }
  try {
    return units::convert_value(node.at("value").get<double>(), *unit, target);
  } catch (const DimensionError& e) {
    problems.add(where + "." + key + ": " + e.what());
    return std::nullopt;
  }
}

// Value in a unit outside the Quantity dimensions (charge, density, ...).
std::optional<double> parse_special(const json& parent, const char* key,
                                    std::initializer_list<std::pair<const char*, double>> units_to_si,
                                    Problems& problems, const std::string& where,
                                    bool required) {
  if (!parent.contains(key)) {
    if (required) problems.add(where + ": missing '" + key + "'");
    return std::nullopt;
  }
  const json& node = parent.at(key);
  if (!node.is_object() || !node.contains("value") || !node.contains("unit") ||
      !node.at("value").is_number() || !node.at("unit").is_string()) {
    problems.add(where + "." + key + ": expected {\"value\": <number>, \"unit\": \"<name>\"}");
    return std::nullopt;
  }
  const std::string unit_str = node.at("unit").get<std::string>();
  for (const auto& [name, factor] : units_to_si)
    if (unit_str == name) return node.at("value").get<double>() * factor;
  std::string allowed;
  for (const auto& [name, factor] : units_to_si) {
    (void)factor;
    if (!allowed.empty()) allowed += ", ";
    allowed += name;
  }
  problems.add(where + "." + key + ": unit '" + unit_str + "' not one of {" + allowed + "}");
  return std::nullopt;
}

std::optional<std::string> parse_file_ref(const json& parent, const char* key,
                                          const std::string& base_dir, Problems& problems,
                                          const std::string& where, bool required) {
  if (!parent.contains(key)) {
    if (required) problems.add(where + ": missing '" + key + "'");
    return std::nullopt;
  }
  if (!parent.at(key).is_string()) {
    problems.add(where + "." + key + ": expected a path string");
    return std::nullopt;
  }
  fs::path p = parent.at(key).get<std::string>();
  if (p.is_relative()) p = fs::path(base_dir) / p;
  if (!fs::exists(p)) {
    problems.add(where + "." + key + ": file '" + p.string() + "' does not exist");
    return std::nullopt;
  }
  return p.string();
}

void write_text_file(const std::string& path, const std::string& content,
                     std::vector<std::string>& outputs) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write '" + path + "'");
  os << content;
  outputs.push_back(path);
}

std::string temp_label(double t_kelvin) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t_kelvin);
  return std::string("T") + buf + "K";
}

// Assembled stage-by-stage so numerical failures carry the stage name.
struct Pipeline {
  PotentialModel potential = PotentialModel::morse(1.0, 1.0, 1.0);
  DipoleCurve dipole = DipoleCurve::power_law(0.0, 1.0);
  PhononModel phonons = PhononModel::debye(HostMaterial::gold());
  BoundStateSet states;
  double nu10_au = 0.0;
  double gamma0_au = 0.0;  // Gamma_{1->0}(T=0)

  Pipeline(const SpectrumSection& s);
};

template <typename F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw NumericalError(std::string("stage '") + name + "' failed: " + e.what());
  }
}

Pipeline::Pipeline(const SpectrumSection& s)
    : states(Grid1D{}, 1.0, {}, {}) {
  potential = [&] {
    if (s.morse)
      return morse_from_observables(s.morse->depth_au, s.morse->z0_au, s.morse->nu10_au,
                                    s.adatom_mass_au);
    return load_tabulated_potential(*s.potential_file);
  }();

  dipole = [&] {
    if (s.dipole_file) return load_tabulated_dipole(*s.dipole_file);
    return DipoleCurve::power_law(s.mu_contact_au.value_or(0.0), s.dipole_z0_au);
  }();

  phonons = s.pdos_file ? load_tabulated_pdos(*s.pdos_file, s.host)
                        : PhononModel::debye(s.host);

  Grid1D grid = Grid1D::default_for(potential, s.adatom_mass_au);
  grid.n_points = s.solver_points;
  SolveOptions opts;
  opts.n_max = s.n_levels;
  states = solve_bound_states(potential, s.adatom_mass_au, grid, opts);

  nu10_au = states.energy(1) - states.energy(0);
  const FluctuatorSystem cold =
      transition_rates(states, potential, dipole, phonons, 0.0, states.size());
  gamma0_au = cold.rates[1][0];
}

json geometry_json(const TrapGeometry& g) {
  return json{{"charge_C", g.charge_C},
              {"ion_mass_kg", g.ion_mass_kg},
              {"trap_omega_rad_s", g.trap_omega_rad_s},
              {"distance_m", g.distance_m},
              {"sigma_per_m2", g.sigma_per_m2}};
}

constexpr double kSmuAuToSi = C::ebohr_Cm * C::ebohr_Cm * C::atomic_time_s;
constexpr double kRateAuToSi = 1.0 / C::atomic_time_s;

}  // namespace

// ---------------------------------------------------------------------------
// load_scenario

Scenario load_scenario(const std::string& path) {
  Problems problems;

  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError({"cannot open scenario file '" + path + "'"});
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string content = buffer.str();

  json j;
  try {
    j = json::parse(content);
  } catch (const std::exception& e) {
    throw ValidationError({std::string("scenario is not valid JSON: ") + e.what()});
  }

  Scenario sc;
  sc.source_path = path;
  sc.base_dir = fs::path(path).parent_path().string();
  if (sc.base_dir.empty()) sc.base_dir = ".";
  sc.content_hash = fnv1a64(content);

  if (!j.contains("name") || !j.at("name").is_string())
    problems.add("scenario: missing 'name'");
  else
    sc.name = j.at("name").get<std::string>();

  if (j.contains("zeta")) {
    if (j.at("zeta").is_number() && j.at("zeta").get<double>() > 0.0)
      sc.zeta = j.at("zeta").get<double>();
    else
      problems.add("scenario.zeta: must be a positive number");
  }

  // ---- spectrum section -------------------------------------------------
  if (j.contains("potential") || j.contains("adatom")) {
    SpectrumSection s;
    if (auto m = parse_quantity(j.value("adatom", json::object()), "mass",
                                units::Unit::ElectronMass, problems, "adatom", true))
      s.adatom_mass_au = *m;

    if (!j.contains("potential")) {
      problems.add("scenario: 'adatom' present but 'potential' missing");
    } else {
      const json& pj = j.at("potential");
      const std::string kind = pj.value("kind", "");
      if (kind == "morse") {
        MorseSpec ms;
        if (auto v = parse_quantity(pj, "depth", units::Unit::Hartree, problems,
                                    "potential", true))
          ms.depth_au = *v;
        if (auto v = parse_quantity(pj, "minimum", units::Unit::Bohr, problems,
                                    "potential", true))
          ms.z0_au = *v;
        // nu10 is declared as an ordinary frequency and converted to angular.
        if (auto v = parse_quantity(pj, "nu10", units::Unit::Hertz, problems,
                                    "potential", true))
          ms.nu10_au = 2.0 * pi * *v / C::atomic_angular_frequency_rad_s;
        if (!(ms.depth_au > 0.0)) problems.add("potential.depth: must be positive");
        s.morse = ms;
      } else if (kind == "tabulated") {
        s.potential_file = parse_file_ref(pj, "file", sc.base_dir, problems,
                                          "potential", true);
      } else {
        problems.add("potential.kind: expected 'morse' or 'tabulated'");
      }
    }

    if (j.contains("dipole")) {
      const json& dj = j.at("dipole");
      const std::string kind = dj.value("kind", "");
      if (kind == "power_law") {
        if (auto v = parse_quantity(dj, "mu_contact", units::Unit::EBohr, problems,
                                    "dipole", true))
          s.mu_contact_au = *v;
        if (auto v = parse_quantity(dj, "z0", units::Unit::Bohr, problems, "dipole", true))
          s.dipole_z0_au = *v;
      } else if (kind == "tabulated") {
        s.dipole_file = parse_file_ref(dj, "file", sc.base_dir, problems, "dipole", true);
      } else {
        problems.add("dipole.kind: expected 'power_law' or 'tabulated'");
      }
    } else {
      problems.add("scenario: spectrum run needs a 'dipole' section");
    }

    if (j.contains("host")) {
      const json& hj = j.at("host");
      if (auto v = parse_quantity(hj, "atom_mass", units::Unit::Kilogram, problems,
                                  "host", true))
        s.host.atom_mass_kg = *v;
      if (auto v = parse_special(hj, "density", {{"kg_m3", 1.0}, {"g_cm3", 1000.0}},
                                 problems, "host", true))
        s.host.density_kg_m3 = *v;
      if (auto v = parse_special(hj, "sound_speed", {{"m_s", 1.0}, {"km_s", 1000.0}},
                                 problems, "host", true))
        s.host.sound_speed_m_s = *v;
    } else {
      problems.add("scenario: spectrum run needs a 'host' section");
    }

    if (j.contains("phonons")) {
      const json& fj = j.at("phonons");
      const std::string kind = fj.value("kind", "debye");
      if (kind == "debye") {
        s.debye_phonons = true;
      } else if (kind == "tabulated") {
        s.debye_phonons = false;
        s.pdos_file = parse_file_ref(fj, "file", sc.base_dir, problems, "phonons", true);
      } else {
        problems.add("phonons.kind: expected 'debye' or 'tabulated'");
      }
    }

    if (!j.contains("temperatures") || !j.at("temperatures").is_array() ||
        j.at("temperatures").empty()) {
      problems.add("scenario: spectrum run needs a non-empty 'temperatures' array");
    } else {
      int idx = 0;
      for (const auto& tj : j.at("temperatures")) {
        json wrap = json::object();
        wrap["t"] = tj;
        const std::string where = "temperatures[" + std::to_string(idx++) + "]";
        if (auto v = parse_quantity(wrap, "t", units::Unit::Kelvin, problems, where, true)) {
          if (*v < 0.0)
            problems.add(where + ": temperature must be >= 0");
          else
            s.temperatures_K.push_back(*v);
        }
      }
    }

    if (!j.contains("omega_grid")) {
      problems.add("scenario: spectrum run needs an 'omega_grid' section");
    } else {
      const json& oj = j.at("omega_grid");
      if (auto v = parse_quantity(oj, "max", units::Unit::RadPerSecond, problems,
                                  "omega_grid", true))
        s.omega_max_rad_s = *v;
      if (!oj.contains("points") || !oj.at("points").is_number_integer() ||
          oj.at("points").get<int>() < 2)
        problems.add("omega_grid.points: need an integer >= 2");
      else
        s.omega_points = oj.at("points").get<int>();
      if (s.omega_max_rad_s <= 0.0) problems.add("omega_grid.max: must be positive");
    }

    if (j.contains("n_levels")) {
      if (!j.at("n_levels").is_number_integer() || j.at("n_levels").get<int>() < 2)
        problems.add("n_levels: need an integer >= 2");
      else
        s.n_levels = j.at("n_levels").get<int>();
    }
    if (j.contains("solver") && j.at("solver").contains("n_points")) {
      const auto& nj = j.at("solver").at("n_points");
      if (!nj.is_number_integer() || nj.get<int>() < 128)
        problems.add("solver.n_points: need an integer >= 128");
      else
        s.solver_points = nj.get<int>();
    }

    sc.spectrum = std::move(s);
  }

  // ---- trap section ------------------------------------------------------
  if (j.contains("trap")) {
    const json& tj = j.at("trap");
    TrapGeometry g;
    if (auto v = parse_special(tj, "charge", {{"e", C::elementary_charge_C}, {"C", 1.0}},
                               problems, "trap", true))
      g.charge_C = *v;
    if (auto v = parse_quantity(tj, "ion_mass", units::Unit::Kilogram, problems, "trap", true))
      g.ion_mass_kg = *v;
    if (auto v = parse_quantity(tj, "trap_frequency", units::Unit::RadPerSecond, problems,
                                "trap", true))
      g.trap_omega_rad_s = *v;
    if (auto v = parse_quantity(tj, "distance", units::Unit::Meter, problems, "trap", true))
      g.distance_m = *v;
    if (auto v = parse_special(tj, "sigma", {{"per_m2", 1.0}, {"per_cm2", 1e4}}, problems,
                               "trap", true))
      g.sigma_per_m2 = *v;
    if (!problems.any()) {
      try {
        g.validate();
      } catch (const Error& e) {
        problems.add(std::string("trap: ") + e.what());
      }
    }
    if (!sc.spectrum)
      problems.add("trap: requires a spectrum section (needs S_mu at the trap frequency)");
    sc.trap = g;
  }

  // ---- diffusion section ---------------------------------------------------
  if (j.contains("diffusion")) {
    const json& dj = j.at("diffusion");
    DiffusionSection d;
    if (auto v = parse_quantity(dj, "activation_energy", units::Unit::Joule, problems,
                                "diffusion", true))
      d.input.activation_energy_J = *v;
    if (auto v = parse_quantity(dj, "attempt_prefactor", units::Unit::Hertz, problems,
                                "diffusion", true))
      d.input.attempt_prefactor_Hz = *v;
    if (auto v = parse_quantity(dj, "adatom_mass", units::Unit::Kilogram, problems,
                                "diffusion", true))
      d.input.adatom_mass_kg = *v;
    if (auto v = parse_quantity(dj, "barrier_width", units::Unit::Meter, problems,
                                "diffusion", true))
      d.input.barrier_width_m = *v;
    if (auto v = parse_quantity(dj, "lattice_parameter", units::Unit::Meter, problems,
                                "diffusion", true))
      d.input.lattice_parameter_m = *v;
    if (!dj.contains("temperatures") || !dj.at("temperatures").is_array() ||
        dj.at("temperatures").empty()) {
      problems.add("diffusion: needs a non-empty 'temperatures' array");
    } else {
      int idx = 0;
      for (const auto& tj : dj.at("temperatures")) {
        json wrap = json::object();
        wrap["t"] = tj;
        const std::string where = "diffusion.temperatures[" + std::to_string(idx++) + "]";
        if (auto v = parse_quantity(wrap, "t", units::Unit::Kelvin, problems, where, true))
          d.temperatures_K.push_back(*v);
      }
    }
    sc.diffusion = std::move(d);
  }

  // ---- workfunction section -----------------------------------------------
  if (j.contains("workfunction")) {
    const json& wj = j.at("workfunction");
    WorkFunctionSection w;
    if (auto f = parse_file_ref(wj, "grid_file", sc.base_dir, problems, "workfunction", true))
      w.grid_file = *f;
    if (auto v = parse_quantity(wj, "fermi_energy", units::Unit::ElectronVolt, problems,
                                "workfunction", true))
      w.fermi_energy_eV = *v;
    if (wj.contains("vacuum_window")) {
      const json& vw = wj.at("vacuum_window");
      if (auto v = parse_quantity(vw, "min", units::Unit::Meter, problems,
                                  "workfunction.vacuum_window", true))
        w.window_lo_m = *v;
      if (auto v = parse_quantity(vw, "max", units::Unit::Meter, problems,
                                  "workfunction.vacuum_window", true))
        w.window_hi_m = *v;
    } else {
      problems.add("workfunction: missing 'vacuum_window'");
    }
    if (auto v = parse_quantity(wj, "flatness_tolerance", units::Unit::ElectronVolt,
                                problems, "workfunction", false))
      w.flatness_tol_eV = *v;
    if (auto v = parse_quantity(wj, "reference_workfunction", units::Unit::ElectronVolt,
                                problems, "workfunction", false))
      w.reference_workfunction_eV = *v;
    if (auto v = parse_special(wj, "area_per_adatom",
                               {{"angstrom2", 1e-20}, {"nm2", 1e-18}, {"m2", 1.0}},
                               problems, "workfunction", false))
      w.area_m2 = *v;
    sc.workfunction = std::move(w);
  }

  if (!sc.spectrum && !sc.diffusion && !sc.workfunction)
    problems.add(
        "scenario: no computation section present (need potential/adatom, diffusion, "
        "or workfunction)");

  if (problems.any()) throw ValidationError(std::move(problems.list));
  return sc;
}

// ---------------------------------------------------------------------------
// run_scenario

RunReport run_scenario(const Scenario& scenario, const RunOptions& opts) {
  RunReport report;
  fs::create_directories(opts.out_dir);
  const fs::path out(opts.out_dir);

  json summary;
  summary["scenario"] = scenario.name;

  if (scenario.spectrum &&
      (opts.want_spectrum || opts.want_heating || opts.want_boundstates_dump)) {
    const SpectrumSection& s = *scenario.spectrum;
    Pipeline pipe = stage("bound-states", [&] { return Pipeline(s); });

    report.nu10_rad_s = pipe.nu10_au * C::atomic_angular_frequency_rad_s;
    report.gamma0_per_s = pipe.gamma0_au * kRateAuToSi;
    report.levels_used = pipe.states.size();
    summary["nu10_rad_s"] = report.nu10_rad_s;
    summary["nu10_thz"] = report.nu10_rad_s / (2.0 * pi) / 1e12;
    summary["gamma0_per_s"] = report.gamma0_per_s;
    summary["gamma0_thz"] = report.gamma0_per_s / (2.0 * pi) / 1e12;
    summary["levels_used"] = report.levels_used;
    summary["solver_grid_points"] = pipe.states.grid().n_points;

    if (opts.want_boundstates_dump) {
      std::ostringstream csv;
      dump_wavefunctions_csv(pipe.states, csv);
      write_text_file((out / "wavefunctions.csv").string(), csv.str(), report.outputs);
      json levels = json::array();
      for (int n = 0; n < pipe.states.size(); ++n) {
        levels.push_back({{"n", n},
                          {"energy_hartree", pipe.states.energy(n)},
                          {"energy_eV", pipe.states.energy(n) * C::hartree_eV}});
      }
      json bj{{"levels", levels},
              {"adatom_mass_me", pipe.states.adatom_mass()},
              {"grid_points", pipe.states.grid().n_points}};
      write_text_file((out / "levels.json").string(), bj.dump(2) + "\n", report.outputs);
    }

    // omega grid, shared by every temperature
    std::vector<double> omega_au(s.omega_points);
    const double omega_max_au = s.omega_max_rad_s / C::atomic_angular_frequency_rad_s;
    for (int i = 0; i < s.omega_points; ++i)
      omega_au[i] = omega_max_au * double(i) / double(s.omega_points - 1);

    json heating_entries = json::array();
    json temp_summaries = json::array();

    for (double T : s.temperatures_K) {
      const FluctuatorSystem sys = stage("transition-rates", [&] {
        return transition_rates(pipe.states, pipe.potential, pipe.dipole, pipe.phonons,
                                T, pipe.states.size());
      });
      const SpectrumResult spec =
          stage("dipole-spectrum", [&] { return dipole_spectrum(sys, omega_au); });

      SpectrumSummary ts;
      ts.temperature_K = T;
      ts.s_mu_zero_si = spec.decomposition.eval(0.0) * kSmuAuToSi;
      const bool has_spectrum_mass = spec.decomposition.eval(0.0) > 0.0;
      const std::string label = temp_label(T);

      if (opts.want_spectrum) {
        std::ostringstream csv;
        csv << "omega_rad_s,S_mu_si\n";
        for (int i = 0; i < s.omega_points; ++i) {
          csv << format_double(omega_au[i] * C::atomic_angular_frequency_rad_s) << ','
              << format_double(spec.values[i] * kSmuAuToSi) << '\n';
        }
        const std::string csv_path = (out / ("spectrum_" + label + ".csv")).string();
        write_text_file(csv_path, csv.str(), report.outputs);

        json meta;
        meta["temperature_K"] = T;
        meta["levels"] = {{"energies_hartree", sys.level_energies},
                          {"dipoles_ebohr", sys.level_dipoles}};
        json rates = json::array();
        for (const auto& row : sys.rates) {
          json r = json::array();
          for (double v : row) r.push_back(v * kRateAuToSi);
          rates.push_back(r);
        }
        meta["rates_per_s"] = rates;
        meta["stationary"] = sys.stationary;
        meta["provenance"] = {{"potential", pipe.potential.provenance()},
                              {"dipole", pipe.dipole.provenance()},
                              {"phonons", pipe.phonons.provenance()}};
        meta["units"] = {{"omega", "rad_s"}, {"S_mu", "C^2 m^2 s"}};
        write_text_file((out / ("spectrum_" + label + ".meta.json")).string(),
                        meta.dump(2) + "\n", report.outputs);
      }

      if (has_spectrum_mass) {
        std::vector<double> si_omega(omega_au.size()), si_vals(omega_au.size());
        for (std::size_t i = 0; i < omega_au.size(); ++i) {
          si_omega[i] = omega_au[i] * C::atomic_angular_frequency_rad_s;
          si_vals[i] = spec.values[i] * kSmuAuToSi;
        }
        ts.hwhm_rad_s = half_width_at_half_max(si_omega, si_vals);
      }

      if (scenario.trap && opts.want_heating) {
        const TrapGeometry& g = *scenario.trap;
        const double omega_t_au = g.trap_omega_rad_s / C::atomic_angular_frequency_rad_s;
        const double s_mu_si = spec.decomposition.eval(omega_t_au) * kSmuAuToSi;
        const double s_e = field_spectrum(g.sigma_per_m2, g.distance_m, s_mu_si);
        const double gh = heating_rate(g, s_e);
        ts.s_e_si = s_e;
        ts.heating_quanta_per_s = gh;
        heating_entries.push_back({{"temperature_K", T},
                                   {"spectrum_csv", "spectrum_" + label + ".csv"},
                                   {"s_mu_at_trap_si", s_mu_si},
                                   {"s_e_v2_m2_hz", s_e},
                                   {"heating_quanta_per_s", gh}});
      }

      json tsj{{"temperature_K", T},
               {"s_mu_zero_si", ts.s_mu_zero_si},
               {"hwhm_rad_s", ts.hwhm_rad_s}};
      if (ts.s_e_si) tsj["s_e_v2_m2_hz"] = *ts.s_e_si;
      if (ts.heating_quanta_per_s) tsj["heating_quanta_per_s"] = *ts.heating_quanta_per_s;
      temp_summaries.push_back(tsj);
      report.spectra.push_back(std::move(ts));
    }

    summary["temperatures"] = temp_summaries;

    if (scenario.trap && opts.want_heating) {
      json hj{{"geometry", geometry_json(*scenario.trap)},
              {"spectrum_reference", scenario.name},
              {"entries", heating_entries}};
      write_text_file((out / "heating.json").string(), hj.dump(2) + "\n", report.outputs);
    }
  }

  if (scenario.diffusion && opts.want_diffusion) {
    const DiffusionSection& d = *scenario.diffusion;
    json table = json::array();
    for (double T : d.temperatures_K) {
      DiffusionInput in = d.input;
      in.temperature_K = T;
      const double arr = stage("arrhenius", [&] { return arrhenius_rate(in); });
      table.push_back(
          {{"temperature_K", T},
           {"arrhenius_hz", arr},
           {"diffusion_cm2_s",
            diffusion_coefficient(in.lattice_parameter_m, arr) * 1e4}});
    }
    DiffusionInput in = d.input;
    const double gt = stage("tunneling", [&] { return tunneling_rate(in); });
    json dj;
    dj["inputs"] = {{"activation_energy_eV", in.activation_energy_J / C::eV_J},
                    {"attempt_prefactor_hz", in.attempt_prefactor_Hz},
                    {"adatom_mass_kg", in.adatom_mass_kg},
                    {"barrier_width_m", in.barrier_width_m},
                    {"lattice_parameter_m", in.lattice_parameter_m}};
    dj["warnings"] = in.warnings();
    dj["thermal"] = table;
    dj["tunneling_hz"] = gt;
    dj["tunneling_diffusion_cm2_s"] =
        diffusion_coefficient(in.lattice_parameter_m, gt) * 1e4;
    dj["redhead_migration_K"] = redhead_temperature(in.activation_energy_J);
    dj["crossover_K"] = thermal_tunneling_crossover(in);
    if (!d.temperatures_K.empty())
      dj["debroglie_m"] = debroglie_wavelength(in.adatom_mass_kg, d.temperatures_K.front());
    write_text_file((out / "diffusion.json").string(), dj.dump(2) + "\n", report.outputs);
    summary["diffusion"] = {{"tunneling_hz", gt},
                            {"redhead_migration_K", dj["redhead_migration_K"]}};
  }

  if (scenario.workfunction && opts.want_workfunction) {
    const WorkFunctionSection& w = *scenario.workfunction;
    const PotentialGrid3D grid =
        stage("grid-load", [&] { return load_potential_grid(w.grid_file); });
    const PlaneProfile profile = stage("plane-average", [&] { return plane_average(grid); });
    const WorkFunctionReport rep = stage("work-function", [&] {
      return work_function(profile, w.fermi_energy_eV, w.window_lo_m, w.window_hi_m,
                           w.flatness_tol_eV);
    });

    std::ostringstream csv;
    write_profile_csv(profile, csv);
    write_text_file((out / "vbar_profile.csv").string(), csv.str(), report.outputs);

    json wj;
    wj["v_infinity_V"] = rep.v_infinity_V;
    wj["fermi_energy_eV"] = rep.fermi_energy_eV;
    wj["work_function_eV"] = rep.work_function_eV;
    wj["plateau_flatness_V"] = rep.flatness_V;
    wj["profile_csv"] = "vbar_profile.csv";
    if (w.reference_workfunction_eV) {
      const double dw_eV = rep.work_function_eV - *w.reference_workfunction_eV;
      wj["reference_workfunction_eV"] = *w.reference_workfunction_eV;
      wj["delta_w_eV"] = dw_eV;
      if (w.area_m2) {
        const double mu = dipole_from_workfunction(dw_eV * C::eV_J, *w.area_m2);
        wj["area_per_adatom_m2"] = *w.area_m2;
        wj["dipole_Cm"] = mu;
        wj["dipole_debye"] = mu / C::debye_Cm;
      }
    }
    write_text_file((out / "workfunction.json").string(), wj.dump(2) + "\n",
                    report.outputs);
    summary["workfunction_eV"] = rep.work_function_eV;
  }

  // manifest: constants version, scenario hash, module versions, seed
  json manifest;
  manifest["schema_version"] = 1;
  manifest["generator"] = std::string("adnoise ") + kVersion;
  manifest["constants"] = C::version;
  manifest["modules"] = {{"core", kVersion}};
  manifest["scenario"] = {{"name", scenario.name},
                          {"file", fs::path(scenario.source_path).filename().string()},
                          {"fnv1a64", hex64(scenario.content_hash)}};
  manifest["seed"] = opts.seed;
  write_text_file((out / "manifest.json").string(), manifest.dump(2) + "\n",
                  report.outputs);
  write_text_file((out / "summary.json").string(), summary.dump(2) + "\n", report.outputs);
  return report;
}

// ---------------------------------------------------------------------------
// scan

ScanResult scan(const Scenario& scenario, const std::string& parameter,
                const std::vector<double>& values, const RunOptions& opts) {
  if (values.empty()) throw InvalidArgument("scan: no values given");
  const bool is_T = parameter == "T";
  const bool is_d = parameter == "d";
  const bool is_m = parameter == "m";
  const bool is_wt = parameter == "omega_t";
  const bool is_sigma = parameter == "sigma";
  const bool is_zeta = parameter == "zeta";
  if (!(is_T || is_d || is_m || is_wt || is_sigma || is_zeta))
    throw InvalidArgument("scan: unknown parameter '" + parameter +
                          "' (scannable: T, d, m, omega_t, sigma, zeta)");

  if (!scenario.spectrum)
    throw InvalidArgument("scan: scenario has no spectrum section");
  if ((is_d || is_wt || is_sigma) && !scenario.trap)
    throw InvalidArgument("scan: parameter '" + parameter + "' needs a trap section");

  const SpectrumSection& s = *scenario.spectrum;
  ScanResult result;

  fs::create_directories(opts.out_dir);
  std::ostringstream csv;

  if (is_m) {
    // Mass scaling relations against the scenario's reference system:
    // nu10 ~ m^-1/2 and Gamma0 ~ m^-1 at fixed (U0, z0).
    Pipeline pipe = stage("bound-states", [&] { return Pipeline(s); });
    const double m_ref_amu = s.adatom_mass_au / C::amu_me;
    const double nu_ref = pipe.nu10_au * C::atomic_angular_frequency_rad_s;
    const double g_ref = pipe.gamma0_au * kRateAuToSi;
    result.columns = {"m_amu", "nu10_rad_s", "gamma0_per_s"};
    for (double m_amu : values) {
      const auto scaled = mass_rescale(nu_ref, g_ref, m_ref_amu, m_amu);
      result.rows.push_back({m_amu, scaled.nu10_rad_s, scaled.gamma0_per_s});
    }
  } else if (is_zeta) {
    result.columns = {"zeta", "nu10_est_rad_s", "gamma0_est_per_s"};
    if (!s.morse) throw InvalidArgument("scan zeta: needs an analytic (morse) potential");
    const double depth_J = s.morse->depth_au * C::hartree_J;
    const double z0_m = s.morse->z0_au * C::bohr_m;
    const double mass_kg = s.adatom_mass_au * C::electron_mass_kg;
    for (double zeta : values) {
      const auto est = harmonic_estimates(depth_J, z0_m, mass_kg, s.host, zeta);
      result.rows.push_back({zeta, est.nu10_rad_s, est.gamma0_per_s});
    }
  } else if (is_T) {
    Pipeline pipe = stage("bound-states", [&] { return Pipeline(s); });
    std::vector<double> omega_au(s.omega_points);
    const double omega_max_au = s.omega_max_rad_s / C::atomic_angular_frequency_rad_s;
    for (int i = 0; i < s.omega_points; ++i)
      omega_au[i] = omega_max_au * double(i) / double(s.omega_points - 1);
    const bool with_trap = scenario.trap.has_value();
    result.columns = {"T_K", "s_mu_zero_si", "hwhm_rad_s"};
    if (with_trap) {
      result.columns.push_back("s_e_v2_m2_hz");
      result.columns.push_back("heating_quanta_per_s");
    }
    for (double T : values) {
      const FluctuatorSystem sys = transition_rates(pipe.states, pipe.potential,
                                                    pipe.dipole, pipe.phonons, T,
                                                    pipe.states.size());
      const SpectralDecomposition dec = dipole_spectrum_decomposition(sys);
      const double s0 = dec.eval(0.0) * kSmuAuToSi;
      double hwhm = 0.0;
      if (s0 > 0.0) {
        std::vector<double> si_omega(omega_au.size()), si_vals(omega_au.size());
        for (std::size_t i = 0; i < omega_au.size(); ++i) {
          si_omega[i] = omega_au[i] * C::atomic_angular_frequency_rad_s;
          si_vals[i] = dec.eval(omega_au[i]) * kSmuAuToSi;
        }
        hwhm = half_width_at_half_max(si_omega, si_vals);
      }
      std::vector<double> row{T, s0, hwhm};
      if (with_trap) {
        const TrapGeometry& g = *scenario.trap;
        const double omega_t_au = g.trap_omega_rad_s / C::atomic_angular_frequency_rad_s;
        const double s_mu_si = dec.eval(omega_t_au) * kSmuAuToSi;
        const double s_e = field_spectrum(g.sigma_per_m2, g.distance_m, s_mu_si);
        row.push_back(s_e);
        row.push_back(heating_rate(g, s_e));
      }
      result.rows.push_back(std::move(row));
    }
  } else {
    // d / omega_t / sigma: geometry scans at the first scenario temperature.
    Pipeline pipe = stage("bound-states", [&] { return Pipeline(s); });
    const double T = s.temperatures_K.front();
    const FluctuatorSystem sys = transition_rates(pipe.states, pipe.potential,
                                                  pipe.dipole, pipe.phonons, T,
                                                  pipe.states.size());
    const SpectralDecomposition dec = dipole_spectrum_decomposition(sys);
    result.columns = {is_d ? "d_um" : is_wt ? "omega_t_mhz" : "sigma_per_m2",
                      "s_e_v2_m2_hz", "heating_quanta_per_s"};
    for (double v : values) {
      TrapGeometry g = *scenario.trap;
      if (is_d) g.distance_m = v * 1e-6;
      if (is_wt) g.trap_omega_rad_s = 2.0 * pi * v * 1e6;
      if (is_sigma) g.sigma_per_m2 = v;
      const double omega_t_au = g.trap_omega_rad_s / C::atomic_angular_frequency_rad_s;
      const double s_mu_si = dec.eval(omega_t_au) * kSmuAuToSi;
      const double s_e = field_spectrum(g.sigma_per_m2, g.distance_m, s_mu_si);
      result.rows.push_back({v, s_e, heating_rate(g, s_e)});
    }
  }

  for (std::size_t i = 0; i < result.columns.size(); ++i)
    csv << (i ? "," : "") << result.columns[i];
  csv << '\n';
  for (const auto& row : result.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      csv << (i ? "," : "") << format_double(row[i]);
    csv << '\n';
  }
  result.csv_path = (fs::path(opts.out_dir) / ("scan_" + parameter + ".csv")).string();
  std::ofstream os(result.csv_path, std::ios::binary);
  if (!os) throw Error("cannot write '" + result.csv_path + "'");
  os << csv.str();
  return result;
}

}  // namespace adnoise
