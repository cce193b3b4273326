// adnoise — adatom dipole-fluctuation noise toolkit, command-line front end.
//
// Subcommands: spectrum, heating, diffusion, workfunction, boundstates,
// scan, validate. Exit codes: 0 success, 2 validation failure, 3 numerical
// failure.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "adnoise/scenario.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct GlobalArgs {
  std::string scenario_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, GlobalArgs& args, bool scenario_required = true) {
  auto* opt = cmd->add_option("--scenario", args.scenario_path, "Scenario JSON file");
  if (scenario_required) opt->required();
  cmd->add_option("--out", args.out_dir, "Output directory");
  cmd->add_option("--seed", args.seed, "Seed recorded in the manifest");
  cmd->add_option("--format", args.format, "Console summary format: csv|json")
      ->check(CLI::IsMember({"csv", "json"}));
}

adnoise::RunOptions make_opts(const GlobalArgs& args) {
  adnoise::RunOptions opts;
  opts.out_dir = args.out_dir;
  opts.seed = args.seed;
  opts.format = args.format == "json" ? adnoise::OutputFormat::Json
                                      : adnoise::OutputFormat::Csv;
  opts.want_spectrum = false;
  opts.want_heating = false;
  opts.want_diffusion = false;
  opts.want_workfunction = false;
  opts.want_boundstates_dump = false;
  return opts;
}

void print_report(const adnoise::RunReport& report, const GlobalArgs& args) {
  if (args.format == "json") {
    std::printf("{\"outputs\": [");
    for (std::size_t i = 0; i < report.outputs.size(); ++i)
      std::printf("%s\"%s\"", i ? ", " : "", report.outputs[i].c_str());
    std::printf("]}\n");
    return;
  }
  for (const auto& f : report.outputs) std::printf("wrote %s\n", f.c_str());
}

int run_sections(const GlobalArgs& args, bool spectrum, bool heating, bool diffusion,
                 bool workfunction, bool boundstates) {
  const adnoise::Scenario sc = adnoise::load_scenario(args.scenario_path);
  adnoise::RunOptions opts = make_opts(args);
  opts.want_spectrum = spectrum;
  opts.want_heating = heating;
  opts.want_diffusion = diffusion;
  opts.want_workfunction = workfunction;
  opts.want_boundstates_dump = boundstates;
  const adnoise::RunReport report = adnoise::run_scenario(sc, opts);
  print_report(report, args);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"adatom dipole-fluctuation noise toolkit"};
  app.require_subcommand(1);

  GlobalArgs args;

  auto* cmd_spectrum = app.add_subcommand(
      "spectrum", "Bound states, rates and the dipole fluctuation spectrum");
  add_common(cmd_spectrum, args);

  auto* cmd_heating = app.add_subcommand(
      "heating", "Spectrum plus field noise and ion heating rate at the trap");
  add_common(cmd_heating, args);

  auto* cmd_diffusion =
      app.add_subcommand("diffusion", "Arrhenius/tunneling surface kinetics report");
  add_common(cmd_diffusion, args);

  auto* cmd_workfunction = app.add_subcommand(
      "workfunction", "Plane-averaged potential, work function and surface dipole");
  add_common(cmd_workfunction, args);

  auto* cmd_boundstates =
      app.add_subcommand("boundstates", "Eigenlevels and wavefunction dump");
  add_common(cmd_boundstates, args);

  auto* cmd_scan = app.add_subcommand("scan", "One-parameter scan");
  add_common(cmd_scan, args);
  std::string scan_param;
  std::vector<double> scan_values;
  cmd_scan->add_option("--param", scan_param, "T | d | m | omega_t | sigma | zeta")
      ->required()
      ->check(CLI::IsMember({"T", "d", "m", "omega_t", "sigma", "zeta"}));
  cmd_scan
      ->add_option("--values", scan_values,
                   "Scan values (T in K, d in um, m in amu, omega_t in MHz, "
                   "sigma in 1/m^2)")
      ->required()
      ->delimiter(',');

  auto* cmd_validate = app.add_subcommand("validate", "Validate a scenario file");
  add_common(cmd_validate, args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_validate->parsed()) {
      adnoise::load_scenario(args.scenario_path);
      std::printf("ok: %s\n", args.scenario_path.c_str());
      return kExitOk;
    }
    if (cmd_spectrum->parsed())
      return run_sections(args, true, false, false, false, false);
    if (cmd_heating->parsed())
      return run_sections(args, true, true, false, false, false);
    if (cmd_diffusion->parsed())
      return run_sections(args, false, false, true, false, false);
    if (cmd_workfunction->parsed())
      return run_sections(args, false, false, false, true, false);
    if (cmd_boundstates->parsed())
      return run_sections(args, false, false, false, false, true);
    if (cmd_scan->parsed()) {
      const adnoise::Scenario sc = adnoise::load_scenario(args.scenario_path);
      const adnoise::ScanResult res =
          adnoise::scan(sc, scan_param, scan_values, make_opts(args));
      std::printf("wrote %s\n", res.csv_path.c_str());
      return kExitOk;
    }
  } catch (const adnoise::ValidationError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitValidation;
  } catch (const adnoise::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "unexpected error: %s\n", e.what());
    return kExitNumerical;
  }
  return kExitOk;
}
