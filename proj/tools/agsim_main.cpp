#include <CLI11.hpp>
#include <iostream>
#include <sstream>

#include "agsim/runner.hpp"

namespace {

// Collects command-line overrides so that precedence is CLI > config file >
// defaults.
struct Overrides {
  std::vector<std::pair<std::string, std::string>> kv;

  void add_flag(CLI::App* cmd, const std::string& flag, const std::string& key,
                const std::string& help) {
    auto opt = cmd->add_option_function<std::string>(
        flag,
        [this, key](const std::string& v) { kv.emplace_back(key, v); }, help);
    opt->expected(1);
  }
};

agsim::RunConfig resolve(const std::string& config_path,
                         const Overrides& overrides) {
  agsim::RunConfig config;
  if (!config_path.empty()) config = agsim::parse_config_file(config_path);
  for (const auto& [key, value] : overrides.kv)
    agsim::apply_override(config, key, value);
  return config;
}

std::vector<double> parse_grid(const std::string& spec) {
  // Either a comma list "1,2,4" or a range "start:stop:step".
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double a = 0, b = 0, s = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    is >> a >> c1 >> b >> c2 >> s;
    if (!is || c1 != ':' || c2 != ':' || s <= 0)
      throw agsim::ConfigError("bad grid spec: " + spec);
    for (double v = a; v <= b + 1e-12; v += s) out.push_back(v);
  } else {
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ','))
      if (!tok.empty()) out.push_back(std::stod(tok));
  }
  if (out.empty()) throw agsim::ConfigError("empty grid spec: " + spec);
  return out;
}

void register_common(CLI::App* cmd, std::string& config_path, Overrides& ov) {
  cmd->add_option("--config", config_path, "flat key=value configuration file");
  ov.add_flag(cmd, "--nx", "nx", "hexagons along x");
  ov.add_flag(cmd, "--ny", "ny", "hexagons along y");
  ov.add_flag(cmd, "--t", "t", "hopping amplitude");
  ov.add_flag(cmd, "--u", "u", "final Coulomb coupling");
  ov.add_flag(cmd, "--lambda", "lambda", "spin-orbit coupling");
  ov.add_flag(cmd, "--path", "path", "adiabatic path: coulomb-only | full");
  ov.add_flag(cmd, "--T", "T", "total evolution time");
  ov.add_flag(cmd, "--steps", "steps", "number of Trotter steps");
  ov.add_flag(cmd, "--backend", "backend", "sv | mps | exact-adiabatic | ed");
  ov.add_flag(cmd, "--chi-max", "chi_max", "MPS bond-dimension cap");
  ov.add_flag(cmd, "--precision", "precision", "double | single");
  ov.add_flag(cmd, "--start", "start", "initial Hamiltonian: tb | hopping");
  ov.add_flag(cmd, "--reference", "reference", "ED reference: auto | on | off");
  ov.add_flag(cmd, "--seed", "seed", "sampling seed");
  ov.add_flag(cmd, "--outdir", "outdir", "output directory");
  ov.add_flag(cmd, "--memory-budget-mb", "memory_budget_mb",
              "dense-backend memory budget");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"honeycomb Fermi-Hubbard adiabatic circuit simulator"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;

  auto* cmd_run = app.add_subcommand("run", "prepare, evolve, measure, report");
  register_common(cmd_run, config_path, ov);

  auto* cmd_sweep = app.add_subcommand("sweep", "(T, dt) error grid");
  std::string grid_T = "1,2,4";
  std::string grid_dt = "0.05,0.025,0.0125";
  register_common(cmd_sweep, config_path, ov);
  cmd_sweep->add_option("--grid-T", grid_T, "list a,b,c or range a:b:step");
  cmd_sweep->add_option("--grid-dt", grid_dt, "list a,b,c or range a:b:step");

  auto* cmd_bench = app.add_subcommand("bench", "reference-value regression");
  std::string preset = "table2";
  bool include_large = false;
  cmd_bench->add_option("preset", preset, "table2 | fig7");
  cmd_bench->add_flag("--all", include_large,
                      "include rows beyond desk scale (slow or refused)");

  auto* cmd_plan = app.add_subcommand("compile-plan", "dump a swap-network schedule");
  int plan_nx = 1, plan_ny = 2;
  std::string plan_part = "hopping";
  cmd_plan->add_option("--nx", plan_nx, "hexagons along x");
  cmd_plan->add_option("--ny", plan_ny, "hexagons along y");
  cmd_plan->add_option("--part", plan_part, "coulomb | hopping | spin-orbit");

  auto* cmd_prep = app.add_subcommand("prep-check", "Gaussian preparation diagnostics");
  register_common(cmd_prep, config_path, ov);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      agsim::RunArtifacts art = agsim::run(resolve(config_path, ov));
      std::cout << "energy per site " << art.final_energy_per_site << "\n";
      if (art.delta_e_percent >= 0.0)
        std::cout << "delta E " << art.delta_e_percent << " %\n";
      std::cout << "artifacts: " << art.trace_path << ", " << art.report_path
                << ", " << art.metadata_path << "\n";
    } else if (cmd_sweep->parsed()) {
      agsim::SweepSpec spec;
      spec.total_times = parse_grid(grid_T);
      spec.dts = parse_grid(grid_dt);
      std::string csv = agsim::run_sweep(resolve(config_path, ov), spec);
      std::cout << "sweep written to " << csv << "\n";
    } else if (cmd_bench->parsed()) {
      return agsim::run_bench(preset, include_large, std::cout);
    } else if (cmd_plan->parsed()) {
      std::cout << agsim::compile_plan_text(plan_nx, plan_ny, plan_part);
    } else if (cmd_prep->parsed()) {
      std::cout << agsim::prep_check_text(resolve(config_path, ov));
    }
  } catch (const agsim::ConfigError& ex) {
    std::cerr << "config error: " << ex.what() << "\n";
    return 1;
  } catch (const agsim::CapacityError& ex) {
    std::cerr << "capacity error: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 3;
  }
  return 0;
}
