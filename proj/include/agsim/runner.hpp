#ifndef AGSIM_RUNNER_HPP
#define AGSIM_RUNNER_HPP

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace agsim {

// Exit taxonomy of the command-line driver.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class RunBackend { Sv, Mps, ExactAdiabatic, Ed };
enum class AdiabaticPath { CoulombOnly, FullRamp };
enum class StartHamiltonian { TightBinding, HoppingOnly };

struct RunConfig {
  int nx = 1;
  int ny = 1;
  double t = 1.0;
  double u = 0.5;          // final Coulomb coupling (ramped from zero)
  double lambda = 0.0;     // spin-orbit coupling (fixed or ramped per path)
  AdiabaticPath path = AdiabaticPath::CoulombOnly;
  double total_time = 1.0;
  int steps = 40;
  RunBackend backend = RunBackend::Sv;
  int chi_max = 64;
  bool single_precision = false;
  StartHamiltonian start = StartHamiltonian::TightBinding;
  std::string reference = "auto";  // auto | on | off
  std::uint64_t seed = 1;
  std::string outdir = "out";
  double memory_budget_mb = 6144.0;
  int ed_cap = 24;
};

RunConfig parse_config_file(const std::string& path);
void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value);
void validate(const RunConfig& config);
std::string config_to_text(const RunConfig& config);

struct RunArtifacts {
  double final_energy_total = 0.0;
  double final_energy_per_site = 0.0;
  double delta_e_percent = -1.0;  // negative when no reference
  double fidelity = -1.0;
  double fidelity_ledger = 1.0;
  std::string trace_path;
  std::string report_path;
  std::string metadata_path;
};

// prepare -> evolve -> measure -> report; writes trace.csv,
// energy_report.csv and run_metadata.txt under config.outdir.
RunArtifacts run(const RunConfig& config);

struct SweepSpec {
  std::vector<double> total_times;
  std::vector<double> dts;
};

std::string run_sweep(const RunConfig& config, const SweepSpec& spec);

// bench presets: "table2" reruns the reference ground-energy rows and
// prints reference vs computed; "fig7" sweeps the MPS bond cap on the one
// hexagon problem and reports fidelity against the dense backend.
int run_bench(const std::string& preset, bool include_large, std::ostream& os);

std::string compile_plan_text(int nx, int ny, const std::string& part);
std::string prep_check_text(const RunConfig& config);

}  // namespace agsim

#endif
