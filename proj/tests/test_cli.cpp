#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "agsim/runner.hpp"

using namespace agsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

fs::path scratch_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("agsim_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config file parsing with comments and overrides") {
  fs::path dir = scratch_dir("cfg");
  fs::path cfg = dir / "run.cfg";
  {
    std::ofstream os(cfg);
    os << "# sample configuration\n";
    os << "nx = 1\n";
    os << "ny = 1\n";
    os << "u = 0.5\n";
    os << "backend = mps\n";
    os << "chi_max = 32\n";
  }
  RunConfig config = parse_config_file(cfg.string());
  CHECK(config.nx == 1);
  CHECK(config.backend == RunBackend::Mps);
  CHECK(config.chi_max == 32);
  apply_override(config, "backend", "sv");
  CHECK(config.backend == RunBackend::Sv);
  CHECK_THROWS_AS(apply_override(config, "bogus", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(config, "backend", "qpu"), ConfigError);
  CHECK_THROWS_AS(parse_config_file((dir / "missing.cfg").string()), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("validation rejects bad configs") {
  RunConfig config;
  config.steps = 0;
  CHECK_THROWS_AS(validate(config), ConfigError);
  config.steps = 10;
  config.total_time = 0.0;
  CHECK_THROWS_AS(validate(config), ConfigError);
  config.total_time = 1.0;
  config.nx = 0;
  CHECK_THROWS_AS(validate(config), ConfigError);
}

TEST_CASE("capacity pre-check refuses oversized dense runs") {
  RunConfig config;
  config.nx = 4;
  config.ny = 4;  // 96 qubits
  config.backend = RunBackend::Sv;
  CHECK_THROWS_AS(validate(config), CapacityError);
  // The bond-capped backend is not constrained by the amplitude budget.
  config.backend = RunBackend::Mps;
  CHECK_NOTHROW(validate(config));
}

TEST_CASE("run writes deterministic artifacts") {
  fs::path dir = scratch_dir("run");
  RunConfig config;
  config.nx = 1;
  config.ny = 1;
  config.u = 0.5;
  config.total_time = 1.0;
  config.steps = 8;
  config.reference = "on";
  config.outdir = (dir / "a").string();

  RunArtifacts a = run(config);
  CHECK(fs::exists(a.trace_path));
  CHECK(fs::exists(a.report_path));
  CHECK(fs::exists(a.metadata_path));
  CHECK(a.final_energy_per_site < -1.0);
  CHECK(a.delta_e_percent >= 0.0);

  config.outdir = (dir / "b").string();
  RunArtifacts b = run(config);
  CHECK(slurp(a.trace_path) == slurp(b.trace_path));
  CHECK(slurp(a.report_path) == slurp(b.report_path));

  std::string metadata = slurp(a.metadata_path);
  CHECK(metadata.find("nx = 1") != std::string::npos);
  CHECK(metadata.find("backend = sv") != std::string::npos);
  CHECK(metadata.find("wall_time_s") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("exact-adiabatic backend matches the circuit result closely") {
  fs::path dir = scratch_dir("exact");
  RunConfig config;
  config.backend = RunBackend::ExactAdiabatic;
  config.u = 0.5;
  config.total_time = 1.0;
  config.steps = 40;
  config.reference = "on";
  config.outdir = dir.string();
  RunArtifacts art = run(config);
  // Stepwise matrix exponentials have no Trotter split error, so the result
  // sits between the circuit value and the exact ground energy.
  CHECK(art.final_energy_per_site <= -1.2110);
  CHECK(art.final_energy_per_site >= -1.2130);
  CHECK(art.fidelity > 0.99);
  fs::remove_all(dir);
}

TEST_CASE("single-precision and mps backends run through the driver") {
  fs::path dir = scratch_dir("prec");
  RunConfig config;
  config.u = 0.5;
  config.steps = 10;
  config.reference = "off";
  config.single_precision = true;
  config.outdir = (dir / "single").string();
  RunArtifacts art = run(config);
  CHECK(art.final_energy_per_site == doctest::Approx(-1.21).epsilon(1e-2));

  RunConfig mps_config;
  mps_config.u = 0.5;
  mps_config.steps = 10;
  mps_config.reference = "off";
  mps_config.backend = RunBackend::Mps;
  mps_config.chi_max = 32;
  mps_config.outdir = (dir / "mps").string();
  RunArtifacts mps_art = run(mps_config);
  CHECK(mps_art.final_energy_per_site == doctest::Approx(-1.21).epsilon(1e-2));
  CHECK(mps_art.fidelity_ledger <= 1.0);
  CHECK(mps_art.fidelity_ledger > 0.99);

  // At the full bond cap the hexagon run never truncates: the reported
  // fidelity ledger stays at one.
  mps_config.chi_max = 64;
  mps_config.outdir = (dir / "mps64").string();
  RunArtifacts full_art = run(mps_config);
  CHECK(full_art.fidelity_ledger == 1.0);
  CHECK(full_art.fidelity_ledger >= 0.999);
  fs::remove_all(dir);
}

TEST_CASE("ed backend reports the exact ground energy") {
  fs::path dir = scratch_dir("ed");
  RunConfig config;
  config.backend = RunBackend::Ed;
  config.u = 0.5;
  config.outdir = dir.string();
  RunArtifacts art = run(config);
  CHECK(art.final_energy_per_site == doctest::Approx(-1.2125).epsilon(2e-4));
  fs::remove_all(dir);
}

TEST_CASE("sweep command writes csv and plot script") {
  fs::path dir = scratch_dir("sweep");
  RunConfig config;
  config.outdir = dir.string();
  config.steps = 4;
  SweepSpec spec;
  spec.total_times = {0.5, 1.0, 1.5};
  spec.dts = {0.1, 0.05, 0.025};
  std::string csv_path = run_sweep(config, spec);
  std::string csv = slurp(csv_path);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);  // header + 9 rows
  CHECK(fs::exists(dir / "plot_sweep.gp"));
  CHECK_THROWS_AS(run_sweep(config, SweepSpec{}), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("compile-plan and prep-check text surfaces") {
  std::string table = compile_plan_text(1, 2, "hopping");
  CHECK(table.find("Horizontal interaction (2, 4)") != std::string::npos);
  CHECK(table.find("every term exactly once") != std::string::npos);
  CHECK_THROWS_AS(compile_plan_text(1, 1, "nonsense"), ConfigError);

  RunConfig config;
  std::string prep = prep_check_text(config);
  CHECK(prep.find("occupied modes: 6") != std::string::npos);
  CHECK(prep.find("prepared energy: -8") != std::string::npos);
}

TEST_CASE("bench rejects unknown presets") {
  std::ostringstream os;
  CHECK_THROWS_AS(run_bench("table9", false, os), ConfigError);
}
