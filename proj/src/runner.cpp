#include "agsim/runner.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "agsim/evolve.hpp"
#include "agsim/lanczos.hpp"
#include "agsim/measure.hpp"
#include "agsim/prep.hpp"

namespace agsim {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  auto b = s.find_last_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& key) {
  try {
    return std::stod(v);
  } catch (...) {
    throw ConfigError("invalid number for key '" + key + "': " + v);
  }
}

int to_int(const std::string& v, const std::string& key) {
  try {
    return std::stoi(v);
  } catch (...) {
    throw ConfigError("invalid integer for key '" + key + "': " + v);
  }
}

std::string backend_name(RunBackend b) {
  switch (b) {
    case RunBackend::Sv: return "sv";
    case RunBackend::Mps: return "mps";
    case RunBackend::ExactAdiabatic: return "exact-adiabatic";
    case RunBackend::Ed: return "ed";
  }
  return "?";
}

void capacity_check(const RunConfig& config, int n_qubits) {
  const double amp_bytes = config.single_precision ? 8.0 : 16.0;
  double vectors = 0.0;
  switch (config.backend) {
    case RunBackend::Sv: vectors = 4.0; break;              // state + clones
    case RunBackend::Mps: return;                            // bond-capped
    case RunBackend::ExactAdiabatic: vectors = 100.0; break; // Krylov basis
    case RunBackend::Ed: vectors = 56.0; break;              // Lanczos window
  }
  double needed_mb =
      std::ldexp(amp_bytes * vectors, n_qubits) / (1024.0 * 1024.0);
  if (needed_mb > config.memory_budget_mb) {
    std::ostringstream os;
    os << "backend " << backend_name(config.backend) << " on " << n_qubits
       << " qubits needs about " << std::llround(needed_mb)
       << " MB, over the budget of " << config.memory_budget_mb << " MB";
    throw CapacityError(os.str());
  }
}

Schedule make_schedule(const RunConfig& config) {
  if (config.path == AdiabaticPath::CoulombOnly)
    return Schedule::coulomb_only(config.total_time, config.steps, config.u,
                                  config.lambda);
  return Schedule::full_ramp(config.total_time, config.steps, config.u,
                             config.lambda);
}

Couplings final_couplings(const RunConfig& config) {
  return Couplings{config.t, config.u, config.lambda};
}

GivensCircuit prep_circuit_for(const RunConfig& config, const Lattice& lattice,
                               const QubitMap& map) {
  const Schedule schedule = make_schedule(config);
  const double lambda0 = config.start == StartHamiltonian::TightBinding
                             ? schedule.lambda_at(0.0)
                             : 0.0;
  QuadraticHamiltonian q = quadratic_matrix(lattice, map, config.t, lambda0);
  return givens_compile(occupied_orbitals(q));
}

}  // namespace

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  RunConfig config;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos) {
      std::ostringstream os;
      os << path << ":" << lineno << ": expected key = value";
      throw ConfigError(os.str());
    }
    apply_override(config, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  return config;
}

void apply_override(RunConfig& config, const std::string& key,
                    const std::string& value) {
  if (key == "nx") config.nx = to_int(value, key);
  else if (key == "ny") config.ny = to_int(value, key);
  else if (key == "t") config.t = to_double(value, key);
  else if (key == "u") config.u = to_double(value, key);
  else if (key == "lambda") config.lambda = to_double(value, key);
  else if (key == "path") {
    if (value == "coulomb-only") config.path = AdiabaticPath::CoulombOnly;
    else if (value == "full") config.path = AdiabaticPath::FullRamp;
    else throw ConfigError("path must be coulomb-only or full");
  } else if (key == "T") config.total_time = to_double(value, key);
  else if (key == "steps") config.steps = to_int(value, key);
  else if (key == "backend") {
    if (value == "sv") config.backend = RunBackend::Sv;
    else if (value == "mps") config.backend = RunBackend::Mps;
    else if (value == "exact-adiabatic") config.backend = RunBackend::ExactAdiabatic;
    else if (value == "ed") config.backend = RunBackend::Ed;
    else throw ConfigError("backend must be sv, mps, exact-adiabatic or ed");
  } else if (key == "chi_max") config.chi_max = to_int(value, key);
  else if (key == "precision") {
    if (value == "double") config.single_precision = false;
    else if (value == "single") config.single_precision = true;
    else throw ConfigError("precision must be double or single");
  } else if (key == "start") {
    if (value == "tb") config.start = StartHamiltonian::TightBinding;
    else if (value == "hopping") config.start = StartHamiltonian::HoppingOnly;
    else throw ConfigError("start must be tb or hopping");
  } else if (key == "reference") {
    if (value != "auto" && value != "on" && value != "off")
      throw ConfigError("reference must be auto, on or off");
    config.reference = value;
  } else if (key == "seed") config.seed = std::stoull(value);
  else if (key == "outdir") config.outdir = value;
  else if (key == "memory_budget_mb") config.memory_budget_mb = to_double(value, key);
  else if (key == "ed_cap") config.ed_cap = to_int(value, key);
  else throw ConfigError("unknown config key: " + key);
}

void validate(const RunConfig& config) {
  if (config.nx < 1 || config.ny < 1)
    throw ConfigError("nx and ny must be >= 1");
  if (config.steps < 1) throw ConfigError("steps must be >= 1");
  if (config.total_time <= 0.0) throw ConfigError("T must be > 0");
  if (config.chi_max < 1) throw ConfigError("chi_max must be >= 1");
  if (config.memory_budget_mb <= 0.0)
    throw ConfigError("memory_budget_mb must be > 0");
  Lattice lattice({config.nx, config.ny});
  capacity_check(config, 2 * lattice.num_sites());
}

std::string config_to_text(const RunConfig& config) {
  std::ostringstream os;
  os.precision(17);
  os << "nx = " << config.nx << "\n";
  os << "ny = " << config.ny << "\n";
  os << "t = " << config.t << "\n";
  os << "u = " << config.u << "\n";
  os << "lambda = " << config.lambda << "\n";
  os << "path = "
     << (config.path == AdiabaticPath::CoulombOnly ? "coulomb-only" : "full")
     << "\n";
  os << "T = " << config.total_time << "\n";
  os << "steps = " << config.steps << "\n";
  os << "backend = " << backend_name(config.backend) << "\n";
  os << "chi_max = " << config.chi_max << "\n";
  os << "precision = " << (config.single_precision ? "single" : "double") << "\n";
  os << "start = "
     << (config.start == StartHamiltonian::TightBinding ? "tb" : "hopping")
     << "\n";
  os << "reference = " << config.reference << "\n";
  os << "seed = " << config.seed << "\n";
  os << "outdir = " << config.outdir << "\n";
  os << "memory_budget_mb = " << config.memory_budget_mb << "\n";
  os << "ed_cap = " << config.ed_cap << "\n";
  return os.str();
}

RunArtifacts run(const RunConfig& config) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();

  Lattice lattice({config.nx, config.ny});
  QubitMap map(lattice);
  const int n = map.total_qubits();
  const Couplings couplings = final_couplings(config);
  const Schedule schedule = make_schedule(config);

  std::filesystem::create_directories(config.outdir);

  const bool want_reference =
      config.reference == "on" || (config.reference == "auto" && n <= 16);
  std::optional<EvolveReference> reference;
  std::optional<SparseHamiltonian> h_final;
  if (n <= config.ed_cap)
    h_final.emplace(build_hamiltonian(lattice, map, couplings, {}, config.ed_cap));

  GivensCircuit prep_circuit = prep_circuit_for(config, lattice, map);

  if (want_reference) {
    if (!h_final)
      throw ConfigError("reference=on requires an exact-diagonalization sized register");
    EdResult ed = ground_state_ed(*h_final);
    EvolveReference ref;
    ref.target_energy = ed.energy;
    ref.target_state = std::move(ed.state);
    ref.has_state = true;
    auto probe = prepare(prep_circuit, SimOptions{});
    ref.initial_energy = h_final->expectation(probe->to_dense());
    reference = std::move(ref);
  }

  SimOptions sim;
  sim.backend =
      config.backend == RunBackend::Mps ? BackendKind::Mps : BackendKind::Statevector;
  sim.chi_max = config.chi_max;
  sim.precision = config.single_precision ? Precision::Single : Precision::Double;

  Trace trace;
  std::unique_ptr<QuantumState> state;
  RunArtifacts artifacts;

  switch (config.backend) {
    case RunBackend::Sv:
    case RunBackend::Mps: {
      StepPlans plans = compile_plans(lattice, map);
      state = prepare(prep_circuit, sim);
      trace = evolve_circuit(plans, lattice, map, couplings, schedule, *state,
                             reference);
      break;
    }
    case RunBackend::ExactAdiabatic: {
      auto dense0 = prepare(prep_circuit, SimOptions{})->to_dense();
      Eigen::VectorXcd final_state;
      trace = evolve_exact(lattice, map, couplings, schedule, dense0, reference,
                           &final_state);
      state = make_statevector(final_state);
      break;
    }
    case RunBackend::Ed: {
      if (!h_final)
        throw CapacityError("ed backend exceeds the exact-diagonalization cap");
      EdResult ed = ground_state_ed(*h_final);
      state = make_statevector(ed.state);
      TraceRecord rec;
      rec.step = 0;
      rec.s = 1.0;
      rec.energy_total = ed.energy;
      rec.energy_per_site = ed.energy / lattice.num_sites();
      rec.delta_e_percent = 0.0;
      rec.fidelity = 1.0;
      trace.records.push_back(rec);
      break;
    }
  }

  auto groups = build_groups(lattice, map);
  EnergyReport report = total_energy(*state, groups, couplings,
                                     lattice.num_sites());

  artifacts.final_energy_total = report.total;
  artifacts.final_energy_per_site = report.per_site;
  artifacts.fidelity_ledger = state->fidelity_ledger();
  if (reference) {
    artifacts.delta_e_percent = delta_e(reference->target_energy,
                                        reference->initial_energy, report.total);
    if (n <= 24) {
      Eigen::VectorXcd dense = state->to_dense();
      artifacts.fidelity =
          std::norm(reference->target_state.dot(dense)) / dense.squaredNorm();
    }
  }

  artifacts.trace_path = config.outdir + "/trace.csv";
  artifacts.report_path = config.outdir + "/energy_report.csv";
  artifacts.metadata_path = config.outdir + "/run_metadata.txt";
  {
    std::ofstream os(artifacts.trace_path);
    os << trace.to_csv();
  }
  {
    std::ofstream os(artifacts.report_path);
    os << report.to_csv();
  }
  {
    std::ofstream os(artifacts.metadata_path);
    os.precision(17);
    os << "# resolved configuration\n" << config_to_text(config);
    os << "# results\n";
    os << "qubits = " << n << "\n";
    os << "final_energy_total = " << report.total << "\n";
    os << "final_energy_per_site = " << report.per_site << "\n";
    os << "fidelity_ledger = " << artifacts.fidelity_ledger << "\n";
    if (reference) {
      os << "reference_energy_total = " << reference->target_energy << "\n";
      os << "initial_energy_total = " << reference->initial_energy << "\n";
      os << "delta_e_percent = " << artifacts.delta_e_percent << "\n";
      if (artifacts.fidelity >= 0.0)
        os << "fidelity_vs_reference = " << artifacts.fidelity << "\n";
    }
    os << "wall_time_s = "
       << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
              .count()
       << "\n";
  }
  return artifacts;
}

std::string run_sweep(const RunConfig& config, const SweepSpec& spec) {
  validate(config);
  if (spec.total_times.empty() || spec.dts.empty())
    throw ConfigError("sweep needs non-empty T and dt grids");
  Lattice lattice({config.nx, config.ny});
  QubitMap map(lattice);
  SimOptions sim;
  sim.backend = config.backend == RunBackend::Mps ? BackendKind::Mps
                                                  : BackendKind::Statevector;
  sim.chi_max = config.chi_max;
  SweepResult result =
      sweep(lattice, map, final_couplings(config), spec.total_times, spec.dts,
            config.path == AdiabaticPath::FullRamp, sim);

  std::filesystem::create_directories(config.outdir);
  std::string csv_path = config.outdir + "/sweep.csv";
  {
    std::ofstream os(csv_path);
    os << result.to_csv();
  }
  {
    // Companion plot script over the CSV, heat-map layout.
    std::ofstream os(config.outdir + "/plot_sweep.gp");
    os << "# gnuplot script for the (T, dt) error map\n"
       << "set datafile separator ','\n"
       << "set xlabel 'T'\n"
       << "set ylabel 'dt'\n"
       << "set cblabel 'delta E (%)'\n"
       << "set cbrange [0:100]\n"
       << "set view map\n"
       << "splot 'sweep.csv' every ::1 using 1:2:4 with points pt 5 ps 3 "
          "palette notitle\n";
  }
  return csv_path;
}

namespace {

struct BenchRow {
  int nx;
  int ny;
  double e0_ref;
  double ed_ref;
  double sv_ref;
  double mps_ref;
  int chi;
  bool large;
};

// Reference ground energies per site at t=1, U: 0 -> 0.5, lambda = 0,
// T = 1, N = 40.
const BenchRow kBenchRows[] = {
    {1, 1, -1.2083, -1.2125, -1.2118, -1.2119, 64, false},
    {2, 1, -1.2433, -1.2474, -1.2466, -1.2467, 512, false},
    {1, 3, -1.2641, 0.0, -1.2674, -1.2675, 512, true},
    {3, 1, -1.2545, 0.0, -1.2577, -1.2571, 1536, true},
    {2, 2, -1.2815, 0.0, -1.2847, -1.2842, 1512, true},
    {1, 4, -1.2746, 0.0, 0.0, -1.2778, 512, true},
    {4, 1, -1.2509, 0.0, 0.0, -1.2445, 1000, true},
};

void print_bench_line(std::ostream& os, const std::string& what, double ref,
                      double got) {
  os << "  " << std::left << std::setw(22) << what << std::right
     << " reference " << std::setw(10) << std::fixed << std::setprecision(4)
     << ref << "   computed " << std::setw(12) << std::setprecision(6) << got
     << "   |diff| " << std::setprecision(6) << std::abs(got - ref) << "\n";
}

}  // namespace

int run_bench(const std::string& preset, bool include_large, std::ostream& os) {
  if (preset == "table2") {
    for (const BenchRow& row : kBenchRows) {
      if (row.large && !include_large) continue;
      os << row.nx << "x" << row.ny << " lattice\n";
      RunConfig base;
      base.nx = row.nx;
      base.ny = row.ny;
      base.u = 0.5;
      base.lambda = 0.0;
      base.total_time = 1.0;
      base.steps = 40;
      base.outdir = "out/bench-" + std::to_string(row.nx) + "x" +
                    std::to_string(row.ny);

      Lattice lattice({row.nx, row.ny});
      QubitMap map(lattice);
      const int n = map.total_qubits();
      const Couplings couplings{1.0, 0.5, 0.0};

      // E0: tight-binding state measured with the full Hamiltonian.
      GivensCircuit prep_circuit = prep_circuit_for(base, lattice, map);
      auto groups = build_groups(lattice, map);
      {
        auto tb_state = prepare(prep_circuit, SimOptions{});
        EnergyReport rep =
            total_energy(*tb_state, groups, couplings, lattice.num_sites());
        print_bench_line(os, "E0 per site", row.e0_ref, rep.per_site);
      }
      if (n <= 24 && row.ed_ref != 0.0) {
        SparseHamiltonian h = build_hamiltonian(lattice, map, couplings);
        EdResult ed = ground_state_ed(h);
        print_bench_line(os, "ED per site", row.ed_ref,
                         ed.energy / lattice.num_sites());
      }
      if (row.sv_ref != 0.0) {
        RunConfig cfg = base;
        cfg.backend = RunBackend::Sv;
        cfg.reference = "off";
        try {
          RunArtifacts art = run(cfg);
          print_bench_line(os, "SV circuit per site", row.sv_ref,
                           art.final_energy_per_site);
        } catch (const CapacityError& ex) {
          os << "  SV circuit            skipped: " << ex.what() << "\n";
        }
      }
      if (row.mps_ref != 0.0 && (!row.large || include_large) &&
          (row.chi <= 64 || include_large)) {
        RunConfig cfg = base;
        cfg.backend = RunBackend::Mps;
        cfg.chi_max = row.chi;
        cfg.reference = "off";
        RunArtifacts art = run(cfg);
        std::ostringstream what;
        what << "MPS[" << row.chi << "] per site";
        print_bench_line(os, what.str(), row.mps_ref, art.final_energy_per_site);
        os << "    fidelity ledger " << std::setprecision(6)
           << art.fidelity_ledger << "\n";
      }
    }
    return 0;
  }
  if (preset == "fig7") {
    // MPS fidelity against the dense backend as the bond cap shrinks.
    RunConfig base;
    base.u = 0.5;
    base.total_time = 1.0;
    base.steps = 40;
    base.reference = "off";
    base.outdir = "out/bench-fig7";

    Lattice lattice({1, 1});
    QubitMap map(lattice);
    StepPlans plans = compile_plans(lattice, map);
    GivensCircuit prep_circuit = prep_circuit_for(base, lattice, map);
    Schedule schedule = make_schedule(base);
    auto sv_state = prepare(prep_circuit, SimOptions{});
    evolve_circuit(plans, lattice, map, final_couplings(base), schedule,
                   *sv_state);

    os << "chi_max, fidelity vs dense, fidelity ledger\n";
    double prev = 1.1;
    bool monotone = true;
    for (int chi : {64, 32, 16, 8, 4, 2}) {
      SimOptions sim;
      sim.backend = BackendKind::Mps;
      sim.chi_max = chi;
      auto mps_state = prepare(prep_circuit, sim);
      evolve_circuit(plans, lattice, map, final_couplings(base), schedule,
                     *mps_state);
      double f = fidelity(*mps_state, *sv_state);
      monotone = monotone && f <= prev + 1e-9;
      prev = f;
      os << std::setw(7) << chi << ", " << std::fixed << std::setprecision(9)
         << f << ", " << mps_state->fidelity_ledger() << "\n";
    }
    os << (monotone ? "fidelity non-increasing as chi_max decreases\n"
                    : "warning: fidelity not monotone in chi_max\n");
    return monotone ? 0 : 3;
  }
  throw ConfigError("unknown bench preset: " + preset +
                    " (expected table2 or fig7)");
}

std::string compile_plan_text(int nx, int ny, const std::string& part) {
  HamiltonianPart p;
  if (part == "coulomb") p = HamiltonianPart::Coulomb;
  else if (part == "hopping") p = HamiltonianPart::Hopping;
  else if (part == "spin-orbit") p = HamiltonianPart::SpinOrbit;
  else throw ConfigError("part must be coulomb, hopping or spin-orbit");
  Lattice lattice({nx, ny});
  QubitMap map(lattice);
  TrotterPlan plan = compile_step(lattice, map, p);
  PlanReport report = verify_plan(plan, lattice, map);
  std::ostringstream os;
  os << export_plan_table(plan, lattice, map);
  os << "verification: "
     << (report.ok() ? "identity permutation, every term exactly once"
                     : "FAILED")
     << "\n";
  for (const auto& problem : report.problems) os << "  " << problem << "\n";
  return os.str();
}

std::string prep_check_text(const RunConfig& config) {
  validate(config);
  Lattice lattice({config.nx, config.ny});
  QubitMap map(lattice);
  const Schedule schedule = make_schedule(config);
  const double lambda0 = config.start == StartHamiltonian::TightBinding
                             ? schedule.lambda_at(0.0)
                             : 0.0;
  QuadraticHamiltonian q = quadratic_matrix(lattice, map, config.t, lambda0);
  OrbitalBasis basis = occupied_orbitals(q);
  GivensCircuit circuit = givens_compile(basis);

  std::ostringstream os;
  os.precision(12);
  os << "single-particle modes: " << basis.eigenvalues.size() << "\n";
  os << "occupied modes: " << basis.occupied.size() << "\n";
  double sum_occ = 0.0;
  for (int k : basis.occupied) sum_occ += basis.eigenvalues(k);
  os << "sum of occupied energies: " << sum_occ << "\n";
  os << "givens rotations: " << circuit.rotation_count << " in "
     << circuit.layers.size() << " layers\n";

  const int n = map.total_qubits();
  if (n <= 20) {
    auto state = prepare(circuit, SimOptions{});
    SparseHamiltonian h_tb = build_hamiltonian(
        lattice, map, Couplings{config.t, 0.0, lambda0});
    Eigen::VectorXcd dense = state->to_dense();
    double e = h_tb.expectation(dense);
    Eigen::VectorXcd hv = h_tb.apply(dense);
    double var = hv.squaredNorm() - e * e;
    os << "prepared energy: " << e << "\n";
    os << "energy variance: " << var << "\n";
  }
  return os.str();
}

}  // namespace agsim
