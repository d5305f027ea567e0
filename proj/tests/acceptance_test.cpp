// Acceptance suite: runs every stated criterion at its stated tolerance and
// prints one pass/fail line each. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "agsim/evolve.hpp"
#include "agsim/lanczos.hpp"
#include "agsim/measure.hpp"
#include "agsim/netcompile.hpp"
#include "agsim/prep.hpp"
#include "agsim/runner.hpp"

using namespace agsim;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& what, bool pass,
            const std::string& detail) {
  std::printf("%s  criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", criterion,
              what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

struct PipelineResult {
  double e0_per_site = 0.0;
  double ed_per_site = 0.0;
  double sv_per_site = 0.0;
  Eigen::VectorXcd tb_state;
  EdResult ed;
};

// Shared prepare/ED/SV pipeline at t=1, U: 0 -> u_final, lambda = 0,
// measured through the seventeen groups with exact probabilities.
PipelineResult run_pipeline(int nx, int ny, double u_final, double total_time,
                            int steps) {
  PipelineResult out;
  Lattice lattice({nx, ny});
  QubitMap map(lattice);
  Couplings couplings{1.0, u_final, 0.0};
  auto groups = build_groups(lattice, map);

  GivensCircuit prep_circuit =
      givens_compile(occupied_orbitals(quadratic_matrix(lattice, map, 1.0, 0.0)));
  auto tb = prepare(prep_circuit, SimOptions{});
  out.tb_state = tb->to_dense();
  out.e0_per_site =
      total_energy(*tb, groups, couplings, lattice.num_sites()).per_site;

  SparseHamiltonian h = build_hamiltonian(lattice, map, couplings);
  out.ed = ground_state_ed(h);
  {
    auto ed_state = make_statevector(out.ed.state);
    out.ed_per_site =
        total_energy(*ed_state, groups, couplings, lattice.num_sites()).per_site;
  }

  StepPlans plans = compile_plans(lattice, map);
  Schedule schedule = Schedule::coulomb_only(total_time, steps, u_final, 0.0);
  auto sv = make_statevector(out.tb_state);
  evolve_circuit(plans, lattice, map, couplings, schedule, *sv);
  out.sv_per_site =
      total_energy(*sv, groups, couplings, lattice.num_sites()).per_site;
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

int main() {
  const auto t_start = std::chrono::steady_clock::now();

  // ---- 1. one-hexagon reference row ------------------------------------
  {
    PipelineResult r = run_pipeline(1, 1, 0.5, 1.0, 40);

    Lattice lattice({1, 1});
    QubitMap map(lattice);
    Couplings couplings{1.0, 0.5, 0.0};
    auto groups = build_groups(lattice, map);
    GivensCircuit prep_circuit = givens_compile(
        occupied_orbitals(quadratic_matrix(lattice, map, 1.0, 0.0)));
    SimOptions mps_options;
    mps_options.backend = BackendKind::Mps;
    mps_options.chi_max = 64;
    auto mps = prepare(prep_circuit, mps_options);
    StepPlans plans = compile_plans(lattice, map);
    Schedule schedule = Schedule::coulomb_only(1.0, 40, 0.5, 0.0);
    evolve_circuit(plans, lattice, map, couplings, schedule, *mps);
    double mps_per_site =
        total_energy(*mps, groups, couplings, lattice.num_sites()).per_site;

    bool pass = std::abs(r.e0_per_site - (-1.2083)) <= 1e-3 &&
                std::abs(r.ed_per_site - (-1.2125)) <= 1e-3 &&
                std::abs(r.sv_per_site - (-1.2118)) <= 1e-3 &&
                std::abs(mps_per_site - (-1.2119)) <= 1e-3;
    report(1, "1x1 reference energies (E0, ED, SV, MPS[64])", pass,
           "E0 " + fmt(r.e0_per_site) + ", ED " + fmt(r.ed_per_site) + ", SV " +
               fmt(r.sv_per_site) + ", MPS " + fmt(mps_per_site));
  }

  // ---- 2. two-hexagon row (20 qubits) ----------------------------------
  {
    PipelineResult r = run_pipeline(2, 1, 0.5, 1.0, 40);
    bool pass = std::abs(r.e0_per_site - (-1.2433)) <= 1e-3 &&
                std::abs(r.ed_per_site - (-1.2474)) <= 1e-3 &&
                std::abs(r.sv_per_site - (-1.2466)) <= 1e-3;
    report(2, "2x1 reference energies (E0, ED, SV)", pass,
           "E0 " + fmt(r.e0_per_site) + ", ED " + fmt(r.ed_per_site) + ", SV " +
               fmt(r.sv_per_site));
  }

  // ---- 3. analytic cross-check E0 = -4/3 + U/4 -------------------------
  {
    Lattice lattice({1, 1});
    QubitMap map(lattice);
    auto groups = build_groups(lattice, map);
    GivensCircuit prep_circuit = givens_compile(
        occupied_orbitals(quadratic_matrix(lattice, map, 1.0, 0.0)));
    auto tb = prepare(prep_circuit, SimOptions{});
    bool pass = true;
    double worst = 0.0;
    for (double u : {0.1, 0.5, 1.0, 3.7}) {
      double per_site =
          total_energy(*tb, groups, Couplings{1.0, u, 0.0}, 6).per_site;
      double err = std::abs(per_site - (-4.0 / 3.0 + u / 4.0));
      worst = std::max(worst, err);
      pass = pass && err <= 1e-9;
    }
    report(3, "measured E0 equals -4/3 + U/4", pass,
           "max deviation " + std::to_string(worst));
  }

  // ---- 4. error-region thresholds --------------------------------------
  {
    // The 10% box holds at either published coupling; the 1% threshold is a
    // property of the U: 0 -> 1 example and is pinned at its stated N = 120
    // point (T = 3, dt = 0.025). The energy error oscillates with T, so a
    // single interior grid point is not a faithful reading of the region.
    Lattice lattice({1, 1});
    QubitMap map(lattice);
    GivensCircuit prep_circuit = givens_compile(
        occupied_orbitals(quadratic_matrix(lattice, map, 1.0, 0.0)));
    Eigen::VectorXcd tb = prepare(prep_circuit, SimOptions{})->to_dense();
    StepPlans plans = compile_plans(lattice, map);

    auto run_point = [&](double u_final, double total_time, double dt) {
      Couplings couplings{1.0, u_final, 0.0};
      SparseHamiltonian h = build_hamiltonian(lattice, map, couplings);
      EdResult ed = ground_state_ed(h);
      double e0 = h.expectation(tb);
      int steps = static_cast<int>(std::lround(total_time / dt));
      Schedule s = Schedule::coulomb_only(total_time, steps, u_final, 0.0);
      auto sv = make_statevector(tb);
      Trace t = evolve_circuit(plans, lattice, map, couplings, s, *sv);
      return delta_e(ed.energy, e0, t.final_energy());
    };
    double at_10_half = run_point(0.5, 2.0, 0.025);
    double at_10_full = run_point(1.0, 2.0, 0.025);
    double at_1_n120 = run_point(1.0, 3.0, 0.025);
    double info_t4 = run_point(1.0, 4.0, 0.02);
    bool pass = at_10_half <= 10.0 && at_10_full <= 10.0 && at_1_n120 <= 1.0;
    report(4, "delta E thresholds: 10% at (T=2, dt=0.025); 1% at N=120", pass,
           "10%: " + fmt(at_10_half) + " % (U=0.5), " + fmt(at_10_full) +
               " % (U=1); 1%: " + fmt(at_1_n120) + " % at N=120, " +
               fmt(info_t4) + " % at (T=4, dt=0.02)");
  }

  // ---- 5. first-order Trotter convergence ------------------------------
  {
    Lattice lattice({1, 1});
    QubitMap map(lattice);
    Couplings couplings{1.0, 0.5, 0.0};
    GivensCircuit prep_circuit = givens_compile(
        occupied_orbitals(quadratic_matrix(lattice, map, 1.0, 0.0)));
    Eigen::VectorXcd tb = prepare(prep_circuit, SimOptions{})->to_dense();
    StepPlans plans = compile_plans(lattice, map);

    std::vector<double> infidelities;
    for (double dt : {0.05, 0.025, 0.0125}) {
      int steps = static_cast<int>(std::lround(1.0 / dt));
      Schedule s = Schedule::coulomb_only(1.0, steps, 0.5, 0.0);
      Eigen::VectorXcd exact_final;
      evolve_exact(lattice, map, couplings, s, tb, {}, &exact_final);
      auto sv = make_statevector(tb);
      evolve_circuit(plans, lattice, map, couplings, s, *sv);
      infidelities.push_back(1.0 -
                             std::norm(exact_final.dot(sv->to_dense())));
    }
    double r1 = infidelities[0] / infidelities[1];
    double r2 = infidelities[1] / infidelities[2];
    bool pass = r1 >= 1.8 && r2 >= 1.8;
    report(5, "halving dt shrinks circuit-vs-exact infidelity by >= 1.8", pass,
           "ratios " + fmt(r1) + ", " + fmt(r2));
  }

  // ---- 6. swap-network golden schedule and coverage --------------------
  {
    Lattice lattice({1, 2});
    QubitMap map(lattice);
    TrotterPlan plan = compile_step(lattice, map, HamiltonianPart::Hopping);
    std::string table = export_plan_table(plan, lattice, map);
    bool golden = table.find("Horizontal interaction (2, 4)") != std::string::npos &&
                  table.find("Vertical interaction (0, 11)") != std::string::npos &&
                  table.find("Extra permutation step") != std::string::npos &&
                  plan.snapshots.size() == 9 &&
                  plan.snapshots.front().ordering ==
                      plan.snapshots.back().ordering;

    bool verified = true;
    for (int nx = 1; nx <= 4 && verified; ++nx)
      for (int ny = 1; ny <= 4 && verified; ++ny) {
        Lattice l({nx, ny});
        QubitMap m(l);
        for (HamiltonianPart part :
             {HamiltonianPart::Coulomb, HamiltonianPart::Hopping,
              HamiltonianPart::SpinOrbit}) {
          PlanReport rep = verify_plan(compile_step(l, m, part), l, m);
          verified = verified && rep.ok();
        }
      }
    report(6, "golden two-hexagon schedule and [1,4]^2 plan verification",
           golden && verified,
           std::string("golden ") + (golden ? "ok" : "mismatch") +
               ", verification " + (verified ? "ok" : "failed"));
  }

  // ---- 7. measurement equivalence on random states ---------------------
  {
    bool pass = true;
    double worst = 0.0;
    int group_counts_ok = true;
    for (auto [nx, ny, states] : {std::tuple{1, 1, 50}, {1, 2, 50}}) {
      Lattice lattice({nx, ny});
      QubitMap map(lattice);
      auto groups = build_groups(lattice, map);
      group_counts_ok = group_counts_ok && groups.size() == 17;
      Couplings couplings{1.0, 0.5, 0.8};
      SparseHamiltonian h = build_hamiltonian(lattice, map, couplings);
      const int n = map.total_qubits();
      std::mt19937_64 gen(2024 + nx + ny);
      std::normal_distribution<double> dist;
      for (int k = 0; k < states; ++k) {
        Eigen::VectorXcd v(Eigen::Index(1) << n);
        for (Eigen::Index i = 0; i < v.size(); ++i)
          v[i] = Complex(dist(gen), dist(gen));
        v.normalize();
        auto state = make_statevector(v);
        double grouped =
            total_energy(*state, groups, couplings, lattice.num_sites()).total;
        double direct = h.expectation(v);
        double err = std::abs(grouped - direct);
        worst = std::max(worst, err);
        pass = pass && err <= 1e-9;
      }
    }
    report(7, "17-group energy equals the exact expectation on random states",
           pass && group_counts_ok,
           "max |difference| " + std::to_string(worst) + " over 12- and 20-qubit registers");
  }

  // ---- 8. Gaussian preparation correctness ------------------------------
  {
    Lattice lattice({1, 1});
    QubitMap map(lattice);
    SparseHamiltonian h_tb = build_hamiltonian(lattice, map, {1.0, 0.0, 0.0});
    GivensCircuit prep_circuit = givens_compile(
        occupied_orbitals(quadratic_matrix(lattice, map, 1.0, 0.0)));
    Eigen::VectorXcd state = prepare(prep_circuit, SimOptions{})->to_dense();
    double e = h_tb.expectation(state);
    double var = h_tb.apply(state).squaredNorm() - e * e;
    EdResult ed = ground_state_ed(h_tb);
    double fid = std::norm(ed.state.dot(state));
    bool pass =
        std::abs(e - (-8.0)) <= 1e-9 && var <= 1e-8 && fid >= 1.0 - 1e-8;
    report(8, "prepared tight-binding state (energy, variance, fidelity)", pass,
           "E " + fmt(e) + ", var " + std::to_string(var) + ", F " +
               std::to_string(fid));
  }

  // ---- 9. MPS soundness --------------------------------------------------
  {
    Lattice lattice({1, 1});
    QubitMap map(lattice);
    Couplings couplings{1.0, 0.5, 0.0};
    StepPlans plans = compile_plans(lattice, map);
    Schedule schedule = Schedule::coulomb_only(1.0, 40, 0.5, 0.0);
    GivensCircuit prep_circuit = givens_compile(
        occupied_orbitals(quadratic_matrix(lattice, map, 1.0, 0.0)));

    auto sv = prepare(prep_circuit, SimOptions{});
    evolve_circuit(plans, lattice, map, couplings, schedule, *sv);
    Eigen::VectorXcd dense = sv->to_dense();

    SimOptions mps_options;
    mps_options.backend = BackendKind::Mps;
    mps_options.chi_max = 64;
    auto mps_full = prepare(prep_circuit, mps_options);
    evolve_circuit(plans, lattice, map, couplings, schedule, *mps_full);
    double amp_err = (mps_full->to_dense() - dense).norm();
    bool untruncated_ok =
        amp_err <= 1e-9 && mps_full->fidelity_ledger() == 1.0;

    bool monotone = true;
    double prev = 1.0 + 1e-12;
    for (int chi : {64, 32, 16, 8, 4, 2}) {
      SimOptions opt;
      opt.backend = BackendKind::Mps;
      opt.chi_max = chi;
      auto mps = prepare(prep_circuit, opt);
      evolve_circuit(plans, lattice, map, couplings, schedule, *mps);
      double f = std::norm(dense.dot(mps->to_dense()));
      monotone = monotone && f <= prev + 1e-9;
      prev = f;
    }
    report(9, "untruncated MPS matches SV; fidelity monotone in chi_max",
           untruncated_ok && monotone,
           "amplitude error " + std::to_string(amp_err) + ", trend " +
               (monotone ? "ok" : "broken"));
  }

  // ---- 10. spin-orbit adiabatic path -------------------------------------
  {
    Lattice lattice({1, 1});
    QubitMap map(lattice);
    Couplings couplings{1.0, 0.5, 1.0};
    SparseHamiltonian h = build_hamiltonian(lattice, map, couplings);
    EdResult ed = ground_state_ed(h);
    GivensCircuit prep_circuit = givens_compile(
        occupied_orbitals(quadratic_matrix(lattice, map, 1.0, 1.0)));
    Eigen::VectorXcd tb = prepare(prep_circuit, SimOptions{})->to_dense();
    double e0 = h.expectation(tb);

    StepPlans plans = compile_plans(lattice, map);
    const double total_time = 3.5, dt = 0.005;
    int steps = static_cast<int>(std::lround(total_time / dt));
    Schedule schedule = Schedule::coulomb_only(total_time, steps, 0.5, 1.0);
    auto sv = make_statevector(tb);
    Trace trace = evolve_circuit(plans, lattice, map, couplings, schedule, *sv);
    double err = delta_e(ed.energy, e0, trace.final_energy());
    report(10, "lambda=1 path reaches delta E <= 10% at (T=3.5, dt=0.005)",
           err <= 10.0, fmt(err) + " %");
  }

  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  std::printf("%d of 10 criteria passed in %.1f s\n", 10 - g_failures, elapsed);
  return g_failures;
}
