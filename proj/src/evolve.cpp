#include "agsim/evolve.hpp"

#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "agsim/lanczos.hpp"
#include "agsim/measure.hpp"
#include "agsim/prep.hpp"

namespace agsim {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double csv_num(double v) { return v; }
}  // namespace

Schedule Schedule::coulomb_only(double total_time, int steps, double u_final,
                                double lambda_fixed) {
  Schedule s;
  s.total_time = total_time;
  s.steps = steps;
  s.u_start = 0.0;
  s.u_end = u_final;
  s.lambda_start = lambda_fixed;
  s.lambda_end = lambda_fixed;
  return s;
}

Schedule Schedule::full_ramp(double total_time, int steps, double u_final,
                             double lambda_final) {
  Schedule s;
  s.total_time = total_time;
  s.steps = steps;
  s.u_start = 0.0;
  s.u_end = u_final;
  s.lambda_start = 0.0;
  s.lambda_end = lambda_final;
  return s;
}

double delta_e(double target_energy, double initial_energy,
               double measured_energy) {
  double gap = target_energy - initial_energy;
  if (gap == 0.0)
    throw std::invalid_argument("delta_e: zero initial-to-target gap");
  return std::abs((target_energy - measured_energy) / gap) * 100.0;
}

Eigen::VectorXcd expm_multiply(const SparseHamiltonian& h,
                               const Eigen::VectorXcd& v, double dt,
                               double tol, int max_krylov) {
  const double vnorm = v.norm();
  if (vnorm == 0.0) return v;
  const int dim_cap = static_cast<int>(
      std::min<std::uint64_t>(h.dimension(), static_cast<std::uint64_t>(max_krylov)));

  std::vector<Eigen::VectorXcd> basis{v / vnorm};
  std::vector<double> alpha, beta;
  Eigen::VectorXcd prev_result;
  const Complex minus_i{0.0, -1.0};

  auto assemble = [&](int m) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      t(i, i) = alpha[i];
      if (i + 1 < m) {
        t(i, i + 1) = beta[i];
        t(i + 1, i) = beta[i];
      }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    Eigen::VectorXcd phases(m);
    for (int i = 0; i < m; ++i)
      phases[i] = std::exp(minus_i * es.eigenvalues()(i) * dt);
    Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(m);
    e1(0) = 1.0;
    Eigen::VectorXcd small = es.eigenvectors().cast<Complex>() *
                             (phases.asDiagonal() *
                              (es.eigenvectors().transpose().cast<Complex>() * e1));
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (int i = 0; i < m; ++i) out += small(i) * basis[i];
    return Eigen::VectorXcd(out * vnorm);
  };

  for (int j = 0; j < dim_cap; ++j) {
    Eigen::VectorXcd w = h.apply(basis[j]);
    double a = basis[j].dot(w).real();
    alpha.push_back(a);
    w -= a * basis[j];
    if (j > 0) w -= beta[j - 1] * basis[j - 1];
    // One extra orthogonalisation sweep keeps the short recurrence honest.
    for (int i = 0; i <= j; ++i) w -= basis[i].dot(w) * basis[i];
    double b = w.norm();
    if (b < 1e-14) return assemble(j + 1);  // invariant subspace, exact
    beta.push_back(b);
    if (j + 1 >= dim_cap) break;
    basis.push_back(w / b);

    const int m = j + 2;
    if (m % 6 == 0 || m == dim_cap) {
      Eigen::VectorXcd result = assemble(m);
      if (prev_result.size() > 0 &&
          (result - prev_result).norm() <= tol * vnorm)
        return result;
      prev_result = std::move(result);
    }
  }
  if (prev_result.size() > 0) return prev_result;
  return assemble(static_cast<int>(alpha.size()));
}

namespace {

TraceRecord make_record(int step, const Schedule& schedule, double energy,
                        int num_sites,
                        const std::optional<EvolveReference>& reference,
                        double fid) {
  TraceRecord rec;
  rec.step = step;
  rec.s = schedule.steps == 0 ? 0.0 : double(step) / schedule.steps;
  rec.energy_total = energy;
  rec.energy_per_site = energy / num_sites;
  rec.delta_e_percent = kNan;
  rec.fidelity = fid;
  if (reference)
    rec.delta_e_percent =
        delta_e(reference->target_energy, reference->initial_energy, energy);
  return rec;
}

}  // namespace

Trace evolve_exact(const Lattice& lattice, const QubitMap& map,
                   const Couplings& final_couplings, const Schedule& schedule,
                   Eigen::VectorXcd psi,
                   const std::optional<EvolveReference>& reference,
                   Eigen::VectorXcd* final_state) {
  SparseHamiltonian h_final = build_hamiltonian(lattice, map, final_couplings);
  const int sites = lattice.num_sites();
  Trace trace;

  auto fid = [&](const Eigen::VectorXcd& v) {
    if (!reference || !reference->has_state) return kNan;
    return std::norm(reference->target_state.dot(v));
  };

  trace.records.push_back(make_record(0, schedule, h_final.expectation(psi),
                                      sites, reference, fid(psi)));
  const double dt = schedule.dt();
  for (int j = 0; j < schedule.steps; ++j) {
    const double s = double(j) / schedule.steps;
    Couplings c;
    c.t = final_couplings.t;
    c.u = schedule.u_at(s);
    c.lambda_r = schedule.lambda_at(s);
    SparseHamiltonian h_s = build_hamiltonian(lattice, map, c);
    psi = expm_multiply(h_s, psi, dt);
    trace.records.push_back(make_record(j + 1, schedule, h_final.expectation(psi),
                                        sites, reference, fid(psi)));
  }
  if (final_state) *final_state = std::move(psi);
  return trace;
}

StepPlans compile_plans(const Lattice& lattice, const QubitMap& map) {
  StepPlans plans;
  plans.coulomb = compile_step(lattice, map, HamiltonianPart::Coulomb);
  plans.hopping = compile_step(lattice, map, HamiltonianPart::Hopping);
  plans.spin_orbit = compile_step(lattice, map, HamiltonianPart::SpinOrbit);
  return plans;
}

namespace {

// Evolution gate of one placed interaction for time dt. Signs follow the
// term operators: exp(-i dt H_term).
Mat4 interaction_gate(const PlacedInteraction& pi, const Lattice& lattice,
                      const Couplings& c, double dt) {
  switch (pi.part) {
    case HamiltonianPart::Coulomb:
      return u_coulomb(dt, c.u);
    case HamiltonianPart::Hopping:
      // Term -t (a^dag a + h.c.): evolution is u_hop with the angle sign
      // flipped.
      return u_hop(-dt, c.t);
    case HamiltonianPart::SpinOrbit: {
      const Edge& e = lattice.edges()[pi.edge];
      // Structural coefficient of a^dag_left a_right for this placement.
      Complex coeff =
          Complex{0.0, 1.0} * so_bond_phase(lattice.edge_vector(e), pi.spin_a);
      if (!pi.a_on_left) coeff = std::conj(coeff);
      // u_so exponentiates the block whose |10><01| entry is -i e^{-i phi};
      // matching it to coeff fixes the gate phase.
      double phi = -std::arg(Complex{0.0, 1.0} * coeff);
      return u_so(dt, c.lambda_r, phi);
    }
  }
  throw std::logic_error("unknown interaction part");
}

void append_plan_gates(GateList& gates, const TrotterPlan& plan,
                       const Lattice& lattice, const Couplings& c, double dt) {
  const Mat4 fs = fswap();
  for (const auto& layer : plan.layers) {
    if (const auto* swaps = std::get_if<SwapLayer>(&layer)) {
      for (int p : swaps->positions) gates.push_back(make_gate("fswap", p, fs));
      continue;
    }
    for (const auto& pi : std::get<InteractionLayer>(layer).interactions) {
      const char* label = pi.part == HamiltonianPart::Coulomb ? "u_coulomb"
                          : pi.part == HamiltonianPart::Hopping ? "u_hop"
                                                                 : "u_so";
      gates.push_back(
          make_gate(label, pi.position, interaction_gate(pi, lattice, c, dt)));
    }
  }
}

}  // namespace

GateList step_gates(const StepPlans& plans, const Lattice& lattice,
                    const Couplings& c, const Schedule& schedule, int step) {
  const double s = double(step) / schedule.steps;
  const double dt = schedule.dt();
  Couplings at;
  at.t = c.t;
  at.u = schedule.u_at(s);
  at.lambda_r = schedule.lambda_at(s);
  GateList gates;
  if (at.u != 0.0) append_plan_gates(gates, plans.coulomb, lattice, at, dt);
  append_plan_gates(gates, plans.hopping, lattice, at, dt);
  if (at.lambda_r != 0.0)
    append_plan_gates(gates, plans.spin_orbit, lattice, at, dt);
  return gates;
}

Trace evolve_circuit(const StepPlans& plans, const Lattice& lattice,
                     const QubitMap& map, const Couplings& final_couplings,
                     const Schedule& schedule, QuantumState& state,
                     const std::optional<EvolveReference>& reference) {
  const int sites = lattice.num_sites();
  const int n = map.total_qubits();
  Trace trace;

  const bool dense_energy = n <= 24;
  std::optional<SparseHamiltonian> h_final;
  std::vector<MeasurementGroup> groups;
  if (dense_energy)
    h_final.emplace(build_hamiltonian(lattice, map, final_couplings));
  else
    groups = build_groups(lattice, map);

  auto energy_of = [&](const QuantumState& st) {
    if (dense_energy) return h_final->expectation(st.to_dense());
    return total_energy(st, groups, final_couplings, sites).total;
  };
  auto fid = [&](const QuantumState& st) {
    if (!reference || !reference->has_state || n > 24) return kNan;
    Eigen::VectorXcd dense = st.to_dense();
    return std::norm(reference->target_state.dot(dense)) /
           dense.squaredNorm();
  };

  trace.records.push_back(make_record(0, schedule, energy_of(state), sites,
                                      reference, fid(state)));
  for (int j = 0; j < schedule.steps; ++j) {
    state.apply(step_gates(plans, lattice, final_couplings, schedule, j));
    trace.records.push_back(make_record(j + 1, schedule, energy_of(state),
                                        sites, reference, fid(state)));
  }
  return trace;
}

std::string Trace::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "step,s,energy_total,energy_per_site,delta_e_percent,fidelity\n";
  for (const auto& r : records) {
    os << r.step << "," << csv_num(r.s) << "," << csv_num(r.energy_total)
       << "," << csv_num(r.energy_per_site) << ",";
    if (std::isnan(r.delta_e_percent))
      os << "";
    else
      os << csv_num(r.delta_e_percent);
    os << ",";
    if (std::isnan(r.fidelity))
      os << "";
    else
      os << csv_num(r.fidelity);
    os << "\n";
  }
  return os.str();
}

std::string SweepResult::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "T,dt,N,delta_e_percent,above_100_percent,wall_time_s,error\n";
  for (const auto& p : points) {
    os << p.total_time << "," << p.dt << "," << p.steps << ",";
    if (p.error.empty())
      os << p.delta_e_percent << "," << (p.above_100_percent ? 1 : 0);
    else
      os << "," << 0;
    os << "," << p.wall_time_s << "," << p.error << "\n";
  }
  return os.str();
}

SweepResult sweep(const Lattice& lattice, const QubitMap& map,
                  const Couplings& final_couplings,
                  const std::vector<double>& total_times,
                  const std::vector<double>& dts, bool ramp_lambda,
                  const SimOptions& options, int workers) {
  if (total_times.empty() || dts.empty())
    throw std::invalid_argument("sweep grid must be non-empty");
  if (workers <= 0)
    workers = std::max(1u, std::thread::hardware_concurrency());

  // Shared problem setup: initial state circuit and the reference energies.
  StepPlans plans = compile_plans(lattice, map);
  Couplings start = final_couplings;
  start.u = 0.0;
  if (ramp_lambda) start.lambda_r = 0.0;
  QuadraticHamiltonian q =
      quadratic_matrix(lattice, map, final_couplings.t, start.lambda_r);
  OrbitalBasis basis = occupied_orbitals(q);
  GivensCircuit prep_circuit = givens_compile(basis);

  SparseHamiltonian h_final = build_hamiltonian(lattice, map, final_couplings);
  EdResult ed = ground_state_ed(h_final);
  EvolveReference ref;
  ref.target_energy = ed.energy;
  auto probe = prepare(prep_circuit, SimOptions{});
  ref.initial_energy = h_final.expectation(probe->to_dense());

  struct Task {
    double total_time;
    double dt_req;
  };
  std::vector<Task> tasks;
  for (double T : total_times)
    for (double dt : dts) tasks.push_back({T, dt});

  auto run_point = [&](const Task& task) {
    SweepPoint point;
    point.total_time = task.total_time;
    auto t0 = std::chrono::steady_clock::now();
    try {
      int steps = std::max(1, static_cast<int>(std::lround(task.total_time / task.dt_req)));
      Schedule schedule;
      schedule.total_time = task.total_time;
      schedule.steps = steps;
      schedule.u_start = 0.0;
      schedule.u_end = final_couplings.u;
      schedule.lambda_start = ramp_lambda ? 0.0 : final_couplings.lambda_r;
      schedule.lambda_end = final_couplings.lambda_r;
      point.dt = schedule.dt();
      point.steps = steps;
      auto state = prepare(prep_circuit, options);
      Trace trace = evolve_circuit(plans, lattice, map, final_couplings,
                                   schedule, *state, ref);
      point.delta_e_percent = trace.records.back().delta_e_percent;
      point.above_100_percent = point.delta_e_percent > 100.0;
    } catch (const std::exception& ex) {
      point.error = ex.what();
    }
    point.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return point;
  };

  SweepResult result;
  result.points.resize(tasks.size());
  std::size_t next = 0;
  while (next < tasks.size()) {
    std::size_t batch = std::min<std::size_t>(workers, tasks.size() - next);
    std::vector<std::future<SweepPoint>> futures;
    for (std::size_t i = 0; i < batch; ++i)
      futures.push_back(std::async(std::launch::async, run_point,
                                   tasks[next + i]));
    for (std::size_t i = 0; i < batch; ++i)
      result.points[next + i] = futures[i].get();
    next += batch;
  }
  return result;
}

}  // namespace agsim
