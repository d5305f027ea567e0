#ifndef AGSIM_EVOLVE_HPP
#define AGSIM_EVOLVE_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "agsim/hamiltonian.hpp"
#include "agsim/lattice.hpp"
#include "agsim/netcompile.hpp"
#include "agsim/state.hpp"

namespace agsim {

// Linear interpolation H(s) = H_H + H_SO(lambda(s)) + H_C(u(s)) with
// s = t/T over `steps` equal slices of size dt = T/steps. Step j uses the
// left endpoint s_j = j/steps.
struct Schedule {
  double total_time = 1.0;
  int steps = 1;
  double u_start = 0.0;
  double u_end = 0.0;
  double lambda_start = 0.0;
  double lambda_end = 0.0;

  double dt() const { return total_time / steps; }
  double u_at(double s) const { return u_start + (u_end - u_start) * s; }
  double lambda_at(double s) const {
    return lambda_start + (lambda_end - lambda_start) * s;
  }

  // The recommended path: the Coulomb term is ramped in, lambda held fixed.
  static Schedule coulomb_only(double total_time, int steps, double u_final,
                               double lambda_fixed);
  // Both the Coulomb and spin-orbit couplings ramp from zero.
  static Schedule full_ramp(double total_time, int steps, double u_final,
                            double lambda_final);
};

struct TraceRecord {
  int step = 0;
  double s = 0.0;
  double energy_total = 0.0;
  double energy_per_site = 0.0;
  double delta_e_percent = 0.0;  // NaN without a reference
  double fidelity = 0.0;         // vs. the target state, NaN without one
};

struct Trace {
  std::vector<TraceRecord> records;
  double final_energy() const { return records.back().energy_total; }
  std::string to_csv() const;
};

// Optional exact-diagonalization reference for error and fidelity columns.
struct EvolveReference {
  double target_energy = 0.0;
  double initial_energy = 0.0;
  Eigen::VectorXcd target_state;
  bool has_state = false;
};

// Relative energy error in percent, normalised by the initial-to-target
// gap. Throws when the gap vanishes.
double delta_e(double target_energy, double initial_energy,
               double measured_energy);

// exp(-i h dt) v via a Lanczos-Krylov expansion, adaptive to `tol`.
Eigen::VectorXcd expm_multiply(const SparseHamiltonian& h,
                               const Eigen::VectorXcd& v, double dt,
                               double tol = 1e-10, int max_krylov = 96);

// Adiabatic evolution with the stepwise matrix exponential of H(s_j).
// Energies along the trace are measured with the final Hamiltonian.
Trace evolve_exact(const Lattice& lattice, const QubitMap& map,
                   const Couplings& final_couplings, const Schedule& schedule,
                   Eigen::VectorXcd psi,
                   const std::optional<EvolveReference>& reference = {},
                   Eigen::VectorXcd* final_state = nullptr);

struct StepPlans {
  TrotterPlan coulomb;
  TrotterPlan hopping;
  TrotterPlan spin_orbit;
};

StepPlans compile_plans(const Lattice& lattice, const QubitMap& map);

// Gate stream for one Trotter step: Coulomb, then hopping, then spin-orbit,
// at the schedule's step-j couplings.
GateList step_gates(const StepPlans& plans, const Lattice& lattice,
                    const Couplings& c, const Schedule& schedule, int step);

// Trotterized circuit evolution on a simulation backend. The state is
// evolved in place; energies come from the exact-diagonalization term list
// on dense backends and from the measurement groups on MPS.
Trace evolve_circuit(const StepPlans& plans, const Lattice& lattice,
                     const QubitMap& map, const Couplings& final_couplings,
                     const Schedule& schedule, QuantumState& state,
                     const std::optional<EvolveReference>& reference = {});

struct SweepPoint {
  double total_time = 0.0;
  double dt = 0.0;
  int steps = 0;
  double delta_e_percent = 0.0;
  bool above_100_percent = false;
  double wall_time_s = 0.0;
  std::string error;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::string to_csv() const;
};

// Runs the (T, dt) grid of circuit evolutions against a fixed problem; grid
// points fan out over a worker pool and land in deterministic order.
SweepResult sweep(const Lattice& lattice, const QubitMap& map,
                  const Couplings& final_couplings,
                  const std::vector<double>& total_times,
                  const std::vector<double>& dts, bool ramp_lambda,
                  const SimOptions& options, int workers = 0);

}  // namespace agsim

#endif
