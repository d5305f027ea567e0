#ifndef AGSIM_PREP_HPP
#define AGSIM_PREP_HPP

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "agsim/gates.hpp"
#include "agsim/lattice.hpp"
#include "agsim/state.hpp"

namespace agsim {

// Single-particle matrix of the quadratic tight-binding Hamiltonian over
// spin-orbitals in Jordan-Wigner chain order; the pairing block is zero for
// this problem.
struct QuadraticHamiltonian {
  Eigen::MatrixXcd m;
};

QuadraticHamiltonian quadratic_matrix(const Lattice& lattice,
                                      const QubitMap& map, double t,
                                      double lambda_r);

struct OrbitalBasis {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // columns
  std::vector<int> occupied;     // negative modes, zero modes per policy
};

// Gaussian ground state occupation: fill the negative modes. Modes with
// |eps| < zero_tol are excluded unless `include_zero_modes`.
OrbitalBasis occupied_orbitals(const QuadraticHamiltonian& q,
                               double zero_tol = 1e-10,
                               bool include_zero_modes = false);

struct GivensRotation {
  int position = 0;  // acts on chain modes (position, position+1)
  Mat4 gate;
};

struct GivensCircuit {
  int n_qubits = 0;
  std::string initial_bits;  // occupation loaded before the rotations
  std::vector<std::vector<GivensRotation>> layers;
  int rotation_count = 0;
};

// Decomposes the occupied-orbital matrix into nearest-neighbour Givens
// rotations (QR-style elimination scheduled into parallel layers). Applying
// the circuit to the occupation basis state yields the Slater determinant.
GivensCircuit givens_compile(const OrbitalBasis& basis);

GateList to_gate_list(const GivensCircuit& circuit);

std::unique_ptr<QuantumState> prepare(const GivensCircuit& circuit,
                                      const SimOptions& options);

}  // namespace agsim

#endif
