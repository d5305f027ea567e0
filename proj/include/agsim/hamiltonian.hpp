#ifndef AGSIM_HAMILTONIAN_HPP
#define AGSIM_HAMILTONIAN_HPP

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <complex>
#include <cstdint>
#include <vector>

#include "agsim/lattice.hpp"
#include "agsim/pauli.hpp"

namespace agsim {

using Complex = std::complex<double>;

struct Couplings {
  double t = 1.0;        // hopping amplitude
  double u = 0.0;        // on-site Coulomb strength
  double lambda_r = 0.0; // Rashba spin-orbit strength
};

struct TermMask {
  bool hop = true;
  bool coulomb = true;
  bool spin_orbit = true;
};

// amp * a^dag_a a_b + conj(amp) * a^dag_b a_a with mode_a < mode_b in the
// Jordan-Wigner chain order.
struct QuadraticTerm {
  int mode_a = 0;
  int mode_b = 0;
  Complex amp{0.0, 0.0};
};

// u * n_up n_dn on one site's qubit pair.
struct OnSiteTerm {
  int mode_up = 0;
  int mode_dn = 0;
  double u = 0.0;
};

// Jordan-Wigner encoded many-body Hamiltonian held as a fermionic term
// list. The operator is applied matrix-free; an explicit sparse matrix is
// only materialised for small registers. Immutable after build.
class SparseHamiltonian {
 public:
  SparseHamiltonian(int n_qubits, std::vector<QuadraticTerm> quadratic,
                    std::vector<OnSiteTerm> onsite);

  int n_qubits() const { return n_qubits_; }
  std::uint64_t dimension() const { return std::uint64_t(1) << n_qubits_; }
  const std::vector<QuadraticTerm>& quadratic_terms() const {
    return quadratic_;
  }
  const std::vector<OnSiteTerm>& onsite_terms() const { return onsite_; }

  // out += H * in (both of length dimension()).
  void apply_add(const Complex* in, Complex* out) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;

  // <v|H|v>; the imaginary residue must stay below `imag_tol` (asserted)
  // and is discarded.
  double expectation(const Eigen::VectorXcd& v, double imag_tol = 1e-12) const;

  // Explicit matrix, allowed up to 16 qubits.
  Eigen::SparseMatrix<Complex> to_sparse() const;

  // The operator as a sum of Pauli words, one term per line when printed.
  PauliSum to_pauli_sum() const;

 private:
  int n_qubits_;
  std::vector<QuadraticTerm> quadratic_;
  std::vector<OnSiteTerm> onsite_;
};

// Assembles the Fermi-Hubbard Hamiltonian (or a subset of its parts) for
// the lattice. Hopping acts on equal spins across every edge, the Coulomb
// term on each site's (up, down) pair, and the Rashba term on opposite
// spins across every edge with the phase arg(d_y + i d_x) of the bond
// vector. Registers above `max_qubits` are refused.
SparseHamiltonian build_hamiltonian(const Lattice& lattice,
                                    const QubitMap& map, const Couplings& c,
                                    const TermMask& include = {},
                                    int max_qubits = 24);

// Spin-orbit matrix element: coefficient of a^dag_{a,spin_a} a_{b,spin_b'}
// for a bond vector d pointing from site a to site b, without the
// 2/3*lambda prefactor. spin_b is the flipped spin of spin_a.
Complex so_bond_phase(const Vec2& d, Spin spin_a);

}  // namespace agsim

#endif
