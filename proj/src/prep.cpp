#include "agsim/prep.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "agsim/hamiltonian.hpp"

namespace agsim {

QuadraticHamiltonian quadratic_matrix(const Lattice& lattice,
                                      const QubitMap& map, double t,
                                      double lambda_r) {
  const int n = map.total_qubits();
  QuadraticHamiltonian q;
  q.m = Eigen::MatrixXcd::Zero(n, n);
  for (const Edge& e : lattice.edges()) {
    for (Spin s : {Spin::Up, Spin::Down}) {
      int qa = map.qubit_of(e.a, s);
      int qb = map.qubit_of(e.b, s);
      q.m(qa, qb) += Complex{-t, 0.0};
      q.m(qb, qa) += Complex{-t, 0.0};
    }
    if (lambda_r != 0.0) {
      Vec2 d = lattice.edge_vector(e);
      for (Spin s : {Spin::Up, Spin::Down}) {
        int qa = map.qubit_of(e.a, s);
        int qb = map.qubit_of(e.b, flip(s));
        Complex amp = Complex{0.0, 2.0 / 3.0 * lambda_r} * so_bond_phase(d, s);
        q.m(qa, qb) += amp;
        q.m(qb, qa) += std::conj(amp);
      }
    }
  }
  return q;
}

OrbitalBasis occupied_orbitals(const QuadraticHamiltonian& q, double zero_tol,
                               bool include_zero_modes) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(q.m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("orbital eigendecomposition failed");
  OrbitalBasis basis;
  basis.eigenvalues = es.eigenvalues();
  basis.eigenvectors = es.eigenvectors();
  for (int k = 0; k < basis.eigenvalues.size(); ++k) {
    double e = basis.eigenvalues(k);
    if (e < -zero_tol || (include_zero_modes && std::abs(e) <= zero_tol))
      basis.occupied.push_back(k);
  }
  return basis;
}

namespace {

struct Elimination {
  int row = 0;       // rotation acts on orbital-space rows (row-1, row)
  int when = 0;      // parallel schedule slot
  Eigen::Matrix2cd g;
};

// Qubit gate realising the two-mode rotation W on adjacent chain modes:
// block-diagonal in excitation number, identity on |00> and |11>.
Mat4 mode_rotation_gate(const Eigen::Matrix2cd& w) {
  Mat4 m = Mat4::Identity();
  m(1, 1) = w(1, 1);
  m(2, 1) = w(0, 1);
  m(1, 2) = w(1, 0);
  m(2, 2) = w(0, 0);
  return m;
}

}  // namespace

GivensCircuit givens_compile(const OrbitalBasis& basis) {
  const int n = static_cast<int>(basis.eigenvalues.size());
  const int m = static_cast<int>(basis.occupied.size());
  GivensCircuit circuit;
  circuit.n_qubits = n;
  circuit.initial_bits = std::string(m, '1') + std::string(n - m, '0');
  if (m == 0) return circuit;

  Eigen::MatrixXcd a(n, m);
  for (int k = 0; k < m; ++k) a.col(k) = basis.eigenvectors.col(basis.occupied[k]);

  // QR-style elimination with rotations on adjacent rows, column by column
  // from the bottom up; `when = 2k + (n-1-r)` schedules independent
  // rotations into common layers of depth O(n).
  std::vector<Elimination> elims;
  for (int k = 0; k < m; ++k) {
    for (int r = n - 1; r > k; --r) {
      Complex top = a(r - 1, k);
      Complex bot = a(r, k);
      if (std::abs(bot) < 1e-14) continue;
      double rho = std::sqrt(std::norm(top) + std::norm(bot));
      Eigen::Matrix2cd g;
      g << std::conj(top) / rho, std::conj(bot) / rho, -bot / rho, top / rho;
      a.middleRows(r - 1, 2).applyOnTheLeft(g);
      elims.push_back({r, 2 * k + (n - 1 - r), g});
    }
    if (std::abs(a(k, k)) < 1e-8)
      throw std::runtime_error(
          "givens_compile: orbital matrix is numerically rank deficient");
  }

  // The circuit applies the conjugate rotations in reverse schedule order.
  std::map<int, std::vector<GivensRotation>, std::greater<int>> layers;
  for (const Elimination& e : elims) {
    GivensRotation rot;
    rot.position = e.row - 1;
    rot.gate = mode_rotation_gate(e.g.adjoint());
    layers[e.when].push_back(rot);
  }
  for (auto& [when, rots] : layers) {
    (void)when;
    circuit.layers.push_back(std::move(rots));
    circuit.rotation_count += static_cast<int>(circuit.layers.back().size());
  }
  return circuit;
}

GateList to_gate_list(const GivensCircuit& circuit) {
  GateList gates;
  for (const auto& layer : circuit.layers)
    for (const auto& rot : layer)
      gates.push_back(make_gate("givens", rot.position, rot.gate));
  return gates;
}

std::unique_ptr<QuantumState> prepare(const GivensCircuit& circuit,
                                      const SimOptions& options) {
  auto state = init_computational(circuit.n_qubits, circuit.initial_bits, options);
  state->apply(to_gate_list(circuit));
  return state;
}

}  // namespace agsim
