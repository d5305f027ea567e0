#include "agsim/hamiltonian.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace agsim {

namespace {
// Bit position of qubit q in an n-qubit register: qubit 0 is the leftmost /
// most significant position throughout the project.
inline int bit_of(int qubit, int n) { return n - 1 - qubit; }

inline int parity(std::uint64_t x) { return std::popcount(x) & 1; }
}  // namespace

SparseHamiltonian::SparseHamiltonian(int n_qubits,
                                     std::vector<QuadraticTerm> quadratic,
                                     std::vector<OnSiteTerm> onsite)
    : n_qubits_(n_qubits),
      quadratic_(std::move(quadratic)),
      onsite_(std::move(onsite)) {
  if (n_qubits_ < 1 || n_qubits_ > 30)
    throw std::invalid_argument("unsupported register size");
  for (const auto& t : quadratic_)
    if (!(0 <= t.mode_a && t.mode_a < t.mode_b && t.mode_b < n_qubits_))
      throw std::invalid_argument("quadratic term modes out of order");
}

void SparseHamiltonian::apply_add(const Complex* in, Complex* out) const {
  const std::uint64_t dim = dimension();
  for (const auto& t : quadratic_) {
    const int bp = bit_of(t.mode_a, n_qubits_);  // higher bit
    const int bq = bit_of(t.mode_b, n_qubits_);  // lower bit
    const std::uint64_t mask_p = std::uint64_t(1) << bp;
    const std::uint64_t mask_q = std::uint64_t(1) << bq;
    const std::uint64_t flip = mask_p | mask_q;
    // JW string: parity of occupied modes strictly between the two.
    const std::uint64_t between = (mask_p - 1) & ~((mask_q << 1) - 1);
    const Complex amp = t.amp;
    const Complex amp_c = std::conj(t.amp);
#pragma omp parallel for schedule(static)
    for (std::int64_t x = 0; x < static_cast<std::int64_t>(dim); ++x) {
      const std::uint64_t ux = static_cast<std::uint64_t>(x);
      const bool occ_p = ux & mask_p;
      const bool occ_q = ux & mask_q;
      if (occ_p == occ_q) continue;
      const double sign = parity(ux & between) ? -1.0 : 1.0;
      // occupied b, empty a: a^dag_a a_b moves the particle up the chain.
      out[ux ^ flip] += (occ_q ? amp : amp_c) * sign * in[ux];
    }
  }
  for (const auto& t : onsite_) {
    const std::uint64_t mask = (std::uint64_t(1) << bit_of(t.mode_up, n_qubits_)) |
                               (std::uint64_t(1) << bit_of(t.mode_dn, n_qubits_));
    const double u = t.u;
#pragma omp parallel for schedule(static)
    for (std::int64_t x = 0; x < static_cast<std::int64_t>(dim); ++x) {
      const std::uint64_t ux = static_cast<std::uint64_t>(x);
      if ((ux & mask) == mask) out[ux] += u * in[ux];
    }
  }
}

Eigen::VectorXcd SparseHamiltonian::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != static_cast<Eigen::Index>(dimension()))
    throw std::invalid_argument("dimension mismatch");
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  apply_add(v.data(), out.data());
  return out;
}

double SparseHamiltonian::expectation(const Eigen::VectorXcd& v,
                                      double imag_tol) const {
  Complex val = v.dot(apply(v));
  if (std::abs(val.imag()) > imag_tol * std::max(1.0, std::abs(val)))
    throw std::runtime_error("expectation value has an imaginary residue");
  return val.real();
}

Eigen::SparseMatrix<Complex> SparseHamiltonian::to_sparse() const {
  if (n_qubits_ > 16)
    throw std::invalid_argument("to_sparse limited to 16 qubits");
  const std::uint64_t dim = dimension();
  std::vector<Eigen::Triplet<Complex>> trip;
  for (const auto& t : quadratic_) {
    const int bp = bit_of(t.mode_a, n_qubits_);
    const int bq = bit_of(t.mode_b, n_qubits_);
    const std::uint64_t mask_p = std::uint64_t(1) << bp;
    const std::uint64_t mask_q = std::uint64_t(1) << bq;
    const std::uint64_t between = (mask_p - 1) & ~((mask_q << 1) - 1);
    for (std::uint64_t x = 0; x < dim; ++x) {
      const bool occ_p = x & mask_p;
      const bool occ_q = x & mask_q;
      if (occ_p == occ_q) continue;
      const double sign = parity(x & between) ? -1.0 : 1.0;
      const std::uint64_t y = x ^ (mask_p | mask_q);
      trip.emplace_back(static_cast<int>(y), static_cast<int>(x),
                        (occ_q ? t.amp : std::conj(t.amp)) * sign);
    }
  }
  for (const auto& t : onsite_) {
    const std::uint64_t mask = (std::uint64_t(1) << bit_of(t.mode_up, n_qubits_)) |
                               (std::uint64_t(1) << bit_of(t.mode_dn, n_qubits_));
    for (std::uint64_t x = 0; x < dim; ++x)
      if ((x & mask) == mask)
        trip.emplace_back(static_cast<int>(x), static_cast<int>(x),
                          Complex{t.u, 0.0});
  }
  Eigen::SparseMatrix<Complex> m(dim, dim);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

PauliSum SparseHamiltonian::to_pauli_sum() const {
  PauliSum out;
  for (const auto& t : quadratic_) {
    auto ad_a = jw_ladder(t.mode_a, LadderKind::Create, n_qubits_);
    auto a_b = jw_ladder(t.mode_b, LadderKind::Annihilate, n_qubits_);
    auto ad_b = jw_ladder(t.mode_b, LadderKind::Create, n_qubits_);
    auto a_a = jw_ladder(t.mode_a, LadderKind::Annihilate, n_qubits_);
    for (auto& p : multiply(ad_a, a_b)) {
      p.coefficient *= t.amp;
      out.push_back(p);
    }
    for (auto& p : multiply(ad_b, a_a)) {
      p.coefficient *= std::conj(t.amp);
      out.push_back(p);
    }
  }
  for (const auto& t : onsite_) {
    auto n_up = multiply(jw_ladder(t.mode_up, LadderKind::Create, n_qubits_),
                         jw_ladder(t.mode_up, LadderKind::Annihilate, n_qubits_));
    auto n_dn = multiply(jw_ladder(t.mode_dn, LadderKind::Create, n_qubits_),
                         jw_ladder(t.mode_dn, LadderKind::Annihilate, n_qubits_));
    for (auto& p : multiply(n_up, n_dn)) {
      p.coefficient *= t.u;
      out.push_back(p);
    }
  }
  return simplify(std::move(out));
}

Complex so_bond_phase(const Vec2& d, Spin spin_a) {
  // [(sigma x d)_z]_{up,down} = d_y + i d_x; the (down, up) element is the
  // conjugate.
  Complex el{d.y, spin_a == Spin::Up ? d.x : -d.x};
  return el;
}

SparseHamiltonian build_hamiltonian(const Lattice& lattice,
                                    const QubitMap& map, const Couplings& c,
                                    const TermMask& include, int max_qubits) {
  const int n = map.total_qubits();
  if (n > max_qubits) {
    std::ostringstream os;
    os << "register of " << n << " qubits exceeds the exact-diagonalization "
       << "cap of " << max_qubits << "; use circuit backends instead";
    throw std::invalid_argument(os.str());
  }

  std::vector<QuadraticTerm> quad;
  std::vector<OnSiteTerm> onsite;

  auto add_quadratic = [&](int mode_a, int mode_b, Complex amp) {
    if (mode_a > mode_b) {
      std::swap(mode_a, mode_b);
      amp = std::conj(amp);
    }
    quad.push_back({mode_a, mode_b, amp});
  };

  if (include.hop && c.t != 0.0) {
    for (const Edge& e : lattice.edges())
      for (Spin s : {Spin::Up, Spin::Down})
        add_quadratic(map.qubit_of(e.a, s), map.qubit_of(e.b, s),
                      Complex{-c.t, 0.0});
  }
  if (include.spin_orbit && c.lambda_r != 0.0) {
    for (const Edge& e : lattice.edges()) {
      Vec2 d = lattice.edge_vector(e);
      for (Spin s : {Spin::Up, Spin::Down}) {
        // (2i/3) lambda * [(sigma x d)_z]_{s, flip(s)} * a^dag_{a,s} a_{b,s'}
        Complex amp = Complex{0.0, 2.0 / 3.0 * c.lambda_r} * so_bond_phase(d, s);
        add_quadratic(map.qubit_of(e.a, s), map.qubit_of(e.b, flip(s)), amp);
      }
    }
  }
  if (include.coulomb && c.u != 0.0) {
    for (int s = 0; s < lattice.num_sites(); ++s)
      onsite.push_back({map.qubit_of(s, Spin::Up), map.qubit_of(s, Spin::Down),
                        c.u});
  }
  return SparseHamiltonian(n, std::move(quad), std::move(onsite));
}

}  // namespace agsim
