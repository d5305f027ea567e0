#ifndef AGSIM_STATE_HPP
#define AGSIM_STATE_HPP

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "agsim/gates.hpp"

namespace agsim {

enum class BackendKind { Statevector, Mps };
enum class Precision { Double, Single };

struct SimOptions {
  BackendKind backend = BackendKind::Statevector;
  int chi_max = 64;                       // MPS bond-dimension cap
  Precision precision = Precision::Double;
};

// Backend contract shared by the dense statevector and the MPS simulator.
// Qubit 0 is the leftmost / most significant chain position; two-qubit
// gates act on adjacent positions (p, p+1) only, which the swap-network
// compilation guarantees. A state is single-writer.
class QuantumState {
 public:
  virtual ~QuantumState() = default;

  virtual int num_qubits() const = 0;
  virtual void apply_two_qubit(const Mat4& gate, int position) = 0;
  virtual void apply_single_qubit(const Mat2& gate, int position) = 0;

  // Exact marginal distribution over the given qubits (at most 8), indexed
  // by the subset bits in the order given.
  virtual std::vector<double> probabilities(
      const std::vector<int>& qubits) const = 0;

  virtual std::complex<double> overlap(const QuantumState& other) const = 0;
  virtual std::map<std::string, std::int64_t> sample(std::int64_t shots,
                                                     std::uint64_t seed) const = 0;
  virtual double norm() const = 0;
  virtual std::unique_ptr<QuantumState> clone() const = 0;
  virtual Eigen::VectorXcd to_dense() const = 0;

  // Running product of kept squared singular-value weight; 1 for exact
  // backends and for MPS runs that never truncated.
  virtual double fidelity_ledger() const { return 1.0; }

  virtual void save(std::ostream& os) const = 0;

  void apply(const GateList& gates);
};

std::unique_ptr<QuantumState> make_statevector(int n_qubits,
                                               const std::string& bits,
                                               Precision precision = Precision::Double);
std::unique_ptr<QuantumState> make_statevector(const Eigen::VectorXcd& amplitudes);
std::unique_ptr<QuantumState> make_mps(int n_qubits, const std::string& bits,
                                       int chi_max);
std::unique_ptr<QuantumState> init_computational(int n_qubits,
                                                 const std::string& bits,
                                                 const SimOptions& options);

// Checkpoint round-trip; the dump is bit-exact.
void save_state(const QuantumState& state, const std::string& path);
std::unique_ptr<QuantumState> load_state(const std::string& path);
std::unique_ptr<QuantumState> load_state(std::istream& is);

double fidelity(const QuantumState& a, const QuantumState& b);

}  // namespace agsim

#endif
