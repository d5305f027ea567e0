#ifndef AGSIM_PAULI_HPP
#define AGSIM_PAULI_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace agsim {

// One Pauli word: coefficient times a tensor product of single-qubit letters
// over the whole register. Letter codes: 0=I, 1=X, 2=Y, 3=Z.
struct PauliString {
  std::complex<double> coefficient{1.0, 0.0};
  std::vector<std::uint8_t> letters;

  std::string letters_str() const;
};

using PauliSum = std::vector<PauliString>;

PauliString multiply(const PauliString& a, const PauliString& b);
PauliSum multiply(const PauliSum& a, const PauliSum& b);

// Combine equal words and drop terms below `tol`.
PauliSum simplify(PauliSum sum, double tol = 1e-14);

enum class LadderKind { Create, Annihilate };

// Jordan-Wigner ladder operator on mode j of a `total_qubits` chain:
// Z x ... x Z on modes 0..j-1 times (X -+ iY)/2 on mode j.
PauliSum jw_ladder(int index, LadderKind kind, int total_qubits);

std::string pauli_sum_to_text(const PauliSum& sum);

}  // namespace agsim

#endif
