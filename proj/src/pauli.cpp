#include "agsim/pauli.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace agsim {

namespace {
const char kLetterNames[4] = {'I', 'X', 'Y', 'Z'};

// Single-qubit product table: letter_a * letter_b = phase * letter.
// Phases are powers of i encoded as 0..3 (i^k).
struct LetterProduct {
  std::uint8_t letter;
  std::uint8_t phase_pow;
};

LetterProduct letter_product(std::uint8_t a, std::uint8_t b) {
  if (a == 0) return {b, 0};
  if (b == 0) return {a, 0};
  if (a == b) return {0, 0};
  // XY=iZ, YZ=iX, ZX=iY and the reversed orders pick up -i (phase_pow 3).
  static const std::uint8_t third[4][4] = {
      {0, 0, 0, 0}, {0, 0, 3, 2}, {0, 3, 0, 1}, {0, 2, 1, 0}};
  std::uint8_t c = third[a][b];
  bool cyclic = (a == 1 && b == 2) || (a == 2 && b == 3) || (a == 3 && b == 1);
  return {c, static_cast<std::uint8_t>(cyclic ? 1 : 3)};
}

std::complex<double> phase_value(int pow4) {
  switch (pow4 & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}
}  // namespace

std::string PauliString::letters_str() const {
  std::string s;
  s.reserve(letters.size());
  for (auto l : letters) s.push_back(kLetterNames[l]);
  return s;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  if (a.letters.size() != b.letters.size())
    throw std::invalid_argument("pauli strings of different length");
  PauliString out;
  out.letters.resize(a.letters.size());
  int phase = 0;
  for (std::size_t q = 0; q < a.letters.size(); ++q) {
    auto p = letter_product(a.letters[q], b.letters[q]);
    out.letters[q] = p.letter;
    phase += p.phase_pow;
  }
  out.coefficient = a.coefficient * b.coefficient * phase_value(phase);
  return out;
}

PauliSum multiply(const PauliSum& a, const PauliSum& b) {
  PauliSum out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a)
    for (const auto& y : b) out.push_back(multiply(x, y));
  return simplify(std::move(out));
}

PauliSum simplify(PauliSum sum, double tol) {
  std::map<std::vector<std::uint8_t>, std::complex<double>> acc;
  for (auto& t : sum) acc[t.letters] += t.coefficient;
  PauliSum out;
  for (auto& [letters, coeff] : acc) {
    if (std::abs(coeff) <= tol) continue;
    out.push_back(PauliString{coeff, letters});
  }
  return out;
}

PauliSum jw_ladder(int index, LadderKind kind, int total_qubits) {
  if (index < 0 || index >= total_qubits)
    throw std::out_of_range("jw_ladder: mode index out of range");
  PauliString x, y;
  x.letters.assign(total_qubits, 0);
  y.letters.assign(total_qubits, 0);
  for (int k = 0; k < index; ++k) {
    x.letters[k] = 3;
    y.letters[k] = 3;
  }
  x.letters[index] = 1;
  y.letters[index] = 2;
  x.coefficient = {0.5, 0.0};
  // Occupied modes carry bit 1, so (X - iY)/2 creates and (X + iY)/2
  // annihilates; this keeps n = (1 - Z)/2 and the Coulomb block on |11>.
  y.coefficient = kind == LadderKind::Create ? std::complex<double>{0.0, -0.5}
                                             : std::complex<double>{0.0, 0.5};
  return {x, y};
}

std::string pauli_sum_to_text(const PauliSum& sum) {
  std::ostringstream os;
  os.precision(17);
  for (const auto& t : sum)
    os << t.letters_str() << " " << t.coefficient.real() << " "
       << t.coefficient.imag() << "\n";
  return os.str();
}

}  // namespace agsim
