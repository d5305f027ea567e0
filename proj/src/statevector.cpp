#include <algorithm>
#include <bit>
#include <fstream>
#include <random>
#include <stdexcept>

#include "agsim/state.hpp"

namespace agsim {

namespace {
constexpr char kMagicSv[9] = "AGSTATE1";
constexpr char kMagicMps[9] = "AGSTATE2";

void check_subset(const std::vector<int>& qubits, int n) {
  if (qubits.empty() || qubits.size() > 8)
    throw std::invalid_argument("probability subset must hold 1..8 qubits");
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= n)
      throw std::invalid_argument("qubit out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (qubits[i] == qubits[j])
        throw std::invalid_argument("duplicate qubit in probability subset");
  }
}
}  // namespace

void QuantumState::apply(const GateList& gates) {
  for (const auto& g : gates) {
    if (g.arity == 2)
      apply_two_qubit(g.m4, g.position);
    else
      apply_single_qubit(g.m2, g.position);
  }
}

// Dense amplitude vector over 2^n basis states. The float instantiation
// backs the single-precision option for large registers; double is the
// default and the tested mode.
template <typename Real>
class StateVector final : public QuantumState {
 public:
  using Cplx = std::complex<Real>;

  StateVector(int n, const std::string& bits) : n_(n) {
    if (n < 1 || n > 30) throw std::invalid_argument("unsupported qubit count");
    if (static_cast<int>(bits.size()) != n)
      throw std::invalid_argument("bitstring length must equal qubit count");
    amps_.assign(std::uint64_t(1) << n, Cplx(0, 0));
    std::uint64_t idx = 0;
    for (char c : bits) {
      if (c != '0' && c != '1')
        throw std::invalid_argument("bitstring must be over {0,1}");
      idx = (idx << 1) | (c == '1' ? 1 : 0);
    }
    amps_[idx] = Cplx(1, 0);
  }

  int num_qubits() const override { return n_; }

  void apply_two_qubit(const Mat4& gate, int position) override {
    if (position < 0 || position + 1 >= n_)
      throw std::invalid_argument("two-qubit gate needs adjacent positions");
    const int b = n_ - 2 - position;  // bit index of qubit position+1
    const std::uint64_t step = std::uint64_t(1) << b;
    const std::uint64_t low_mask = step - 1;
    const std::uint64_t blocks = amps_.size() >> 2;

    // Structure checks: swap networks make most applied gates either the
    // fermionic swap or a diagonal phase, worth dedicated kernels.
    bool diagonal = true;
    for (int r = 0; r < 4 && diagonal; ++r)
      for (int c = 0; c < 4; ++c)
        if (r != c && gate(r, c) != std::complex<double>(0.0, 0.0)) {
          diagonal = false;
          break;
        }
    if (diagonal) {
      const std::array<Cplx, 4> d = {
          Cplx(static_cast<Real>(gate(0, 0).real()), static_cast<Real>(gate(0, 0).imag())),
          Cplx(static_cast<Real>(gate(1, 1).real()), static_cast<Real>(gate(1, 1).imag())),
          Cplx(static_cast<Real>(gate(2, 2).real()), static_cast<Real>(gate(2, 2).imag())),
          Cplx(static_cast<Real>(gate(3, 3).real()), static_cast<Real>(gate(3, 3).imag()))};
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(blocks); ++i) {
        const std::uint64_t ui = static_cast<std::uint64_t>(i);
        const std::uint64_t base = ((ui >> b) << (b + 2)) | (ui & low_mask);
        amps_[base] *= d[0];
        amps_[base + step] *= d[1];
        amps_[base + 2 * step] *= d[2];
        amps_[base + 3 * step] *= d[3];
      }
      return;
    }
    const bool is_fswap =
        gate(0, 0) == std::complex<double>(1.0, 0.0) &&
        gate(1, 2) == std::complex<double>(1.0, 0.0) &&
        gate(2, 1) == std::complex<double>(1.0, 0.0) &&
        gate(3, 3) == std::complex<double>(-1.0, 0.0) &&
        gate(0, 1) == std::complex<double>(0.0, 0.0) &&
        gate(0, 2) == std::complex<double>(0.0, 0.0) &&
        gate(0, 3) == std::complex<double>(0.0, 0.0) &&
        gate(1, 1) == std::complex<double>(0.0, 0.0) &&
        gate(1, 3) == std::complex<double>(0.0, 0.0) &&
        gate(2, 2) == std::complex<double>(0.0, 0.0) &&
        gate(2, 3) == std::complex<double>(0.0, 0.0) &&
        gate(1, 0) == std::complex<double>(0.0, 0.0) &&
        gate(2, 0) == std::complex<double>(0.0, 0.0) &&
        gate(3, 0) == std::complex<double>(0.0, 0.0) &&
        gate(3, 1) == std::complex<double>(0.0, 0.0) &&
        gate(3, 2) == std::complex<double>(0.0, 0.0);
    if (is_fswap) {
#pragma omp parallel for schedule(static)
      for (std::int64_t i = 0; i < static_cast<std::int64_t>(blocks); ++i) {
        const std::uint64_t ui = static_cast<std::uint64_t>(i);
        const std::uint64_t base = ((ui >> b) << (b + 2)) | (ui & low_mask);
        std::swap(amps_[base + step], amps_[base + 2 * step]);
        amps_[base + 3 * step] = -amps_[base + 3 * step];
      }
      return;
    }

    std::array<Cplx, 16> g;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c)
        g[4 * r + c] = Cplx(static_cast<Real>(gate(r, c).real()),
                            static_cast<Real>(gate(r, c).imag()));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(blocks); ++i) {
      const std::uint64_t ui = static_cast<std::uint64_t>(i);
      const std::uint64_t base = ((ui >> b) << (b + 2)) | (ui & low_mask);
      Cplx a0 = amps_[base];
      Cplx a1 = amps_[base + step];
      Cplx a2 = amps_[base + 2 * step];
      Cplx a3 = amps_[base + 3 * step];
      amps_[base] = g[0] * a0 + g[1] * a1 + g[2] * a2 + g[3] * a3;
      amps_[base + step] = g[4] * a0 + g[5] * a1 + g[6] * a2 + g[7] * a3;
      amps_[base + 2 * step] = g[8] * a0 + g[9] * a1 + g[10] * a2 + g[11] * a3;
      amps_[base + 3 * step] = g[12] * a0 + g[13] * a1 + g[14] * a2 + g[15] * a3;
    }
  }

  void apply_single_qubit(const Mat2& gate, int position) override {
    if (position < 0 || position >= n_)
      throw std::invalid_argument("position out of range");
    const int b = n_ - 1 - position;
    const std::uint64_t step = std::uint64_t(1) << b;
    const std::uint64_t low_mask = step - 1;
    const std::uint64_t half = amps_.size() >> 1;
    const Cplx g00(static_cast<Real>(gate(0, 0).real()), static_cast<Real>(gate(0, 0).imag()));
    const Cplx g01(static_cast<Real>(gate(0, 1).real()), static_cast<Real>(gate(0, 1).imag()));
    const Cplx g10(static_cast<Real>(gate(1, 0).real()), static_cast<Real>(gate(1, 0).imag()));
    const Cplx g11(static_cast<Real>(gate(1, 1).real()), static_cast<Real>(gate(1, 1).imag()));
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(half); ++i) {
      const std::uint64_t ui = static_cast<std::uint64_t>(i);
      const std::uint64_t i0 = ((ui >> b) << (b + 1)) | (ui & low_mask);
      const std::uint64_t i1 = i0 | step;
      Cplx a0 = amps_[i0];
      Cplx a1 = amps_[i1];
      amps_[i0] = g00 * a0 + g01 * a1;
      amps_[i1] = g10 * a0 + g11 * a1;
    }
  }

  std::vector<double> probabilities(const std::vector<int>& qubits) const override {
    check_subset(qubits, n_);
    std::vector<double> out(std::size_t(1) << qubits.size(), 0.0);
    const std::uint64_t dim = amps_.size();
    for (std::uint64_t x = 0; x < dim; ++x) {
      double p = std::norm(amps_[x]);
      if (p == 0.0) continue;
      std::size_t key = 0;
      for (int q : qubits) key = (key << 1) | ((x >> (n_ - 1 - q)) & 1);
      out[key] += p;
    }
    return out;
  }

  std::complex<double> overlap(const QuantumState& other) const override {
    if (other.num_qubits() != n_)
      throw std::invalid_argument("overlap: qubit count mismatch");
    if (auto* sv = dynamic_cast<const StateVector<Real>*>(&other)) {
      std::complex<double> acc{0.0, 0.0};
      for (std::uint64_t x = 0; x < amps_.size(); ++x)
        acc += std::conj(std::complex<double>(amps_[x])) *
               std::complex<double>(sv->amps_[x]);
      return acc;
    }
    Eigen::VectorXcd a = to_dense();
    Eigen::VectorXcd b = other.to_dense();
    return a.dot(b);
  }

  std::map<std::string, std::int64_t> sample(std::int64_t shots,
                                             std::uint64_t seed) const override {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    std::vector<double> cdf(amps_.size());
    double acc = 0.0;
    for (std::uint64_t x = 0; x < amps_.size(); ++x) {
      acc += std::norm(amps_[x]);
      cdf[x] = acc;
    }
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(0.0, acc);
    std::map<std::string, std::int64_t> counts;
    for (std::int64_t s = 0; s < shots; ++s) {
      double r = dist(gen);
      auto it = std::lower_bound(cdf.begin(), cdf.end(), r);
      std::uint64_t x = static_cast<std::uint64_t>(it - cdf.begin());
      std::string bits(n_, '0');
      for (int q = 0; q < n_; ++q)
        if ((x >> (n_ - 1 - q)) & 1) bits[q] = '1';
      ++counts[bits];
    }
    return counts;
  }

  double norm() const override {
    double acc = 0.0;
    for (const auto& a : amps_) acc += std::norm(a);
    return std::sqrt(acc);
  }

  std::unique_ptr<QuantumState> clone() const override {
    return std::make_unique<StateVector<Real>>(*this);
  }

  Eigen::VectorXcd to_dense() const override {
    Eigen::VectorXcd v(amps_.size());
    for (std::uint64_t x = 0; x < amps_.size(); ++x)
      v[x] = std::complex<double>(amps_[x]);
    return v;
  }

  void save(std::ostream& os) const override {
    os.write(kMagicSv, 8);
    std::int32_t n = n_;
    std::int32_t single = std::is_same_v<Real, float> ? 1 : 0;
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&single), sizeof single);
    os.write(reinterpret_cast<const char*>(amps_.data()),
             static_cast<std::streamsize>(amps_.size() * sizeof(Cplx)));
  }

  std::vector<Cplx>& amplitudes() { return amps_; }

 private:
  int n_;
  std::vector<Cplx> amps_;
};

std::unique_ptr<QuantumState> make_statevector(int n_qubits,
                                               const std::string& bits,
                                               Precision precision) {
  if (precision == Precision::Single)
    return std::make_unique<StateVector<float>>(n_qubits, bits);
  return std::make_unique<StateVector<double>>(n_qubits, bits);
}

std::unique_ptr<QuantumState> make_statevector(const Eigen::VectorXcd& amplitudes) {
  int n = 0;
  while ((Eigen::Index(1) << n) < amplitudes.size()) ++n;
  if ((Eigen::Index(1) << n) != amplitudes.size())
    throw std::invalid_argument("amplitude vector length must be a power of two");
  auto sv = std::make_unique<StateVector<double>>(n, std::string(n, '0'));
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i)
    sv->amplitudes()[static_cast<std::uint64_t>(i)] = amplitudes[i];
  return sv;
}

std::unique_ptr<QuantumState> init_computational(int n_qubits,
                                                 const std::string& bits,
                                                 const SimOptions& options) {
  if (options.backend == BackendKind::Mps)
    return make_mps(n_qubits, bits, options.chi_max);
  return make_statevector(n_qubits, bits, options.precision);
}

void save_state(const QuantumState& state, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
  state.save(os);
}

std::unique_ptr<QuantumState> load_state(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open checkpoint: " + path);
  return load_state(is);
}

namespace detail {
std::unique_ptr<QuantumState> load_mps(std::istream& is);
}

std::unique_ptr<QuantumState> load_state(std::istream& is) {
  char magic[8];
  is.read(magic, 8);
  if (!is) throw std::runtime_error("truncated checkpoint");
  if (std::equal(magic, magic + 8, kMagicMps)) return detail::load_mps(is);
  if (!std::equal(magic, magic + 8, kMagicSv))
    throw std::runtime_error("unrecognised checkpoint header");
  std::int32_t n = 0, single = 0;
  is.read(reinterpret_cast<char*>(&n), sizeof n);
  is.read(reinterpret_cast<char*>(&single), sizeof single);
  if (single) {
    auto sv = std::make_unique<StateVector<float>>(n, std::string(n, '0'));
    is.read(reinterpret_cast<char*>(sv->amplitudes().data()),
            static_cast<std::streamsize>(sv->amplitudes().size() *
                                         sizeof(std::complex<float>)));
    if (!is) throw std::runtime_error("truncated checkpoint");
    return sv;
  }
  auto sv = std::make_unique<StateVector<double>>(n, std::string(n, '0'));
  is.read(reinterpret_cast<char*>(sv->amplitudes().data()),
          static_cast<std::streamsize>(sv->amplitudes().size() *
                                       sizeof(std::complex<double>)));
  if (!is) throw std::runtime_error("truncated checkpoint");
  return sv;
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  return std::norm(a.overlap(b));
}

}  // namespace agsim
