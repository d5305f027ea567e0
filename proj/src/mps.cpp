#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <fstream>
#include <random>
#include <stdexcept>

#include "agsim/state.hpp"

namespace agsim {

namespace {
constexpr char kMagicMps[9] = "AGSTATE2";

using Mx = Eigen::MatrixXcd;
}  // namespace

// Matrix product state with a moving orthogonality centre. Site k holds the
// two physical slices A0, A1 of shape (bond_left x bond_right); sites left
// of the centre are left-isometric, sites right of it right-isometric.
// Truncation keeps the largest min(chi_max, rank) singular values, records
// the kept squared weight in the fidelity ledger and renormalises.
class MpsState final : public QuantumState {
 public:
  MpsState(int n, const std::string& bits, int chi_max)
      : n_(n), chi_max_(chi_max) {
    if (n < 1) throw std::invalid_argument("unsupported qubit count");
    if (chi_max < 1) throw std::invalid_argument("chi_max must be >= 1");
    if (static_cast<int>(bits.size()) != n)
      throw std::invalid_argument("bitstring length must equal qubit count");
    a0_.resize(n_);
    a1_.resize(n_);
    for (int k = 0; k < n_; ++k) {
      if (bits[k] != '0' && bits[k] != '1')
        throw std::invalid_argument("bitstring must be over {0,1}");
      a0_[k] = Mx::Zero(1, 1);
      a1_[k] = Mx::Zero(1, 1);
      (bits[k] == '0' ? a0_[k] : a1_[k])(0, 0) = 1.0;
    }
    center_ = 0;
  }

  int num_qubits() const override { return n_; }
  int chi_max() const { return chi_max_; }
  double fidelity_ledger() const override { return ledger_; }

  int max_bond() const {
    int chi = 1;
    for (int k = 0; k < n_; ++k)
      chi = std::max(chi, static_cast<int>(a0_[k].cols()));
    return chi;
  }

  void apply_two_qubit(const Mat4& gate, int position) override {
    if (position < 0 || position + 1 >= n_)
      throw std::invalid_argument("two-qubit gate needs adjacent positions");
    const int p = position;
    if (center_ < p) move_center(p);
    if (center_ > p + 1) move_center(p + 1);

    const Eigen::Index chi_l = a0_[p].rows();
    const Eigen::Index chi_r = a0_[p + 1].cols();
    std::array<Mx, 4> theta;  // physical pair (a, b) -> chi_l x chi_r
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        theta[2 * a + b] =
            (a ? a1_[p] : a0_[p]) * (b ? a1_[p + 1] : a0_[p + 1]);
    std::array<Mx, 4> rotated;
    for (int cd = 0; cd < 4; ++cd) {
      rotated[cd] = Mx::Zero(chi_l, chi_r);
      for (int ab = 0; ab < 4; ++ab) {
        if (gate(cd, ab) == std::complex<double>(0.0, 0.0)) continue;
        rotated[cd] += gate(cd, ab) * theta[ab];
      }
    }
    Mx m(2 * chi_l, 2 * chi_r);
    for (int c = 0; c < 2; ++c)
      for (int d = 0; d < 2; ++d)
        m.block(c * chi_l, d * chi_r, chi_l, chi_r) = rotated[2 * c + d];

    Eigen::JacobiSVD<Mx> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    double total = sv.squaredNorm();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-14 * sv(0)) ++rank;
    rank = std::max(rank, 1);
    int chi_keep = std::min(rank, chi_max_);
    double kept = sv.head(chi_keep).squaredNorm();
    if (chi_keep < rank) ledger_ *= kept / total;

    Eigen::VectorXd s = sv.head(chi_keep) / std::sqrt(kept);
    Mx u = svd.matrixU().leftCols(chi_keep);
    Mx vdag = svd.matrixV().leftCols(chi_keep).adjoint();
    a0_[p] = u.topRows(chi_l);
    a1_[p] = u.bottomRows(chi_l);
    Mx sv_right = s.asDiagonal() * vdag;
    a0_[p + 1] = sv_right.leftCols(chi_r);
    a1_[p + 1] = sv_right.rightCols(chi_r);
    center_ = p + 1;
  }

  void apply_single_qubit(const Mat2& gate, int position) override {
    if (position < 0 || position >= n_)
      throw std::invalid_argument("position out of range");
    Mx b0 = gate(0, 0) * a0_[position] + gate(0, 1) * a1_[position];
    Mx b1 = gate(1, 0) * a0_[position] + gate(1, 1) * a1_[position];
    a0_[position] = std::move(b0);
    a1_[position] = std::move(b1);
  }

  std::vector<double> probabilities(const std::vector<int>& qubits) const override {
    if (qubits.empty() || qubits.size() > 8)
      throw std::invalid_argument("probability subset must hold 1..8 qubits");
    for (int q : qubits)
      if (q < 0 || q >= n_) throw std::invalid_argument("qubit out of range");
    std::vector<int> sorted(qubits);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("duplicate qubit in probability subset");

    // Left-to-right transfer with one density branch per recorded outcome.
    std::vector<Mx> env{Mx::Ones(1, 1)};
    std::vector<int> branch_sites;
    for (int k = 0; k < n_; ++k) {
      bool tracked = std::binary_search(sorted.begin(), sorted.end(), k);
      std::vector<Mx> next;
      next.reserve(env.size() * (tracked ? 2 : 1));
      if (tracked) branch_sites.push_back(k);
      for (const Mx& e : env) {
        if (tracked) {
          next.push_back(a0_[k].adjoint() * e * a0_[k]);
          next.push_back(a1_[k].adjoint() * e * a1_[k]);
        } else {
          next.push_back(a0_[k].adjoint() * e * a0_[k] +
                         a1_[k].adjoint() * e * a1_[k]);
        }
      }
      env = std::move(next);
    }
    // env is indexed by outcomes of `sorted`; remap to the caller's order.
    std::vector<double> out(std::size_t(1) << qubits.size(), 0.0);
    for (std::size_t key = 0; key < env.size(); ++key) {
      double p = env[key](0, 0).real();
      std::size_t mapped = 0;
      for (std::size_t j = 0; j < qubits.size(); ++j) {
        int q = qubits[j];
        auto it = std::lower_bound(sorted.begin(), sorted.end(), q);
        std::size_t pos_in_sorted = static_cast<std::size_t>(it - sorted.begin());
        std::size_t bit = (key >> (sorted.size() - 1 - pos_in_sorted)) & 1;
        mapped = (mapped << 1) | bit;
        (void)j;
      }
      out[mapped] += std::max(0.0, p);
    }
    return out;
  }

  std::complex<double> overlap(const QuantumState& other) const override {
    if (other.num_qubits() != n_)
      throw std::invalid_argument("overlap: qubit count mismatch");
    if (auto* mps = dynamic_cast<const MpsState*>(&other)) {
      Mx e = Mx::Ones(1, 1);
      for (int k = 0; k < n_; ++k)
        e = a0_[k].adjoint() * e * mps->a0_[k] +
            a1_[k].adjoint() * e * mps->a1_[k];
      return e(0, 0);
    }
    return to_dense().dot(other.to_dense());
  }

  std::map<std::string, std::int64_t> sample(std::int64_t shots,
                                             std::uint64_t seed) const override {
    if (shots < 1) throw std::invalid_argument("shots must be >= 1");
    // Right-isometric tensors make prefix norms exact conditionals.
    MpsState work(*this);
    work.move_center(0);
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    std::map<std::string, std::int64_t> counts;
    for (std::int64_t s = 0; s < shots; ++s) {
      std::string bits(n_, '0');
      Mx u = Mx::Ones(1, 1);
      double p_prefix = 1.0;
      for (int k = 0; k < n_; ++k) {
        Mx u0 = u * work.a0_[k];
        double p0 = u0.squaredNorm() / p_prefix;
        if (dist(gen) < p0) {
          u = std::move(u0);
          p_prefix *= p0;
        } else {
          bits[k] = '1';
          u = u * work.a1_[k];
          p_prefix *= (1.0 - p0);
        }
      }
      ++counts[bits];
    }
    return counts;
  }

  double norm() const override {
    double acc = 0.0;
    acc += a0_[center_].squaredNorm() + a1_[center_].squaredNorm();
    return std::sqrt(acc);
  }

  std::unique_ptr<QuantumState> clone() const override {
    return std::make_unique<MpsState>(*this);
  }

  Eigen::VectorXcd to_dense() const override {
    if (n_ > 24) throw std::runtime_error("to_dense limited to 24 qubits");
    std::vector<Mx> rows{Mx::Ones(1, 1)};
    for (int k = 0; k < n_; ++k) {
      std::vector<Mx> next;
      next.reserve(rows.size() * 2);
      for (const Mx& r : rows) {
        next.push_back(r * a0_[k]);
        next.push_back(r * a1_[k]);
      }
      rows = std::move(next);
    }
    Eigen::VectorXcd v(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) v[i] = rows[i](0, 0);
    return v;
  }

  void save(std::ostream& os) const override {
    os.write(kMagicMps, 8);
    std::int32_t n = n_, chi = chi_max_, center = center_;
    os.write(reinterpret_cast<const char*>(&n), sizeof n);
    os.write(reinterpret_cast<const char*>(&chi), sizeof chi);
    os.write(reinterpret_cast<const char*>(&center), sizeof center);
    os.write(reinterpret_cast<const char*>(&ledger_), sizeof ledger_);
    for (int k = 0; k < n_; ++k) {
      std::int64_t rows = a0_[k].rows(), cols = a0_[k].cols();
      os.write(reinterpret_cast<const char*>(&rows), sizeof rows);
      os.write(reinterpret_cast<const char*>(&cols), sizeof cols);
      for (const Mx* m : {&a0_[k], &a1_[k]})
        os.write(reinterpret_cast<const char*>(m->data()),
                 static_cast<std::streamsize>(sizeof(std::complex<double>) *
                                              m->size()));
    }
  }

  static std::unique_ptr<MpsState> load(std::istream& is) {
    std::int32_t n = 0, chi = 0, center = 0;
    double ledger = 1.0;
    is.read(reinterpret_cast<char*>(&n), sizeof n);
    is.read(reinterpret_cast<char*>(&chi), sizeof chi);
    is.read(reinterpret_cast<char*>(&center), sizeof center);
    is.read(reinterpret_cast<char*>(&ledger), sizeof ledger);
    auto mps = std::make_unique<MpsState>(n, std::string(n, '0'), chi);
    mps->center_ = center;
    mps->ledger_ = ledger;
    for (int k = 0; k < n; ++k) {
      std::int64_t rows = 0, cols = 0;
      is.read(reinterpret_cast<char*>(&rows), sizeof rows);
      is.read(reinterpret_cast<char*>(&cols), sizeof cols);
      mps->a0_[k].resize(rows, cols);
      mps->a1_[k].resize(rows, cols);
      for (Mx* m : {&mps->a0_[k], &mps->a1_[k]})
        is.read(reinterpret_cast<char*>(m->data()),
                static_cast<std::streamsize>(sizeof(std::complex<double>) *
                                             m->size()));
    }
    if (!is) throw std::runtime_error("truncated checkpoint");
    return mps;
  }

 private:
  void move_center(int target) {
    while (center_ < target) {
      const int k = center_;
      const Eigen::Index chi_l = a0_[k].rows(), chi_r = a0_[k].cols();
      Mx m(2 * chi_l, chi_r);
      m.topRows(chi_l) = a0_[k];
      m.bottomRows(chi_l) = a1_[k];
      Eigen::HouseholderQR<Mx> qr(m);
      Eigen::Index r = std::min<Eigen::Index>(2 * chi_l, chi_r);
      Mx q = qr.householderQ() * Mx::Identity(2 * chi_l, r);
      Mx rr = qr.matrixQR().topLeftCorner(r, chi_r).triangularView<Eigen::Upper>();
      a0_[k] = q.topRows(chi_l);
      a1_[k] = q.bottomRows(chi_l);
      a0_[k + 1] = rr * a0_[k + 1];
      a1_[k + 1] = rr * a1_[k + 1];
      ++center_;
    }
    while (center_ > target) {
      const int k = center_;
      const Eigen::Index chi_l = a0_[k].rows(), chi_r = a0_[k].cols();
      Mx m(chi_l, 2 * chi_r);
      m.leftCols(chi_r) = a0_[k];
      m.rightCols(chi_r) = a1_[k];
      Eigen::HouseholderQR<Mx> qr(m.adjoint());
      Eigen::Index r = std::min<Eigen::Index>(2 * chi_r, chi_l);
      Mx q = qr.householderQ() * Mx::Identity(2 * chi_r, r);
      Mx rr = qr.matrixQR().topLeftCorner(r, chi_l).triangularView<Eigen::Upper>();
      Mx qa = q.adjoint();  // r x 2 chi_r
      a0_[k] = qa.leftCols(chi_r);
      a1_[k] = qa.rightCols(chi_r);
      Mx l = rr.adjoint();  // chi_l x r
      a0_[k - 1] = a0_[k - 1] * l;
      a1_[k - 1] = a1_[k - 1] * l;
      --center_;
    }
  }

  int n_;
  int chi_max_;
  int center_ = 0;
  double ledger_ = 1.0;
  std::vector<Mx> a0_, a1_;
};

std::unique_ptr<QuantumState> make_mps(int n_qubits, const std::string& bits,
                                       int chi_max) {
  return std::make_unique<MpsState>(n_qubits, bits, chi_max);
}

namespace detail {
std::unique_ptr<QuantumState> load_mps(std::istream& is) {
  return MpsState::load(is);
}
}  // namespace detail

}  // namespace agsim
