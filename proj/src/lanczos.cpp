#include "agsim/lanczos.hpp"

#include <random>
#include <stdexcept>

namespace agsim {

namespace {
Eigen::VectorXcd random_unit_vector(std::uint64_t dim, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXcd v(dim);
  for (std::uint64_t i = 0; i < dim; ++i)
    v[i] = Complex{dist(gen), dist(gen)};
  v.normalize();
  return v;
}
}  // namespace

EdResult ground_state_ed(const SparseHamiltonian& h, const EdOptions& opts) {
  const std::uint64_t dim = h.dimension();
  const int m = static_cast<int>(
      std::min<std::uint64_t>(dim, static_cast<std::uint64_t>(opts.subspace)));
  const int keep = std::max(1, std::min(opts.keep, m - 2));

  std::vector<Eigen::VectorXcd> basis;
  basis.reserve(m);
  basis.push_back(random_unit_vector(dim, opts.seed));
  // Projected operator basis^dag H basis. Tridiagonal in exact arithmetic
  // but kept dense: thick restarts add an arrow row/column and rounding
  // drift lands harmlessly in the off-tridiagonal entries.
  Eigen::MatrixXcd proj = Eigen::MatrixXcd::Zero(m, m);

  EdResult result;

  // Builds the projected column for the newest basis vector and appends the
  // next direction. Returns false when the window is full or the Krylov
  // space closed.
  auto arnoldi_step = [&]() -> bool {
    const int j = static_cast<int>(basis.size()) - 1;
    Eigen::VectorXcd w = h.apply(basis[j]);
    ++result.matvecs;
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        Complex c = basis[i].dot(w);
        w -= c * basis[i];
        if (pass == 0) {
          proj(i, j) += c;
          if (i != j) proj(j, i) = std::conj(proj(i, j));
        }
      }
    }
    // The sub/superdiagonal couplings are picked up by the next column's
    // Gram-Schmidt pass, so only the new direction is recorded here.
    double beta = w.norm();
    if (beta < 1e-13 || j + 1 >= m) return false;
    basis.push_back(w / beta);
    return true;
  };

  for (int restart = 0; restart < opts.max_restarts; ++restart) {
    while (arnoldi_step()) {
    }

    const int kk = static_cast<int>(basis.size());
    Eigen::MatrixXcd t = proj.topLeftCorner(kk, kk);
    t = ((t + t.adjoint().eval()) / 2.0).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(t);

    Eigen::VectorXcd ritz = Eigen::VectorXcd::Zero(dim);
    for (int i = 0; i < kk; ++i) ritz += es.eigenvectors()(i, 0) * basis[i];
    ritz.normalize();
    const double theta = es.eigenvalues()(0);
    Eigen::VectorXcd r = h.apply(ritz) - theta * ritz;
    ++result.matvecs;
    const double res = r.norm();
    if (res <= opts.residual_tol || kk == static_cast<int>(dim)) {
      result.energy = theta;
      result.state = std::move(ritz);
      result.residual = res;
      return result;
    }

    // Thick restart: carry the lowest Ritz vectors plus the residual
    // direction of the lowest one.
    const int nk = std::min(keep, kk - 1);
    std::vector<Eigen::VectorXcd> kept;
    kept.reserve(nk + 1);
    for (int j = 0; j < nk; ++j) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
      for (int i = 0; i < kk; ++i) v += es.eigenvectors()(i, j) * basis[i];
      v.normalize();
      kept.push_back(std::move(v));
    }
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& v : kept) r -= v.dot(r) * v;
    if (r.norm() < 1e-13) {
      r = random_unit_vector(dim, opts.seed + restart + 1);
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& v : kept) r -= v.dot(r) * v;
    }
    r.normalize();
    kept.push_back(std::move(r));

    proj.setZero();
    for (int j = 0; j < nk; ++j) proj(j, j) = es.eigenvalues()(j);
    basis = std::move(kept);
  }
  throw std::runtime_error("ground_state_ed: no convergence within restart cap");
}

}  // namespace agsim
