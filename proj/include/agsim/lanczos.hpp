#ifndef AGSIM_LANCZOS_HPP
#define AGSIM_LANCZOS_HPP

#include <Eigen/Dense>

#include "agsim/hamiltonian.hpp"

namespace agsim {

struct EdOptions {
  int subspace = 48;        // Krylov window per restart cycle
  int keep = 10;            // Ritz vectors carried across a restart
  int max_restarts = 200;
  double residual_tol = 1e-9;
  unsigned seed = 7;
};

struct EdResult {
  double energy = 0.0;
  Eigen::VectorXcd state;
  double residual = 0.0;
  int matvecs = 0;
};

// Lowest eigenpair of the Hamiltonian via restarted Lanczos with full
// reorthogonalisation inside the window. Degenerate ground spaces yield an
// arbitrary member; the energy is the contracted quantity. Throws when the
// residual target is not met within the restart budget.
EdResult ground_state_ed(const SparseHamiltonian& h, const EdOptions& opts = {});

}  // namespace agsim

#endif
