#ifndef AGSIM_NETCOMPILE_HPP
#define AGSIM_NETCOMPILE_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "agsim/lattice.hpp"

namespace agsim {

enum class HamiltonianPart { Coulomb, Hopping, SpinOrbit };

// One two-qubit Hamiltonian term scheduled on chain-adjacent positions
// (position, position+1) while the resident qubit labels realise it.
struct PlacedInteraction {
  int position = 0;
  HamiltonianPart part = HamiltonianPart::Hopping;
  int edge = -1;          // lattice edge index; the site index for Coulomb
  Spin spin_a = Spin::Up; // spin of the mode on edge endpoint a
  bool a_on_left = true;  // endpoint a's mode sits at `position`
  int label_left = -1;    // resident qubit labels when placed
  int label_right = -1;
};

struct SwapLayer {
  std::vector<int> positions;  // disjoint fswap pairs (p, p+1)
};

struct InteractionLayer {
  std::vector<PlacedInteraction> interactions;
};

using PlanLayer = std::variant<SwapLayer, InteractionLayer>;

// Chain ordering and fired interactions at one point of the schedule, kept
// for the text export and golden tests.
struct PlanSnapshot {
  std::vector<int> ordering;  // chain position -> qubit label
  std::vector<PlacedInteraction> fired;
  std::string note;
};

struct TrotterPlan {
  HamiltonianPart part = HamiltonianPart::Hopping;
  int n_qubits = 0;
  std::vector<PlanLayer> layers;
  std::vector<PlanSnapshot> snapshots;
};

// Sub-chain (start position, qubit count) per site row.
std::vector<std::pair<int, int>> row_subchains(const Lattice& lattice,
                                               const QubitMap& map);

enum class SwapParity { Even, Odd };

// Brick pattern within one row of length `length`: Even pairs (2k, 2k+1),
// Odd pairs (2k+1, 2k+2).
std::vector<std::pair<int, int>> swap_layer(SwapParity kind, int length);

// Compiles one Trotter step of the chosen Hamiltonian part into fermionic
// swap layers and placed interactions. Every term of the part is applied
// exactly once; the net permutation is the identity. Throws when a term
// never becomes chain-adjacent.
TrotterPlan compile_step(const Lattice& lattice, const QubitMap& map,
                         HamiltonianPart part);

struct PlanReport {
  bool identity_permutation = false;
  bool swaps_disjoint = true;
  bool labels_consistent = true;
  bool covered_exactly_once = false;
  std::vector<int> final_permutation;
  std::map<std::string, int> term_counts;  // term key -> applications
  std::vector<std::string> problems;

  bool ok() const {
    return identity_permutation && swaps_disjoint && labels_consistent &&
           covered_exactly_once;
  }
};

// Replays the label permutation through the plan and audits coverage.
PlanReport verify_plan(const TrotterPlan& plan, const Lattice& lattice,
                       const QubitMap& map);

// Schedule table: one ordering block per snapshot, rows aligned by lattice
// column, annotated with the interactions fired there.
std::string export_plan_table(const TrotterPlan& plan, const Lattice& lattice,
                              const QubitMap& map);

std::string term_key(const PlacedInteraction& p);

}  // namespace agsim

#endif
