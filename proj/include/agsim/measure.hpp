#ifndef AGSIM_MEASURE_HPP
#define AGSIM_MEASURE_HPP

#include <string>
#include <vector>

#include "agsim/gates.hpp"
#include "agsim/hamiltonian.hpp"
#include "agsim/lattice.hpp"
#include "agsim/state.hpp"

namespace agsim {

enum class GroupKind { Coulomb, Hop, SpinOrbit };

// One Hamiltonian term read from the group's final computational-basis
// measurement; (bit_left, bit_right) are the chain positions carrying the
// term's outcome bits after the group circuit.
struct MeasuredTerm {
  int edge = -1;          // lattice edge index; the site index for Coulomb
  Spin spin_a = Spin::Up; // spin of the mode on edge endpoint a
  int bit_left = -1;
  int bit_right = -1;
};

struct MeasurementGroup {
  std::string label;
  GroupKind kind = GroupKind::Hop;
  GateList circuit;  // fswap routing, prerotations and diagonalizers
  std::vector<MeasuredTerm> terms;
};

// The seventeen simultaneous-measurement groups: one Coulomb group plus
// four geometric edge sets (alternating horizontal edges within each row;
// vertical edges of even and of odd hexagon rows) times two spin
// combinations times {hopping, spin-orbit}. Groups may be empty on small
// lattices; the count is always seventeen.
std::vector<MeasurementGroup> build_groups(const Lattice& lattice,
                                           const QubitMap& map);

double coulomb_energy(const QuantumState& state, const MeasurementGroup& group,
                      double u);

double group_energy(const QuantumState& state, const MeasurementGroup& group,
                    const Couplings& c);

struct EnergyReport {
  std::vector<std::pair<std::string, double>> group_energies;
  double e_hop = 0.0;
  double e_coulomb = 0.0;
  double e_so = 0.0;
  double total = 0.0;
  double per_site = 0.0;

  std::string to_csv() const;
  std::string summary() const;
};

EnergyReport total_energy(const QuantumState& state,
                          const std::vector<MeasurementGroup>& groups,
                          const Couplings& c, int num_sites);

}  // namespace agsim

#endif
