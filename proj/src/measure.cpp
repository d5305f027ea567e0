#include "agsim/measure.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace agsim {

namespace {

// Horizontal edges split into alternating sets within each row (adjacent
// edges share a site and cannot be measured together); vertical edges split
// by hexagon-row parity so neighbouring boundaries never route through the
// same row at once.
int geometric_set(const Lattice& lattice, int edge_index) {
  const Edge& e = lattice.edges()[edge_index];
  if (e.orientation == EdgeOrientation::Vertical)
    return 2 + (lattice.sites()[e.a].row % 2);
  int row = lattice.sites()[e.a].row;
  int lo_col = std::min(lattice.sites()[e.a].col, lattice.sites()[e.b].col);
  // Edges of a row ordered by column: the j-th starts at col lo+j.
  int first_col = 1 << 30;
  for (const Edge& o : lattice.edges()) {
    if (o.orientation != EdgeOrientation::Horizontal) continue;
    if (lattice.sites()[o.a].row != row) continue;
    first_col = std::min(first_col,
                         std::min(lattice.sites()[o.a].col,
                                  lattice.sites()[o.b].col));
  }
  return (lo_col - first_col) % 2;
}

const char* set_name(int set) {
  switch (set) {
    case 0: return "h0";
    case 1: return "h1";
    case 2: return "v0";
    default: return "v1";
  }
}

struct GroupBuilder {
  const Lattice& lattice;
  const QubitMap& map;
  std::vector<int> position_of;  // qubit label -> chain position
  std::vector<int> label_at;     // chain position -> qubit label
  MeasurementGroup group;

  GroupBuilder(const Lattice& l, const QubitMap& m) : lattice(l), map(m) {
    const int n = m.total_qubits();
    position_of.resize(n);
    label_at.resize(n);
    std::iota(position_of.begin(), position_of.end(), 0);
    std::iota(label_at.begin(), label_at.end(), 0);
  }

  void fswap_at(int p) {
    group.circuit.push_back(make_gate("fswap", p, fswap()));
    int x = label_at[p], y = label_at[p + 1];
    std::swap(label_at[p], label_at[p + 1]);
    std::swap(position_of[x], position_of[y]);
    // Readout bits already parked on these wires ride along.
    for (auto& t : group.terms) {
      if (t.bit_left == p) t.bit_left = p + 1;
      else if (t.bit_left == p + 1) t.bit_left = p;
      if (t.bit_right == p) t.bit_right = p + 1;
      else if (t.bit_right == p + 1) t.bit_right = p;
    }
  }

  // Routes the two modes adjacent, aligns the spin-orbit phase, applies the
  // diagonalizer and records where the outcome bits sit.
  void add_term(int edge_index, Spin spin_a, GroupKind kind) {
    const Edge& e = lattice.edges()[edge_index];
    const Spin spin_b = kind == GroupKind::Hop ? spin_a : flip(spin_a);
    const int qa = map.qubit_of(e.a, spin_a);
    const int qb = map.qubit_of(e.b, spin_b);
    int pa = position_of[qa];
    int pb = position_of[qb];
    const bool a_left = pa < pb;
    if (!a_left) std::swap(pa, pb);
    // Walk the right mode down to the left one.
    for (int p = pb; p > pa + 1; --p) fswap_at(p - 1);

    if (kind == GroupKind::SpinOrbit) {
      // Structural coefficient of a^dag_left a_right; the prerotation turns
      // the pair block into the plain hopping block.
      Complex c = Complex{0.0, 1.0} * so_bond_phase(lattice.edge_vector(e), spin_a);
      if (!a_left) c = std::conj(c);
      group.circuit.push_back(
          make_gate("so-prerotation", pa, so_prerotation(std::arg(c))));
    }
    group.circuit.push_back(make_gate("diagonalizer", pa, diagonalizer()));

    // The diagonalized observable lives in wire order; the mode
    // orientation is already folded into the prerotation phase.
    MeasuredTerm term;
    term.edge = edge_index;
    term.spin_a = spin_a;
    term.bit_left = pa;
    term.bit_right = pa + 1;
    group.terms.push_back(term);
  }
};

double pair_energy(const QuantumState& state, const MeasuredTerm& term) {
  auto probs = state.probabilities({term.bit_left, term.bit_right});
  return probs[0b01] - probs[0b10];
}

}  // namespace

std::vector<MeasurementGroup> build_groups(const Lattice& lattice,
                                           const QubitMap& map) {
  std::vector<MeasurementGroup> groups;

  MeasurementGroup coulomb;
  coulomb.label = "coulomb";
  coulomb.kind = GroupKind::Coulomb;
  for (int s = 0; s < lattice.num_sites(); ++s) {
    MeasuredTerm t;
    t.edge = s;
    t.bit_left = 2 * s;
    t.bit_right = 2 * s + 1;
    coulomb.terms.push_back(t);
  }
  groups.push_back(std::move(coulomb));

  std::vector<std::vector<int>> edges_by_set(4);
  for (int e = 0; e < static_cast<int>(lattice.edges().size()); ++e)
    edges_by_set[geometric_set(lattice, e)].push_back(e);

  for (GroupKind kind : {GroupKind::Hop, GroupKind::SpinOrbit}) {
    for (int set = 0; set < 4; ++set) {
      for (Spin spin_a : {Spin::Up, Spin::Down}) {
        GroupBuilder builder(lattice, map);
        builder.group.kind = kind;
        std::ostringstream label;
        label << (kind == GroupKind::Hop ? "hop" : "so") << "-"
              << set_name(set) << "-";
        if (kind == GroupKind::Hop)
          label << (spin_a == Spin::Up ? "up" : "down");
        else
          label << (spin_a == Spin::Up ? "ud" : "du");
        builder.group.label = label.str();
        for (int e : edges_by_set[set]) builder.add_term(e, spin_a, kind);
        groups.push_back(std::move(builder.group));
      }
    }
  }
  return groups;
}

double coulomb_energy(const QuantumState& state, const MeasurementGroup& group,
                      double u) {
  if (group.kind != GroupKind::Coulomb)
    throw std::invalid_argument("coulomb_energy expects the Coulomb group");
  double acc = 0.0;
  for (const auto& t : group.terms) {
    auto probs = state.probabilities({t.bit_left, t.bit_right});
    acc += probs[0b11];
  }
  return u * acc;
}

double group_energy(const QuantumState& state, const MeasurementGroup& group,
                    const Couplings& c) {
  if (group.kind == GroupKind::Coulomb) return coulomb_energy(state, group, c.u);
  if (group.terms.empty()) return 0.0;
  const double coeff =
      group.kind == GroupKind::Hop ? -c.t : (2.0 / 3.0) * c.lambda_r;
  if (coeff == 0.0) return 0.0;
  auto work = state.clone();
  work->apply(group.circuit);
  double acc = 0.0;
  for (const auto& t : group.terms) acc += pair_energy(*work, t);
  return coeff * acc;
}

EnergyReport total_energy(const QuantumState& state,
                          const std::vector<MeasurementGroup>& groups,
                          const Couplings& c, int num_sites) {
  EnergyReport report;
  report.group_energies.resize(groups.size());

  // Group measurements are independent; fan them out.
  std::vector<std::future<double>> futures;
  futures.reserve(groups.size());
  for (const auto& g : groups)
    futures.push_back(std::async(std::launch::async, [&state, &g, &c]() {
      return group_energy(state, g, c);
    }));
  for (std::size_t i = 0; i < groups.size(); ++i) {
    double value = futures[i].get();
    report.group_energies[i] = {groups[i].label, value};
    switch (groups[i].kind) {
      case GroupKind::Coulomb: report.e_coulomb += value; break;
      case GroupKind::Hop: report.e_hop += value; break;
      case GroupKind::SpinOrbit: report.e_so += value; break;
    }
  }
  report.total = report.e_hop + report.e_coulomb + report.e_so;
  report.per_site = report.total / num_sites;
  return report;
}

std::string EnergyReport::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "group,energy\n";
  for (const auto& [label, value] : group_energies)
    os << label << "," << value << "\n";
  os << "total_hopping," << e_hop << "\n";
  os << "total_coulomb," << e_coulomb << "\n";
  os << "total_spin_orbit," << e_so << "\n";
  os << "total," << total << "\n";
  os << "per_site," << per_site << "\n";
  return os.str();
}

std::string EnergyReport::summary() const {
  std::ostringstream os;
  os.precision(10);
  os << "energy per site " << per_site << "  total " << total << "  (hop "
     << e_hop << ", coulomb " << e_coulomb << ", spin-orbit " << e_so << ")";
  return os.str();
}

}  // namespace agsim
