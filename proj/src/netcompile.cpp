#include "agsim/netcompile.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace agsim {

namespace {

struct RowInfo {
  int start = 0;   // first chain position
  int length = 0;  // qubit count
  int row = 0;
};

std::vector<RowInfo> row_infos(const Lattice& lattice) {
  std::vector<RowInfo> rows;
  for (int r = 0; r < lattice.num_rows(); ++r) {
    auto [a, b] = lattice.rows()[r];
    rows.push_back({2 * a, 2 * (b - a + 1), r});
  }
  return rows;
}

std::string spin_name(Spin s) { return s == Spin::Up ? "up" : "down"; }

// Scans every chain-adjacent pair of the current ordering and places the
// not-yet-applied terms of the requested part. `applied` is keyed per term.
class InteractionScanner {
 public:
  InteractionScanner(const Lattice& lattice, const QubitMap& map,
                     HamiltonianPart part)
      : lattice_(lattice), map_(map), part_(part) {
    if (part == HamiltonianPart::Coulomb)
      applied_.assign(lattice.num_sites(), false);
    else
      applied_.assign(2 * lattice.edges().size(), false);
  }

  int expected_terms() const { return static_cast<int>(applied_.size()); }

  int applied_terms() const {
    return static_cast<int>(std::count(applied_.begin(), applied_.end(), true));
  }

  std::vector<PlacedInteraction> scan(const std::vector<int>& ordering) {
    std::vector<PlacedInteraction> out;
    const int n = static_cast<int>(ordering.size());
    for (int p = 0; p + 1 < n; ++p) {
      const int x = ordering[p];
      const int y = ordering[p + 1];
      auto [sx, spin_x] = map_.site_of(x);
      auto [sy, spin_y] = map_.site_of(y);
      if (part_ == HamiltonianPart::Coulomb) {
        if (sx != sy || applied_[sx]) continue;
        applied_[sx] = true;
        PlacedInteraction pi;
        pi.position = p;
        pi.part = part_;
        pi.edge = sx;
        pi.spin_a = spin_x;
        pi.a_on_left = spin_x == Spin::Up;
        pi.label_left = x;
        pi.label_right = y;
        out.push_back(pi);
        continue;
      }
      if (sx == sy) continue;
      const int ei = lattice_.edge_between(sx, sy);
      if (ei < 0) continue;
      const bool equal_spin = spin_x == spin_y;
      if (part_ == HamiltonianPart::Hopping && !equal_spin) continue;
      if (part_ == HamiltonianPart::SpinOrbit && equal_spin) continue;
      const Edge& e = lattice_.edges()[ei];
      const Spin spin_a = (sx == e.a) ? spin_x : spin_y;
      const int key = 2 * ei + (spin_a == Spin::Up ? 0 : 1);
      if (applied_[key]) continue;
      applied_[key] = true;
      PlacedInteraction pi;
      pi.position = p;
      pi.part = part_;
      pi.edge = ei;
      pi.spin_a = spin_a;
      pi.a_on_left = (sx == e.a);
      pi.label_left = x;
      pi.label_right = y;
      out.push_back(pi);
    }
    return out;
  }

 private:
  const Lattice& lattice_;
  const QubitMap& map_;
  HamiltonianPart part_;
  std::vector<bool> applied_;
};

void apply_swaps(std::vector<int>& ordering, const SwapLayer& layer) {
  for (int p : layer.positions) std::swap(ordering[p], ordering[p + 1]);
}

}  // namespace

std::vector<std::pair<int, int>> row_subchains(const Lattice& lattice,
                                               const QubitMap& map) {
  (void)map;
  std::vector<std::pair<int, int>> out;
  for (const RowInfo& r : row_infos(lattice)) out.emplace_back(r.start, r.length);
  return out;
}

std::vector<std::pair<int, int>> swap_layer(SwapParity kind, int length) {
  if (length < 2) throw std::invalid_argument("swap_layer needs length >= 2");
  std::vector<std::pair<int, int>> pairs;
  for (int p = kind == SwapParity::Even ? 0 : 1; p + 1 < length; p += 2)
    pairs.emplace_back(p, p + 1);
  return pairs;
}

std::string term_key(const PlacedInteraction& p) {
  std::ostringstream os;
  switch (p.part) {
    case HamiltonianPart::Coulomb:
      os << "coulomb site " << p.edge;
      break;
    case HamiltonianPart::Hopping:
      os << "hop edge " << p.edge << " " << spin_name(p.spin_a);
      break;
    case HamiltonianPart::SpinOrbit:
      os << "so edge " << p.edge << " " << spin_name(p.spin_a);
      break;
  }
  return os.str();
}

TrotterPlan compile_step(const Lattice& lattice, const QubitMap& map,
                         HamiltonianPart part) {
  TrotterPlan plan;
  plan.part = part;
  plan.n_qubits = map.total_qubits();

  std::vector<int> ordering(plan.n_qubits);
  std::iota(ordering.begin(), ordering.end(), 0);
  InteractionScanner scanner(lattice, map, part);

  PlanSnapshot cur;
  cur.ordering = ordering;

  auto fire = [&]() {
    auto placed = scanner.scan(ordering);
    if (placed.empty()) return;
    plan.layers.emplace_back(InteractionLayer{placed});
    cur.fired.insert(cur.fired.end(), placed.begin(), placed.end());
  };

  if (part == HamiltonianPart::Coulomb) {
    // Every site's (up, down) pair is chain-adjacent by construction; a
    // single interaction layer and no swaps.
    fire();
    plan.snapshots.push_back(cur);
    if (scanner.applied_terms() != scanner.expected_terms())
      throw std::runtime_error("coulomb plan left sites uncovered");
    return plan;
  }

  const std::vector<RowInfo> rows = row_infos(lattice);
  const int nx = lattice.spec().nx;
  const int ny = lattice.spec().ny;
  const bool has_middle = ny >= 2;
  const int boundary_len = 2 * (2 * nx + 1);
  // One full period of the brick permutation: the middle-row length when
  // middle rows exist, else the boundary length. Boundary rows sit out two
  // transitions right after completing half their own period.
  const int transitions = has_middle ? 2 * (2 * nx + 2) : boundary_len;
  const int idle_from = boundary_len / 2 + 1;

  auto push_swap_layer = [&](SwapParity parity, bool idle_boundaries,
                             bool odd_rows_only) {
    SwapLayer layer;
    for (const RowInfo& r : rows) {
      const bool boundary = r.row == 0 || r.row == ny;
      if (idle_boundaries && boundary) continue;
      if (odd_rows_only && r.row % 2 == 0) continue;
      for (auto [a, b] : swap_layer(parity, r.length)) {
        (void)b;
        layer.positions.push_back(r.start + a);
      }
    }
    apply_swaps(ordering, layer);
    plan.layers.emplace_back(layer);
  };

  fire();

  if (part == HamiltonianPart::SpinOrbit) {
    // Aligning swap on odd rows so opposite-spin pairs reach the row
    // boundaries; undone at the end to restore the ordering.
    push_swap_layer(SwapParity::Even, false, true);
    plan.snapshots.push_back(cur);
    cur = PlanSnapshot{ordering, {}, "Spin-orbit alignment"};
    fire();
  }

  for (int t = 1; t <= transitions; ++t) {
    const bool idle =
        has_middle && (t == idle_from || t == idle_from + 1);
    // Interactions are placed at transition boundaries only: a pair meeting
    // at a brick is chain-adjacent at the snapshot on one side of it, and
    // row boundaries only change at the even layer.
    push_swap_layer(SwapParity::Even, idle, false);
    push_swap_layer(SwapParity::Odd, idle, false);
    plan.snapshots.push_back(cur);
    cur = PlanSnapshot{ordering, {}, idle ? "Extra permutation step" : ""};
    fire();
  }

  if (part == HamiltonianPart::SpinOrbit) {
    push_swap_layer(SwapParity::Even, false, true);
    plan.snapshots.push_back(cur);
    cur = PlanSnapshot{ordering, {}, "Spin-orbit alignment undone"};
  }
  plan.snapshots.push_back(cur);

  if (scanner.applied_terms() != scanner.expected_terms()) {
    // Diagnostic listing of uncovered terms.
    PlanReport report = verify_plan(plan, lattice, map);
    std::ostringstream os;
    os << "swap-network compilation left terms uncovered:";
    for (const auto& p : report.problems) os << "\n  " << p;
    throw std::runtime_error(os.str());
  }
  return plan;
}

PlanReport verify_plan(const TrotterPlan& plan, const Lattice& lattice,
                       const QubitMap& map) {
  PlanReport report;
  std::vector<int> ordering(plan.n_qubits);
  std::iota(ordering.begin(), ordering.end(), 0);

  for (const auto& layer : plan.layers) {
    if (const auto* swaps = std::get_if<SwapLayer>(&layer)) {
      std::vector<bool> used(plan.n_qubits, false);
      for (int p : swaps->positions) {
        if (p < 0 || p + 1 >= plan.n_qubits) {
          report.swaps_disjoint = false;
          report.problems.push_back("swap position out of range");
          continue;
        }
        if (used[p] || used[p + 1]) {
          report.swaps_disjoint = false;
          report.problems.push_back("overlapping fswap pairs in one layer");
        }
        used[p] = used[p + 1] = true;
      }
      for (int p : swaps->positions)
        if (p + 1 < plan.n_qubits) std::swap(ordering[p], ordering[p + 1]);
      continue;
    }
    const auto& inter = std::get<InteractionLayer>(layer);
    for (const PlacedInteraction& pi : inter.interactions) {
      if (pi.position < 0 || pi.position + 1 >= plan.n_qubits) {
        report.labels_consistent = false;
        report.problems.push_back("interaction position out of range");
        continue;
      }
      if (ordering[pi.position] != pi.label_left ||
          ordering[pi.position + 1] != pi.label_right) {
        report.labels_consistent = false;
        report.problems.push_back("recorded labels disagree with replay at " +
                                  term_key(pi));
      }
      auto [sl, spin_l] = map.site_of(pi.label_left);
      auto [sr, spin_r] = map.site_of(pi.label_right);
      if (pi.part == HamiltonianPart::Coulomb) {
        if (sl != sr || sl != pi.edge) {
          report.labels_consistent = false;
          report.problems.push_back("coulomb interaction on a non-site pair");
        }
      } else {
        int ei = lattice.edge_between(sl, sr);
        if (ei != pi.edge || ei < 0) {
          report.labels_consistent = false;
          report.problems.push_back("interaction pair is not the claimed edge");
        } else {
          bool equal_spin = spin_l == spin_r;
          if ((pi.part == HamiltonianPart::Hopping) != equal_spin) {
            report.labels_consistent = false;
            report.problems.push_back("spin pairing violates the part rule at " +
                                      term_key(pi));
          }
        }
      }
      ++report.term_counts[term_key(pi)];
    }
  }

  report.final_permutation = ordering;
  std::vector<int> identity(plan.n_qubits);
  std::iota(identity.begin(), identity.end(), 0);
  report.identity_permutation = ordering == identity;
  if (!report.identity_permutation)
    report.problems.push_back("final permutation is not the identity");

  // Expected multiset of terms.
  std::vector<std::string> expected;
  if (plan.part == HamiltonianPart::Coulomb) {
    for (int s = 0; s < lattice.num_sites(); ++s) {
      PlacedInteraction pi;
      pi.part = plan.part;
      pi.edge = s;
      expected.push_back(term_key(pi));
    }
  } else {
    for (int e = 0; e < static_cast<int>(lattice.edges().size()); ++e)
      for (Spin s : {Spin::Up, Spin::Down}) {
        PlacedInteraction pi;
        pi.part = plan.part;
        pi.edge = e;
        pi.spin_a = s;
        expected.push_back(term_key(pi));
      }
  }
  report.covered_exactly_once = true;
  for (const auto& key : expected) {
    auto it = report.term_counts.find(key);
    int c = it == report.term_counts.end() ? 0 : it->second;
    if (c != 1) {
      report.covered_exactly_once = false;
      std::ostringstream os;
      os << key << " applied " << c << " times";
      report.problems.push_back(os.str());
    }
  }
  if (report.term_counts.size() != expected.size())
    report.covered_exactly_once = false;
  return report;
}

std::string export_plan_table(const TrotterPlan& plan, const Lattice& lattice,
                              const QubitMap& map) {
  (void)map;
  const int nx = lattice.spec().nx;
  const int display_cols = 2 * (2 * nx + 2);
  int label_width = 1;
  for (int v = plan.n_qubits - 1; v >= 10; v /= 10) ++label_width;

  std::ostringstream os;
  for (const PlanSnapshot& snap : plan.snapshots) {
    for (int r = 0; r < lattice.num_rows(); ++r) {
      auto [first, last] = lattice.rows()[r];
      const int start = 2 * first;
      const int len = 2 * (last - first + 1);
      // The row's first-traversed site sits leftmost in even rows and
      // rightmost in odd rows.
      const int anchor = 2 * lattice.sites()[first].col;
      std::vector<std::string> cells(display_cols, "x");
      for (int k = 0; k < len; ++k) {
        int dc = (r % 2 == 0) ? anchor + k : anchor + 1 - k;
        cells[dc] = std::to_string(snap.ordering[start + k]);
      }
      for (int c = 0; c < display_cols; ++c) {
        if (c) os << " ";
        os << std::string(
                  std::max<std::size_t>(0, label_width - cells[c].size()), ' ')
           << cells[c];
      }
      os << "\n";
    }
    if (!snap.note.empty()) os << "-> " << snap.note << "\n";
    for (const PlacedInteraction& pi : snap.fired) {
      const char* kind = "";
      if (pi.part == HamiltonianPart::Coulomb)
        kind = "Coulomb";
      else {
        kind = lattice.edges()[pi.edge].orientation == EdgeOrientation::Vertical
                   ? "Vertical"
                   : "Horizontal";
      }
      os << "-> " << kind << " interaction (" << pi.label_left << ", "
         << pi.label_right << ")\n";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace agsim
