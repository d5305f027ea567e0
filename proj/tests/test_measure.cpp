#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "agsim/lanczos.hpp"
#include "agsim/measure.hpp"
#include "agsim/prep.hpp"

using namespace agsim;
using Cd = std::complex<double>;

namespace {

std::unique_ptr<QuantumState> random_dense_state(int n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> dist;
  Eigen::VectorXcd v(Eigen::Index(1) << n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Cd(dist(gen), dist(gen));
  v.normalize();
  return make_statevector(v);
}

}  // namespace

TEST_CASE("exactly seventeen groups at every size") {
  for (int nx = 1; nx <= 4; ++nx)
    for (int ny = 1; ny <= 4; ++ny) {
      Lattice l({nx, ny});
      QubitMap map(l);
      auto groups = build_groups(l, map);
      CHECK(groups.size() == 17);
      // Term coverage: every edge in exactly four groups, sites once.
      std::vector<int> edge_count(l.edges().size(), 0);
      int coulomb_terms = 0;
      for (const auto& g : groups) {
        if (g.kind == GroupKind::Coulomb)
          coulomb_terms += static_cast<int>(g.terms.size());
        else
          for (const auto& t : g.terms) ++edge_count[t.edge];
      }
      CHECK(coulomb_terms == l.num_sites());
      for (int c : edge_count) CHECK(c == 4);
    }
}

TEST_CASE("coulomb group basics") {
  Lattice l({1, 1});
  QubitMap map(l);
  auto groups = build_groups(l, map);
  const auto& coulomb = groups[0];
  REQUIRE(coulomb.kind == GroupKind::Coulomb);
  CHECK(coulomb.circuit.empty());
  CHECK(coulomb.terms.size() == 6);

  auto vacuum = make_statevector(12, "000000000000");
  CHECK(coulomb_energy(*vacuum, coulomb, 0.7) == doctest::Approx(0.0));

  auto full = make_statevector(12, "111111111111");
  CHECK(coulomb_energy(*full, coulomb, 0.7) == doctest::Approx(6 * 0.7));

  // Uncorrelated half filling: <n_up n_dn> = 1/4 per site.
  GivensCircuit circuit =
      givens_compile(occupied_orbitals(quadratic_matrix(l, map, 1.0, 0.0)));
  auto tb = prepare(circuit, SimOptions{});
  CHECK(coulomb_energy(*tb, coulomb, 0.5) ==
        doctest::Approx(0.75).epsilon(1e-10));

  CHECK_THROWS(coulomb_energy(*vacuum, groups[1], 0.7));
}

TEST_CASE("product basis states have zero hopping energy") {
  Lattice l({1, 1});
  QubitMap map(l);
  auto groups = build_groups(l, map);
  auto basis = make_statevector(12, "101010010101");
  Couplings c{1.0, 0.0, 0.0};
  for (const auto& g : groups)
    if (g.kind == GroupKind::Hop)
      CHECK(group_energy(*basis, g, c) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a symmetric single excitation on one pair reads -t") {
  // Modes (site0 up, site1 up) hold (|01> + |10>)/sqrt(2); every other mode
  // is empty. The only nonzero hopping term is that edge's, with energy -t.
  Lattice l({1, 1});
  QubitMap map(l);
  const int q0 = map.qubit_of(0, Spin::Up);  // 0
  const int q1 = map.qubit_of(1, Spin::Up);  // 2
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(1 << 12);
  auto idx = [&](int qubit) { return std::uint64_t(1) << (11 - qubit); };
  v[idx(q0)] = 1.0 / std::sqrt(2.0);
  v[idx(q1)] = 1.0 / std::sqrt(2.0);
  auto state = make_statevector(v);

  Couplings c{1.0, 0.0, 0.0};
  auto groups = build_groups(l, map);
  double total = 0;
  for (const auto& g : groups) total += group_energy(*state, g, c);
  CHECK(total == doctest::Approx(-c.t).epsilon(1e-10));

  SparseHamiltonian h = build_hamiltonian(l, map, c);
  CHECK(h.expectation(v) == doctest::Approx(-c.t).epsilon(1e-12));
}

TEST_CASE("group sums equal the exact expectation on random states") {
  for (auto [nx, ny] : {std::pair{1, 1}, {1, 2}}) {
    Lattice l({nx, ny});
    QubitMap map(l);
    auto groups = build_groups(l, map);
    Couplings c{1.0, 0.5, 0.8};
    SparseHamiltonian h = build_hamiltonian(l, map, c);
    for (unsigned seed : {1u, 2u, 3u}) {
      auto state = random_dense_state(map.total_qubits(), seed);
      EnergyReport report = total_energy(*state, groups, c, l.num_sites());
      double direct = h.expectation(state->to_dense());
      CHECK(report.total == doctest::Approx(direct).epsilon(1e-11));
      CHECK(report.total ==
            doctest::Approx(report.e_hop + report.e_coulomb + report.e_so));
    }
  }
}

TEST_CASE("part totals match part expectations") {
  Lattice l({1, 2});
  QubitMap map(l);
  auto groups = build_groups(l, map);
  Couplings c{0.9, 0.4, 1.1};
  auto state = random_dense_state(map.total_qubits(), 11);
  Eigen::VectorXcd dense = state->to_dense();
  EnergyReport report = total_energy(*state, groups, c, l.num_sites());

  SparseHamiltonian hop = build_hamiltonian(l, map, c, {true, false, false});
  SparseHamiltonian cou = build_hamiltonian(l, map, c, {false, true, false});
  SparseHamiltonian so = build_hamiltonian(l, map, c, {false, false, true});
  CHECK(report.e_hop == doctest::Approx(hop.expectation(dense)).epsilon(1e-10));
  CHECK(report.e_coulomb == doctest::Approx(cou.expectation(dense)).epsilon(1e-10));
  CHECK(report.e_so == doctest::Approx(so.expectation(dense)).epsilon(1e-10));
}

TEST_CASE("group circuits map terms to commuting diagonal observables") {
  // Operationally: applying a group circuit to a basis state and undoing it
  // must land back on the same basis ray whenever the observable-relevant
  // bits agree; it suffices that measured bits are classical after the
  // circuit, which the oracle equivalence above pins down. Here we verify
  // the circuit itself is norm-preserving and deterministic on basis
  // states' outcome marginals.
  Lattice l({1, 1});
  QubitMap map(l);
  auto groups = build_groups(l, map);
  for (const auto& g : groups) {
    if (g.kind == GroupKind::Coulomb) continue;
    auto state = random_dense_state(12, 5);
    auto work = state->clone();
    work->apply(g.circuit);
    CHECK(work->norm() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("sampled readout converges with shots") {
  Lattice l({1, 1});
  QubitMap map(l);
  auto groups = build_groups(l, map);
  Couplings c{1.0, 0.5, 0.0};
  GivensCircuit circuit =
      givens_compile(occupied_orbitals(quadratic_matrix(l, map, 1.0, 0.0)));
  auto state = prepare(circuit, SimOptions{});

  EnergyReport exact = total_energy(*state, groups, c, l.num_sites());

  // Sampled estimate of the Coulomb group from counts.
  auto estimate_coulomb = [&](std::int64_t shots, std::uint64_t seed) {
    auto counts = state->sample(shots, seed);
    double acc = 0;
    for (const auto& t : groups[0].terms)
      for (const auto& [bits, cnt] : counts)
        if (bits[t.bit_left] == '1' && bits[t.bit_right] == '1')
          acc += double(cnt);
    return c.u * acc / double(shots);
  };
  double exact_coulomb = coulomb_energy(*state, groups[0], c.u);
  double err3 = std::abs(estimate_coulomb(1000, 42) - exact_coulomb);
  double err5 = std::abs(estimate_coulomb(100000, 42) - exact_coulomb);
  CHECK(err5 < err3 + 1e-12);
  CHECK(err5 <= 0.02);
  (void)exact;
}

TEST_CASE("backends agree on every measurement-group distribution") {
  // Dense and untruncated MPS runs of the same circuit must yield the same
  // outcome marginals for every term of every group.
  Lattice l({1, 1});
  QubitMap map(l);
  auto groups = build_groups(l, map);
  GivensCircuit circuit =
      givens_compile(occupied_orbitals(quadratic_matrix(l, map, 1.0, 0.5)));
  SimOptions mps_options;
  mps_options.backend = BackendKind::Mps;
  mps_options.chi_max = 64;
  auto sv = prepare(circuit, SimOptions{});
  auto mps = prepare(circuit, mps_options);
  for (const auto& g : groups) {
    auto sv_work = sv->clone();
    auto mps_work = mps->clone();
    sv_work->apply(g.circuit);
    mps_work->apply(g.circuit);
    for (const auto& t : g.terms) {
      auto pa = sv_work->probabilities({t.bit_left, t.bit_right});
      auto pb = mps_work->probabilities({t.bit_left, t.bit_right});
      for (int k = 0; k < 4; ++k)
        CHECK(pa[k] == doctest::Approx(pb[k]).epsilon(1e-8));
    }
  }
}

TEST_CASE("csv and summary render") {
  Lattice l({1, 1});
  QubitMap map(l);
  auto groups = build_groups(l, map);
  auto state = make_statevector(12, "111111111111");
  EnergyReport report = total_energy(*state, groups, {1.0, 0.5, 0.0}, 6);
  std::string csv = report.to_csv();
  CHECK(csv.find("group,energy") == 0);
  CHECK(csv.find("coulomb,3") != std::string::npos);
  CHECK(report.summary().find("per site") != std::string::npos);
}
