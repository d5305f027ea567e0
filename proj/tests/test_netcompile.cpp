#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "agsim/netcompile.hpp"

using namespace agsim;

namespace {

std::vector<std::vector<int>> snapshot_orderings(const TrotterPlan& plan) {
  std::vector<std::vector<int>> out;
  for (const auto& s : plan.snapshots) out.push_back(s.ordering);
  return out;
}

// Table-style golden orderings for the two-hexagon column, row by row in
// display order (odd rows reversed). Each entry is the flat chain ordering.
const std::vector<std::vector<int>> kGolden12 = {
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19},
    {1, 3, 0, 5, 2, 4, 7, 9, 6, 11, 8, 13, 10, 12, 15, 17, 14, 19, 16, 18},
    {3, 5, 1, 4, 0, 2, 9, 11, 7, 13, 6, 12, 8, 10, 17, 19, 15, 18, 14, 16},
    {5, 4, 3, 2, 1, 0, 11, 13, 9, 12, 7, 10, 6, 8, 19, 18, 17, 16, 15, 14},
    {5, 4, 3, 2, 1, 0, 13, 12, 11, 10, 9, 8, 7, 6, 19, 18, 17, 16, 15, 14},
    {5, 4, 3, 2, 1, 0, 12, 10, 13, 8, 11, 6, 9, 7, 19, 18, 17, 16, 15, 14},
    {4, 2, 5, 0, 3, 1, 10, 8, 12, 6, 13, 7, 11, 9, 18, 16, 19, 14, 17, 15},
    {2, 0, 4, 1, 5, 3, 8, 6, 10, 7, 12, 9, 13, 11, 16, 14, 18, 15, 19, 17},
    {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19},
};

}  // namespace

TEST_CASE("row subchains") {
  Lattice l12({1, 2});
  QubitMap m12(l12);
  auto rows = row_subchains(l12, m12);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0] == std::pair{0, 6});
  CHECK(rows[1] == std::pair{6, 8});
  CHECK(rows[2] == std::pair{14, 6});

  Lattice l11({1, 1});
  auto rows11 = row_subchains(l11, QubitMap(l11));
  REQUIRE(rows11.size() == 2);
  CHECK(rows11[0].second == 6);
  CHECK(rows11[1].second == 6);

  Lattice l22({2, 2});
  auto rows22 = row_subchains(l22, QubitMap(l22));
  REQUIRE(rows22.size() == 3);
  CHECK(rows22[0].second == 10);
  CHECK(rows22[1].second == 12);
  CHECK(rows22[2].second == 10);
}

TEST_CASE("swap layer brick patterns") {
  auto even6 = swap_layer(SwapParity::Even, 6);
  REQUIRE(even6.size() == 3);
  CHECK(even6[0] == std::pair{0, 1});
  CHECK(even6[1] == std::pair{2, 3});
  CHECK(even6[2] == std::pair{4, 5});
  auto odd6 = swap_layer(SwapParity::Odd, 6);
  REQUIRE(odd6.size() == 2);
  CHECK(odd6[0] == std::pair{1, 2});
  CHECK(odd6[1] == std::pair{3, 4});
  CHECK(swap_layer(SwapParity::Odd, 2).empty());
}

TEST_CASE("two-hexagon hopping plan reproduces the golden schedule") {
  Lattice l({1, 2});
  QubitMap map(l);
  TrotterPlan plan = compile_step(l, map, HamiltonianPart::Hopping);
  auto orderings = snapshot_orderings(plan);
  REQUIRE(orderings.size() == kGolden12.size());
  for (std::size_t i = 0; i < kGolden12.size(); ++i)
    CHECK(orderings[i] == kGolden12[i]);

  // The named interactions sit at their snapshots.
  auto fired_at = [&](int snap) {
    std::vector<std::pair<int, int>> out;
    for (const auto& pi : plan.snapshots[snap].fired)
      out.emplace_back(pi.label_left, pi.label_right);
    return out;
  };
  auto has = [](const std::vector<std::pair<int, int>>& v, int a, int b) {
    return std::find(v.begin(), v.end(), std::pair{a, b}) != v.end();
  };
  CHECK(has(fired_at(1), 2, 4));    // horizontal interaction (2, 4)
  CHECK(has(fired_at(3), 0, 11));   // vertical interaction (0, 11)
  CHECK(plan.snapshots[4].note == "Extra permutation step");
  CHECK(plan.snapshots[5].note == "Extra permutation step");

  std::string table = export_plan_table(plan, l, map);
  CHECK(table.find("Horizontal interaction (2, 4)") != std::string::npos);
  CHECK(table.find("Vertical interaction (0, 11)") != std::string::npos);
  CHECK(table.find("Extra permutation step") != std::string::npos);
  // First display block, middle row reversed.
  CHECK(table.find("13 12 11 10  9  8  7  6") != std::string::npos);
}

TEST_CASE("verification passes for every size and part") {
  for (int nx = 1; nx <= 4; ++nx)
    for (int ny = 1; ny <= 4; ++ny) {
      Lattice l({nx, ny});
      QubitMap map(l);
      for (HamiltonianPart part :
           {HamiltonianPart::Coulomb, HamiltonianPart::Hopping,
            HamiltonianPart::SpinOrbit}) {
        TrotterPlan plan = compile_step(l, map, part);
        PlanReport report = verify_plan(plan, l, map);
        INFO("lattice ", nx, "x", ny, " part ", static_cast<int>(part));
        for (const auto& p : report.problems) INFO(p);
        CHECK(report.ok());
      }
    }
}

TEST_CASE("coulomb plan has site-count interactions and no swaps") {
  Lattice l({2, 1});
  QubitMap map(l);
  TrotterPlan plan = compile_step(l, map, HamiltonianPart::Coulomb);
  int swaps = 0, interactions = 0;
  for (const auto& layer : plan.layers) {
    if (std::holds_alternative<SwapLayer>(layer))
      swaps += std::get<SwapLayer>(layer).positions.size();
    else
      interactions += std::get<InteractionLayer>(layer).interactions.size();
  }
  CHECK(swaps == 0);
  CHECK(interactions == l.num_sites());
}

TEST_CASE("plan depth is linear in the row length, independent of ny") {
  for (int nx = 1; nx <= 4; ++nx) {
    std::size_t worst = 0;
    for (int ny = 1; ny <= 4; ++ny) {
      Lattice l({nx, ny});
      QubitMap map(l);
      TrotterPlan plan = compile_step(l, map, HamiltonianPart::Hopping);
      worst = std::max(worst, plan.layers.size());
    }
    // Two swap layers plus at most two interaction layers per transition.
    std::size_t row_len = 2 * (2 * nx + 2);
    CHECK(worst <= 5 * row_len + 5);
  }
}

TEST_CASE("interaction parity rule") {
  // Same-row hopping pairs carry equal-parity labels, cross-row pairs mixed
  // parity; spin-orbit is the complement.
  for (auto [nx, ny] : {std::pair{1, 2}, {2, 1}, {2, 2}}) {
    Lattice l({nx, ny});
    QubitMap map(l);
    for (HamiltonianPart part :
         {HamiltonianPart::Hopping, HamiltonianPart::SpinOrbit}) {
      TrotterPlan plan = compile_step(l, map, part);
      for (const auto& layer : plan.layers) {
        if (!std::holds_alternative<InteractionLayer>(layer)) continue;
        for (const auto& pi : std::get<InteractionLayer>(layer).interactions) {
          const Edge& e = l.edges()[pi.edge];
          bool same_row = e.orientation == EdgeOrientation::Horizontal;
          bool equal_parity = (pi.label_left % 2) == (pi.label_right % 2);
          bool hopping = part == HamiltonianPart::Hopping;
          CHECK(equal_parity == (hopping == same_row));
        }
      }
    }
  }
}

TEST_CASE("verify_plan flags a broken plan") {
  Lattice l({1, 1});
  QubitMap map(l);
  TrotterPlan plan = compile_step(l, map, HamiltonianPart::Hopping);
  // Drop the final swap layer: the permutation no longer closes.
  plan.layers.pop_back();
  PlanReport report = verify_plan(plan, l, map);
  CHECK(!report.identity_permutation);
  CHECK(!report.ok());
}
