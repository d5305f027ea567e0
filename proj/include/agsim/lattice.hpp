#ifndef AGSIM_LATTICE_HPP
#define AGSIM_LATTICE_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace agsim {

enum class Spin { Up, Down };

inline Spin flip(Spin s) { return s == Spin::Up ? Spin::Down : Spin::Up; }

// The three unit vectors connecting neighbouring sites of the zig-zag
// honeycomb: d1 = (sqrt(3)/2, 1/2), d2 = (-sqrt(3)/2, 1/2), d3 = (0, -1).
enum class EdgeDirection { D1, D2, D3 };

enum class EdgeOrientation { Horizontal, Vertical };

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

Vec2 direction_vector(EdgeDirection d);

struct LatticeSpec {
  int nx = 1;  // hexagons along x
  int ny = 1;  // hexagons along y
};

struct Site {
  int index = -1;
  int row = -1;  // row 0 at the top
  int col = -1;  // global column, 0 .. 2*nx+1
  Vec2 position;
};

struct Edge {
  int a = -1;  // site indices, a < b
  int b = -1;
  EdgeDirection direction = EdgeDirection::D1;
  EdgeOrientation orientation = EdgeOrientation::Horizontal;
  // True when position(b) - position(a) equals -d rather than +d.
  bool reversed = false;
};

// Honeycomb lattice of (nx, ny) regular hexagons in zig-zag orientation,
// open boundaries. Sites are numbered row by row following the snake
// pattern: row 0 left to right, row 1 right to left, and so on. The first
// and last rows hold 2*nx+1 sites, middle rows 2*nx+2. Immutable after
// construction.
class Lattice {
 public:
  explicit Lattice(LatticeSpec spec);

  const LatticeSpec& spec() const { return spec_; }
  int num_sites() const { return static_cast<int>(sites_.size()); }
  int num_rows() const { return spec_.ny + 1; }
  const std::vector<Site>& sites() const { return sites_; }
  const std::vector<Edge>& edges() const { return edges_; }

  // Per-row [first, last] site-index range (rows are contiguous in the
  // snake numbering).
  const std::vector<std::pair<int, int>>& rows() const { return rows_; }

  // Site index at (row, col), or -1 when that column is absent in the row.
  int site_at(int row, int col) const;

  // Index into edges() for the unordered pair, or -1.
  int edge_between(int site_a, int site_b) const;

  // Geometric vector from edge.a to edge.b (a unit vector).
  Vec2 edge_vector(const Edge& e) const;

  int degree(int site) const;

  // Site 6-tuples of every hexagon, walked around the cycle.
  std::vector<std::array<int, 6>> hexagons() const;

  // Plain-text description (site list with positions, edge list with
  // direction tags) for debugging and golden tests.
  std::string to_text() const;

 private:
  LatticeSpec spec_;
  std::vector<Site> sites_;
  std::vector<Edge> edges_;
  std::vector<std::pair<int, int>> rows_;
  std::vector<std::vector<int>> site_grid_;  // [row][col] -> site index or -1
  std::vector<std::vector<int>> edge_lookup_;
};

// Spin-orbital -> qubit assignment along the snake. Each site s owns qubits
// (2s, 2s+1); in even rows (2s, 2s+1) = (up, down), in odd rows the
// assignment is inverted.
class QubitMap {
 public:
  explicit QubitMap(const Lattice& lattice);

  int total_qubits() const { return total_; }
  int qubit_of(int site, Spin spin) const;
  std::pair<int, Spin> site_of(int qubit) const;

 private:
  int total_ = 0;
  std::vector<int> row_of_site_;
};

Lattice build_lattice(LatticeSpec spec);

}  // namespace agsim

#endif
