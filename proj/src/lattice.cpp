#include "agsim/lattice.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace agsim {

namespace {
constexpr double kHalfSqrt3 = 0.86602540378443864676;

// A site at (row, col) is the upper ("high") vertex of its zig-zag pair when
// col and row have equal parity.
bool is_high(int row, int col) { return (col % 2) == (row % 2); }
}  // namespace

Vec2 direction_vector(EdgeDirection d) {
  switch (d) {
    case EdgeDirection::D1:
      return {kHalfSqrt3, 0.5};
    case EdgeDirection::D2:
      return {-kHalfSqrt3, 0.5};
    case EdgeDirection::D3:
      return {0.0, -1.0};
  }
  throw std::invalid_argument("unknown edge direction");
}

Lattice::Lattice(LatticeSpec spec) : spec_(spec) {
  if (spec.nx < 1 || spec.ny < 1)
    throw std::invalid_argument("lattice requires nx >= 1 and ny >= 1");

  const int nx = spec.nx;
  const int ny = spec.ny;
  const int n_rows = ny + 1;
  const int n_cols = 2 * nx + 2;

  // Hexagon row j spans site columns [shift(j), shift(j) + 2*nx], with the
  // shift alternating 1, 0, 1, ... down the lattice. A site row is the union
  // of the hexagon rows touching it, so boundary rows miss one column while
  // middle rows are full.
  auto hex_shift = [](int j) { return (j % 2 == 0) ? 1 : 0; };
  auto col_range = [&](int r) -> std::pair<int, int> {
    if (r == 0) return {hex_shift(0), hex_shift(0) + 2 * nx};
    if (r == ny) return {hex_shift(ny - 1), hex_shift(ny - 1) + 2 * nx};
    return {0, 2 * nx + 1};
  };

  site_grid_.assign(n_rows, std::vector<int>(n_cols, -1));
  for (int r = 0; r < n_rows; ++r) {
    auto [lo, hi] = col_range(r);
    int first = static_cast<int>(sites_.size());
    for (int k = lo; k <= hi; ++k) {
      // Snake: even rows run left to right, odd rows right to left.
      int c = (r % 2 == 0) ? k : hi - (k - lo);
      Site s;
      s.index = static_cast<int>(sites_.size());
      s.row = r;
      s.col = c;
      s.position.x = c * kHalfSqrt3;
      s.position.y = is_high(r, c) ? -1.5 * r : -1.5 * r - 0.5;
      site_grid_[r][c] = s.index;
      sites_.push_back(s);
    }
    rows_.emplace_back(first, static_cast<int>(sites_.size()) - 1);
  }

  // Horizontal edges: consecutive occupied columns within a row.
  for (int r = 0; r < n_rows; ++r) {
    for (int c = 0; c + 1 < n_cols; ++c) {
      int u = site_grid_[r][c];
      int v = site_grid_[r][c + 1];
      if (u < 0 || v < 0) continue;
      Edge e;
      e.a = std::min(u, v);
      e.b = std::max(u, v);
      e.orientation = EdgeOrientation::Horizontal;
      Vec2 d{sites_[e.b].position.x - sites_[e.a].position.x,
             sites_[e.b].position.y - sites_[e.a].position.y};
      e.direction = (d.x * d.y > 0) ? EdgeDirection::D1 : EdgeDirection::D2;
      Vec2 ref = direction_vector(e.direction);
      e.reversed = (d.x * ref.x + d.y * ref.y) < 0;
      edges_.push_back(e);
    }
  }
  // Vertical edges: a low site of row r sits one unit above a high site of
  // row r+1 in the columns with c = r+1 (mod 2).
  for (int r = 0; r < n_rows - 1; ++r) {
    for (int c = 0; c < n_cols; ++c) {
      if (c % 2 != (r + 1) % 2) continue;
      int u = site_grid_[r][c];
      int v = site_grid_[r + 1][c];
      if (u < 0 || v < 0) continue;
      Edge e;
      e.a = u;  // upper row is numbered first, so u < v
      e.b = v;
      e.orientation = EdgeOrientation::Vertical;
      e.direction = EdgeDirection::D3;
      e.reversed = false;
      edges_.push_back(e);
    }
  }

  edge_lookup_.assign(sites_.size(), std::vector<int>(sites_.size(), -1));
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    edge_lookup_[edges_[i].a][edges_[i].b] = i;
    edge_lookup_[edges_[i].b][edges_[i].a] = i;
  }
}

int Lattice::site_at(int row, int col) const {
  if (row < 0 || row >= num_rows()) return -1;
  if (col < 0 || col >= static_cast<int>(site_grid_[row].size())) return -1;
  return site_grid_[row][col];
}

int Lattice::edge_between(int site_a, int site_b) const {
  if (site_a < 0 || site_b < 0 || site_a >= num_sites() ||
      site_b >= num_sites())
    return -1;
  return edge_lookup_[site_a][site_b];
}

Vec2 Lattice::edge_vector(const Edge& e) const {
  Vec2 d = direction_vector(e.direction);
  if (e.reversed) return {-d.x, -d.y};
  return d;
}

int Lattice::degree(int site) const {
  int deg = 0;
  for (const Edge& e : edges_)
    if (e.a == site || e.b == site) ++deg;
  return deg;
}

std::vector<std::array<int, 6>> Lattice::hexagons() const {
  std::vector<std::array<int, 6>> out;
  auto hex_shift = [](int j) { return (j % 2 == 0) ? 1 : 0; };
  for (int j = 0; j < spec_.ny; ++j) {
    for (int i = 0; i < spec_.nx; ++i) {
      int c0 = 2 * i + hex_shift(j);
      // Clockwise walk: three top-row sites left to right, then the three
      // bottom-row sites right to left.
      out.push_back({site_at(j, c0), site_at(j, c0 + 1), site_at(j, c0 + 2),
                     site_at(j + 1, c0 + 2), site_at(j + 1, c0 + 1),
                     site_at(j + 1, c0)});
    }
  }
  return out;
}

std::string Lattice::to_text() const {
  std::ostringstream os;
  os << "lattice " << spec_.nx << "x" << spec_.ny << " sites=" << num_sites()
     << " edges=" << edges_.size() << "\n";
  for (const Site& s : sites_)
    os << "site " << s.index << " row=" << s.row << " col=" << s.col << " x="
       << s.position.x << " y=" << s.position.y << "\n";
  for (const Edge& e : edges_) {
    const char* dir = e.direction == EdgeDirection::D1   ? "d1"
                      : e.direction == EdgeDirection::D2 ? "d2"
                                                         : "d3";
    os << "edge " << e.a << " " << e.b << " " << dir
       << (e.reversed ? "-" : "+")
       << (e.orientation == EdgeOrientation::Vertical ? " vertical"
                                                      : " horizontal")
       << "\n";
  }
  return os.str();
}

QubitMap::QubitMap(const Lattice& lattice) {
  total_ = 2 * lattice.num_sites();
  row_of_site_.reserve(lattice.num_sites());
  for (const Site& s : lattice.sites()) row_of_site_.push_back(s.row);
}

int QubitMap::qubit_of(int site, Spin spin) const {
  if (site < 0 || site >= static_cast<int>(row_of_site_.size()))
    throw std::out_of_range("site index out of range");
  bool even_row = row_of_site_[site] % 2 == 0;
  bool low = even_row ? (spin == Spin::Up) : (spin == Spin::Down);
  return low ? 2 * site : 2 * site + 1;
}

std::pair<int, Spin> QubitMap::site_of(int qubit) const {
  if (qubit < 0 || qubit >= total_)
    throw std::out_of_range("qubit index out of range");
  int site = qubit / 2;
  bool even_row = row_of_site_[site] % 2 == 0;
  bool low = qubit % 2 == 0;
  Spin spin = even_row ? (low ? Spin::Up : Spin::Down)
                       : (low ? Spin::Down : Spin::Up);
  return {site, spin};
}

Lattice build_lattice(LatticeSpec spec) { return Lattice(spec); }

}  // namespace agsim
