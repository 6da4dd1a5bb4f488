#pragma once

// Geometries, coupling patterns and exchange graphs.
//
// Sites are addressed in the public API by 1-based (row, col) coordinates.
// Internally every site has a 0-based row-major flat index
//   site = (row - 1) * cols + (col - 1)
// and bit `site` of an occupation bitmask is the excitation on that site.
// A chain of length n is the 1 x n strip, so chain site m is Coord{1, m}.

#include <compare>
#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace spinmirror {

enum class GeometryKind { chain, square, rectangular };

std::string_view to_string(GeometryKind kind);

struct Coord {
  int row = 1;
  int col = 1;
  auto operator<=>(const Coord&) const = default;
};

class Geometry {
 public:
  static Geometry chain(int n);
  static Geometry square(int n);
  static Geometry rectangular(int rows, int cols);

  GeometryKind kind() const { return kind_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t site_count() const { return static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_); }

  /// Chain length or lattice side. Throws for non-square rectangles.
  int side() const;
  bool is_square() const { return rows_ == cols_ && kind_ != GeometryKind::chain; }

  bool contains(Coord c) const { return c.row >= 1 && c.row <= rows_ && c.col >= 1 && c.col <= cols_; }
  std::size_t flat(Coord c) const;
  Coord coord(std::size_t site) const;

  std::size_t vertical_edge_count() const { return static_cast<std::size_t>(rows_ - 1) * cols_; }
  std::size_t horizontal_edge_count() const { return static_cast<std::size_t>(rows_) * (cols_ - 1); }
  std::size_t edge_count() const { return vertical_edge_count() + horizontal_edge_count(); }

  /// Nearest-neighbour site pairs (a < b) in canonical edge order: every
  /// vertical edge (i,j)-(i+1,j) row-major, then every horizontal edge
  /// (i,j)-(i,j+1) row-major.
  std::vector<std::pair<std::size_t, std::size_t>> nearest_neighbour_edges() const;

  bool operator==(const Geometry&) const = default;

 private:
  Geometry(GeometryKind kind, int rows, int cols) : kind_(kind), rows_(rows), cols_(cols) {}

  GeometryKind kind_;
  int rows_;
  int cols_;
};

Geometry build_square_lattice(int n);

int manhattan_distance(const Geometry& geometry, Coord a, Coord b);
int manhattan_distance(const Geometry& geometry, std::size_t a, std::size_t b);

struct Edge {
  std::size_t a = 0;
  std::size_t b = 0;
  double strength = 0.0;
  bool operator==(const Edge&) const = default;
};

/// Exchange couplings on an arbitrary set of site pairs.
class ExchangeGraph {
 public:
  ExchangeGraph() = default;
  /// Edges are normalised to a < b and sorted; self-loops, duplicate pairs,
  /// out-of-range sites and non-finite strengths are rejected.
  ExchangeGraph(std::size_t site_count, std::vector<Edge> edges);

  std::size_t site_count() const { return site_count_; }
  std::span<const Edge> edges() const { return edges_; }

  /// Strength of the (a,b) edge, 0 when absent.
  double strength(std::size_t a, std::size_t b) const;
  bool has_edge(std::size_t a, std::size_t b) const;
  double l1_norm() const;

  bool operator==(const ExchangeGraph&) const = default;

 private:
  std::size_t site_count_ = 0;
  std::vector<Edge> edges_;
};

/// Nearest-neighbour coupling strengths on a lattice. J sits on vertical
/// edges (i,j)-(i+1,j), K on horizontal edges (i,j)-(i,j+1).
class CouplingPattern {
 public:
  /// `vertical` holds J(i,j) at (i-1)*cols + (j-1); `horizontal` holds
  /// K(i,j) at (i-1)*(cols-1) + (j-1).
  CouplingPattern(Geometry geometry, std::vector<double> vertical, std::vector<double> horizontal);

  static CouplingPattern uniform(const Geometry& geometry, double strength);
  /// Weights in canonical edge order (see Geometry::nearest_neighbour_edges).
  static CouplingPattern from_edge_weights(const Geometry& geometry, std::span<const double> weights);
  static CouplingPattern chain(std::span<const double> couplings);
  /// Requires every graph edge to be a nearest-neighbour edge; absent edges are 0.
  static CouplingPattern from_graph(const Geometry& geometry, const ExchangeGraph& graph);

  const Geometry& geometry() const { return geometry_; }
  double J(int i, int j) const;
  double K(int i, int j) const;
  std::span<const double> vertical() const { return vertical_; }
  std::span<const double> horizontal() const { return horizontal_; }

  std::vector<double> edge_weights() const;
  std::vector<Edge> edges() const;
  ExchangeGraph to_graph() const;
  double mean_strength() const;

  CouplingPattern scaled(double factor) const;

  bool operator==(const CouplingPattern&) const = default;

 private:
  Geometry geometry_;
  std::vector<double> vertical_;
  std::vector<double> horizontal_;
};

}  // namespace spinmirror
