#include "spinmirror/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

#include "spinmirror/errors.hpp"

namespace spinmirror {

std::string_view to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::chain:
      return "chain";
    case GeometryKind::square:
      return "square";
    case GeometryKind::rectangular:
      return "rectangular";
  }
  return "unknown";
}

Geometry Geometry::chain(int n) {
  if (n < 1) throw ValidationError("chain length must be >= 1, got " + std::to_string(n));
  return Geometry(GeometryKind::chain, 1, n);
}

Geometry Geometry::square(int n) {
  if (n < 1) throw ValidationError("lattice side must be >= 1, got " + std::to_string(n));
  return Geometry(GeometryKind::square, n, n);
}

Geometry Geometry::rectangular(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw ValidationError("lattice dimensions must be >= 1, got " + std::to_string(rows) + "x" +
                          std::to_string(cols));
  }
  if (rows == cols) return Geometry(GeometryKind::square, rows, cols);
  return Geometry(GeometryKind::rectangular, rows, cols);
}

int Geometry::side() const {
  if (kind_ == GeometryKind::chain) return cols_;
  if (rows_ != cols_) throw ValidationError("rectangular geometry has no single side length");
  return rows_;
}

std::size_t Geometry::flat(Coord c) const {
  if (!contains(c)) {
    throw ValidationError("site (" + std::to_string(c.row) + "," + std::to_string(c.col) +
                          ") outside " + std::to_string(rows_) + "x" + std::to_string(cols_) + " geometry");
  }
  return static_cast<std::size_t>(c.row - 1) * cols_ + static_cast<std::size_t>(c.col - 1);
}

Coord Geometry::coord(std::size_t site) const {
  if (site >= site_count()) throw ValidationError("flat site index " + std::to_string(site) + " out of range");
  return Coord{static_cast<int>(site / cols_) + 1, static_cast<int>(site % cols_) + 1};
}

std::vector<std::pair<std::size_t, std::size_t>> Geometry::nearest_neighbour_edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(edge_count());
  for (int i = 1; i < rows_; ++i)
    for (int j = 1; j <= cols_; ++j) out.emplace_back(flat({i, j}), flat({i + 1, j}));
  for (int i = 1; i <= rows_; ++i)
    for (int j = 1; j < cols_; ++j) out.emplace_back(flat({i, j}), flat({i, j + 1}));
  return out;
}

Geometry build_square_lattice(int n) { return Geometry::square(n); }

int manhattan_distance(const Geometry& geometry, Coord a, Coord b) {
  if (!geometry.contains(a) || !geometry.contains(b)) throw ValidationError("manhattan_distance: site out of range");
  return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

int manhattan_distance(const Geometry& geometry, std::size_t a, std::size_t b) {
  return manhattan_distance(geometry, geometry.coord(a), geometry.coord(b));
}

ExchangeGraph::ExchangeGraph(std::size_t site_count, std::vector<Edge> edges)
    : site_count_(site_count), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.a == e.b) throw ValidationError("exchange graph: self-loop on site " + std::to_string(e.a));
    if (e.a >= site_count_ || e.b >= site_count_) throw ValidationError("exchange graph: edge endpoint out of range");
    if (!std::isfinite(e.strength)) throw ValidationError("exchange graph: non-finite coupling strength");
    if (e.a > e.b) std::swap(e.a, e.b);
  }
  std::sort(edges_.begin(), edges_.end(), [](const Edge& x, const Edge& y) {
    return std::pair(x.a, x.b) < std::pair(y.a, y.b);
  });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].a == edges_[i - 1].a && edges_[i].b == edges_[i - 1].b) {
      throw ValidationError("exchange graph: duplicate edge (" + std::to_string(edges_[i].a) + "," +
                            std::to_string(edges_[i].b) + ")");
    }
  }
}

double ExchangeGraph::strength(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair(a, b),
                             [](const Edge& e, const std::pair<std::size_t, std::size_t>& key) {
                               return std::pair(e.a, e.b) < key;
                             });
  if (it != edges_.end() && it->a == a && it->b == b) return it->strength;
  return 0.0;
}

bool ExchangeGraph::has_edge(std::size_t a, std::size_t b) const {
  if (a > b) std::swap(a, b);
  return std::any_of(edges_.begin(), edges_.end(), [&](const Edge& e) { return e.a == a && e.b == b; });
}

double ExchangeGraph::l1_norm() const {
  double sum = 0.0;
  for (const auto& e : edges_) sum += std::abs(e.strength);
  return sum;
}

namespace {

void require_finite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw ValidationError(std::string("coupling pattern: non-finite ") + what + " coupling");
  }
}

}  // namespace

CouplingPattern::CouplingPattern(Geometry geometry, std::vector<double> vertical, std::vector<double> horizontal)
    : geometry_(geometry), vertical_(std::move(vertical)), horizontal_(std::move(horizontal)) {
  if (vertical_.size() != geometry_.vertical_edge_count()) {
    throw ValidationError("coupling pattern: expected " + std::to_string(geometry_.vertical_edge_count()) +
                          " vertical couplings, got " + std::to_string(vertical_.size()));
  }
  if (horizontal_.size() != geometry_.horizontal_edge_count()) {
    throw ValidationError("coupling pattern: expected " + std::to_string(geometry_.horizontal_edge_count()) +
                          " horizontal couplings, got " + std::to_string(horizontal_.size()));
  }
  require_finite(vertical_, "vertical");
  require_finite(horizontal_, "horizontal");
}

CouplingPattern CouplingPattern::uniform(const Geometry& geometry, double strength) {
  return CouplingPattern(geometry, std::vector<double>(geometry.vertical_edge_count(), strength),
                         std::vector<double>(geometry.horizontal_edge_count(), strength));
}

CouplingPattern CouplingPattern::from_edge_weights(const Geometry& geometry, std::span<const double> weights) {
  if (weights.size() != geometry.edge_count()) {
    throw ValidationError("coupling pattern: expected " + std::to_string(geometry.edge_count()) +
                          " edge weights, got " + std::to_string(weights.size()));
  }
  const auto nv = static_cast<std::ptrdiff_t>(geometry.vertical_edge_count());
  return CouplingPattern(geometry, std::vector<double>(weights.begin(), weights.begin() + nv),
                         std::vector<double>(weights.begin() + nv, weights.end()));
}

CouplingPattern CouplingPattern::chain(std::span<const double> couplings) {
  const auto geometry = Geometry::chain(static_cast<int>(couplings.size()) + 1);
  return CouplingPattern(geometry, {}, std::vector<double>(couplings.begin(), couplings.end()));
}

CouplingPattern CouplingPattern::from_graph(const Geometry& geometry, const ExchangeGraph& graph) {
  if (graph.site_count() != geometry.site_count()) {
    throw ValidationError("coupling pattern: graph has " + std::to_string(graph.site_count()) +
                          " sites, geometry has " + std::to_string(geometry.site_count()));
  }
  const auto nn = geometry.nearest_neighbour_edges();
  std::vector<double> weights(nn.size(), 0.0);
  for (const auto& e : graph.edges()) {
    auto it = std::find(nn.begin(), nn.end(), std::pair(e.a, e.b));
    if (it == nn.end()) {
      throw ValidationError("coupling pattern: edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                            ") is not a nearest-neighbour pair");
    }
    weights[static_cast<std::size_t>(it - nn.begin())] = e.strength;
  }
  return from_edge_weights(geometry, weights);
}

double CouplingPattern::J(int i, int j) const {
  if (i < 1 || i >= geometry_.rows() || j < 1 || j > geometry_.cols()) throw ValidationError("J index out of range");
  return vertical_[static_cast<std::size_t>(i - 1) * geometry_.cols() + static_cast<std::size_t>(j - 1)];
}

double CouplingPattern::K(int i, int j) const {
  if (i < 1 || i > geometry_.rows() || j < 1 || j >= geometry_.cols()) throw ValidationError("K index out of range");
  return horizontal_[static_cast<std::size_t>(i - 1) * (geometry_.cols() - 1) + static_cast<std::size_t>(j - 1)];
}

std::vector<double> CouplingPattern::edge_weights() const {
  std::vector<double> out(vertical_);
  out.insert(out.end(), horizontal_.begin(), horizontal_.end());
  return out;
}

std::vector<Edge> CouplingPattern::edges() const {
  const auto nn = geometry_.nearest_neighbour_edges();
  const auto weights = edge_weights();
  std::vector<Edge> out;
  out.reserve(nn.size());
  for (std::size_t e = 0; e < nn.size(); ++e) out.push_back({nn[e].first, nn[e].second, weights[e]});
  return out;
}

ExchangeGraph CouplingPattern::to_graph() const { return ExchangeGraph(geometry_.site_count(), edges()); }

double CouplingPattern::mean_strength() const {
  const auto weights = edge_weights();
  if (weights.empty()) return 0.0;
  double sum = 0.0;
  for (double w : weights) sum += std::abs(w);
  return sum / static_cast<double>(weights.size());
}

CouplingPattern CouplingPattern::scaled(double factor) const {
  auto v = vertical_;
  auto h = horizontal_;
  for (auto& x : v) x *= factor;
  for (auto& x : h) x *= factor;
  return CouplingPattern(geometry_, std::move(v), std::move(h));
}

}  // namespace spinmirror
