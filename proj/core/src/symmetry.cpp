#include "spinmirror/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "spinmirror/errors.hpp"
#include "spinmirror/rng.hpp"

namespace spinmirror {

std::string_view to_string(SymmetryKind kind) {
  switch (kind) {
    case SymmetryKind::identity:
      return "identity";
    case SymmetryKind::main_diagonal:
      return "main_diagonal";
    case SymmetryKind::anti_diagonal:
      return "anti_diagonal";
    case SymmetryKind::rotation_pi:
      return "rotation_pi";
    case SymmetryKind::vertical_axis:
      return "vertical_axis";
    case SymmetryKind::horizontal_axis:
      return "horizontal_axis";
    case SymmetryKind::composite:
      return "composite";
  }
  return "unknown";
}

SymmetryKind parse_symmetry_kind(std::string_view name) {
  for (auto kind : {SymmetryKind::identity, SymmetryKind::main_diagonal, SymmetryKind::anti_diagonal,
                    SymmetryKind::rotation_pi, SymmetryKind::vertical_axis, SymmetryKind::horizontal_axis}) {
    if (to_string(kind) == name) return kind;
  }
  throw ValidationError("unknown symmetry '" + std::string(name) + "'");
}

SymmetryMap SymmetryMap::make(SymmetryKind kind, const Geometry& geometry) {
  const int rows = geometry.rows();
  const int cols = geometry.cols();
  if ((kind == SymmetryKind::main_diagonal || kind == SymmetryKind::anti_diagonal) && rows != cols) {
    throw ValidationError(std::string(to_string(kind)) + " requires a square geometry");
  }
  if (kind == SymmetryKind::composite) throw ValidationError("composite maps are built with SymmetryMap::after");
  std::vector<std::size_t> perm(geometry.site_count());
  for (std::size_t s = 0; s < perm.size(); ++s) {
    const auto [i, j] = geometry.coord(s);
    Coord image{i, j};
    switch (kind) {
      case SymmetryKind::identity:
      case SymmetryKind::composite:
        break;
      case SymmetryKind::main_diagonal:
        image = {j, i};
        break;
      case SymmetryKind::anti_diagonal:
        image = {cols + 1 - j, rows + 1 - i};
        break;
      case SymmetryKind::rotation_pi:
        image = {rows + 1 - i, cols + 1 - j};
        break;
      case SymmetryKind::vertical_axis:
        image = {i, cols + 1 - j};
        break;
      case SymmetryKind::horizontal_axis:
        image = {rows + 1 - i, j};
        break;
    }
    perm[s] = geometry.flat(image);
  }
  return SymmetryMap(kind, std::move(perm));
}

std::uint64_t SymmetryMap::apply_to_mask(std::uint64_t mask) const {
  std::uint64_t out = 0;
  while (mask != 0) {
    const int p = __builtin_ctzll(mask);
    out |= std::uint64_t{1} << perm_[static_cast<std::size_t>(p)];
    mask &= mask - 1;
  }
  return out;
}

SymmetryMap SymmetryMap::after(const SymmetryMap& inner) const {
  if (inner.perm_.size() != perm_.size()) throw ValidationError("cannot compose symmetries of different sizes");
  std::vector<std::size_t> composed(perm_.size());
  for (std::size_t s = 0; s < perm_.size(); ++s) composed[s] = perm_[inner.perm_[s]];
  return SymmetryMap(SymmetryKind::composite, std::move(composed));
}

bool SymmetryMap::is_identity() const {
  for (std::size_t s = 0; s < perm_.size(); ++s)
    if (perm_[s] != s) return false;
  return true;
}

bool SymmetryMap::is_involution() const {
  for (std::size_t s = 0; s < perm_.size(); ++s)
    if (perm_[perm_[s]] != s) return false;
  return true;
}

std::vector<SymmetryMap> rx_generators(const Geometry& geometry) {
  return {SymmetryMap::make(SymmetryKind::main_diagonal, geometry),
          SymmetryMap::make(SymmetryKind::anti_diagonal, geometry)};
}

std::vector<SymmetryMap> group_closure(const Geometry& geometry, std::span<const SymmetryMap> generators) {
  std::vector<SymmetryMap> elements{SymmetryMap::make(SymmetryKind::identity, geometry)};
  for (const auto& g : generators) {
    if (g.site_count() != geometry.site_count()) throw ValidationError("symmetry does not match geometry");
  }
  // Breadth-first closure under right multiplication by generators.
  for (std::size_t next = 0; next < elements.size(); ++next) {
    for (const auto& g : generators) {
      auto candidate = g.after(elements[next]);
      if (std::find(elements.begin(), elements.end(), candidate) == elements.end()) {
        elements.push_back(std::move(candidate));
      }
    }
  }
  return elements;
}

bool check_symmetry(const ExchangeGraph& graph, const SymmetryMap& sym, double tol) {
  if (sym.site_count() != graph.site_count()) throw ValidationError("symmetry does not match graph size");
  for (const auto& e : graph.edges()) {
    if (std::abs(graph.strength(sym(e.a), sym(e.b)) - e.strength) > tol) return false;
  }
  return true;
}

bool check_symmetry(const CouplingPattern& pattern, const SymmetryMap& sym, double tol) {
  return check_symmetry(pattern.to_graph(), sym, tol);
}

bool check_symmetry(const CouplingPattern& pattern, std::span<const SymmetryMap> group, double tol) {
  const auto graph = pattern.to_graph();
  return std::all_of(group.begin(), group.end(), [&](const SymmetryMap& s) { return check_symmetry(graph, s, tol); });
}

namespace {

/// edge_image[g][e] = canonical index of the image of edge e under group element g.
std::vector<std::vector<std::size_t>> edge_action(const Geometry& geometry, std::span<const SymmetryMap> group) {
  const auto nn = geometry.nearest_neighbour_edges();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t e = 0; e < nn.size(); ++e) index[nn[e]] = e;
  std::vector<std::vector<std::size_t>> action;
  action.reserve(group.size());
  for (const auto& g : group) {
    std::vector<std::size_t> images(nn.size());
    for (std::size_t e = 0; e < nn.size(); ++e) {
      auto a = g(nn[e].first);
      auto b = g(nn[e].second);
      if (a > b) std::swap(a, b);
      auto it = index.find({a, b});
      if (it == index.end()) throw ValidationError("symmetry does not preserve nearest-neighbour edges");
      images[e] = it->second;
    }
    action.push_back(std::move(images));
  }
  return action;
}

}  // namespace

std::vector<std::vector<std::size_t>> edge_orbits(const Geometry& geometry, std::span<const SymmetryMap> generators) {
  const auto group = group_closure(geometry, generators);
  const auto action = edge_action(geometry, group);
  const std::size_t edge_count = geometry.edge_count();
  std::vector<bool> seen(edge_count, false);
  std::vector<std::vector<std::size_t>> orbits;
  for (std::size_t e = 0; e < edge_count; ++e) {
    if (seen[e]) continue;
    std::vector<std::size_t> orbit;
    for (const auto& images : action) {
      const auto image = images[e];
      if (!seen[image]) {
        seen[image] = true;
        orbit.push_back(image);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

CouplingPattern symmetrize_pattern(const CouplingPattern& pattern, std::span<const SymmetryMap> generators) {
  const auto& geometry = pattern.geometry();
  const auto group = group_closure(geometry, generators);
  const auto action = edge_action(geometry, group);
  const auto weights = pattern.edge_weights();
  std::vector<double> averaged(weights.size(), 0.0);
  for (std::size_t e = 0; e < weights.size(); ++e) {
    double sum = 0.0;
    for (const auto& images : action) sum += weights[images[e]];
    averaged[e] = sum / static_cast<double>(group.size());
  }
  return CouplingPattern::from_edge_weights(geometry, averaged);
}

CouplingPattern random_symmetric_pattern(const Geometry& geometry, std::span<const SymmetryMap> generators,
                                         std::uint64_t seed, double lo, double hi) {
  if (!(lo < hi)) throw ValidationError("random_symmetric_pattern: empty coupling range");
  Rng rng(seed);
  std::vector<double> weights(geometry.edge_count(), 0.0);
  for (const auto& orbit : edge_orbits(geometry, generators)) {
    const double w = rng.uniform(lo, hi);
    for (auto e : orbit) weights[e] = w;
  }
  return CouplingPattern::from_edge_weights(geometry, weights);
}

}  // namespace spinmirror
