#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinmirror/lattice.hpp"

namespace spinmirror {

/// Absolute tolerance for comparing constructed coupling strengths.
inline constexpr double kSymmetryTolerance = 1e-12;

enum class SymmetryKind {
  identity,
  main_diagonal,    // (i,j) -> (j,i)
  anti_diagonal,    // (i,j) -> (N+1-j, N+1-i)
  rotation_pi,      // (i,j) -> (R+1-i, C+1-j)
  vertical_axis,    // (i,j) -> (i, C+1-j)
  horizontal_axis,  // (i,j) -> (R+1-i, j)
  composite,
};

std::string_view to_string(SymmetryKind kind);
/// Accepts the names produced by to_string (except "composite").
SymmetryKind parse_symmetry_kind(std::string_view name);

/// A site permutation of a geometry. perm()[s] is the image of flat site s.
class SymmetryMap {
 public:
  /// The two diagonal reflections require a square geometry.
  static SymmetryMap make(SymmetryKind kind, const Geometry& geometry);

  SymmetryKind kind() const { return kind_; }
  std::string_view name() const { return to_string(kind_); }
  const std::vector<std::size_t>& perm() const { return perm_; }
  std::size_t site_count() const { return perm_.size(); }
  std::size_t operator()(std::size_t site) const { return perm_[site]; }

  /// Moves every set bit p of `mask` to bit perm(p).
  std::uint64_t apply_to_mask(std::uint64_t mask) const;

  /// (*this) after `inner`: site s maps to perm(inner.perm(s)).
  SymmetryMap after(const SymmetryMap& inner) const;
  bool is_identity() const;
  bool is_involution() const;

  bool operator==(const SymmetryMap& other) const { return perm_ == other.perm_; }

 private:
  SymmetryMap(SymmetryKind kind, std::vector<std::size_t> perm) : kind_(kind), perm_(std::move(perm)) {}

  SymmetryKind kind_;
  std::vector<std::size_t> perm_;
};

/// {main_diagonal, anti_diagonal}: the two-axis reflection group generators.
std::vector<SymmetryMap> rx_generators(const Geometry& geometry);

/// Every element of the group generated by `generators` (identity first).
std::vector<SymmetryMap> group_closure(const Geometry& geometry, std::span<const SymmetryMap> generators);

/// True iff each edge (a,b,w) has its image (perm a, perm b) with strength
/// within `tol` of w. Missing edges count as strength 0.
bool check_symmetry(const ExchangeGraph& graph, const SymmetryMap& sym, double tol = kSymmetryTolerance);
bool check_symmetry(const CouplingPattern& pattern, const SymmetryMap& sym, double tol = kSymmetryTolerance);
bool check_symmetry(const CouplingPattern& pattern, std::span<const SymmetryMap> group,
                    double tol = kSymmetryTolerance);

/// Partition of the canonical nearest-neighbour edge indices into orbits
/// under the group generated by `generators`. Orbits are sorted by their
/// smallest edge index, and each orbit is sorted.
std::vector<std::vector<std::size_t>> edge_orbits(const Geometry& geometry, std::span<const SymmetryMap> generators);

/// Averages every edge strength over the full group (Reynolds projection).
CouplingPattern symmetrize_pattern(const CouplingPattern& pattern, std::span<const SymmetryMap> generators);

/// One uniform draw in [lo, hi) per edge orbit, in orbit order.
CouplingPattern random_symmetric_pattern(const Geometry& geometry, std::span<const SymmetryMap> generators,
                                         std::uint64_t seed, double lo, double hi);

}  // namespace spinmirror
