#pragma once

// Zero-energy witness states for diagonal-reflection-symmetric lattices.
//
// On an N x N lattice the witness is an arbitrary state on the main diagonal
// tensored with one two-site state on every mirror pair {(i,j), (j,i)},
// i < j. A pair at distance d = j - i from the diagonal carries phi_- for
// odd d and phi_+ for even d. Every exchange Hamiltonian that is invariant
// under the main-diagonal reflection and whose couplings all span an odd
// Manhattan distance annihilates it. Being stationary, a witness whose
// diagonal part is not reversal symmetric cannot be carried into its
// rotated image, which rules out perfect mirroring for those lattices.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "spinmirror/lattice.hpp"
#include "spinmirror/sparse_state.hpp"
#include "spinmirror/symmetry.hpp"

namespace spinmirror {

/// Residual below which a witness counts as annihilated.
inline constexpr double kWitnessResidualTolerance = 1e-10;
/// Overlaps at or above 1 - this are treated as "target reached".
inline constexpr double kWitnessOverlapMargin = 1e-6;

/// (|01> + sign |10>) / sqrt 2 on two sites. The first site (bit 0) is the
/// left qubit, i.e. the pair member above the diagonal.
SparseState phi_pair(int sign);

struct WitnessSpec {
  int n = 0;
  /// State on the N diagonal sites; bit r - 1 is site (r, r).
  SparseState diagonal_state;

  /// (-1)^d: phi_- at odd distance, phi_+ at even distance.
  static int pair_sign(int distance) { return distance % 2 == 0 ? 1 : -1; }
};

struct MirrorPair {
  std::size_t upper = 0;  // (i, j), i < j
  std::size_t lower = 0;  // (j, i)
  int distance = 0;
};

/// All mirror pairs of the N x N lattice, ordered by (i, j).
std::vector<MirrorPair> mirror_pairs(int n);
/// Flat indices of (1,1), (2,2), ..., (N,N).
std::vector<std::size_t> diagonal_sites(int n);

/// Throws ValidationError unless the diagonal state is normalised.
SparseState build_witness(const WitnessSpec& spec);

/// ||H psi|| / (||psi|| * max(1, sum_e |w_e|)); 0 for the zero state.
double verify_zero_energy(const ExchangeGraph& graph, const SparseState& witness);

/// Same residual, after checking that every edge spans an odd Manhattan
/// distance and that the graph is main-diagonal symmetric. Violations throw
/// ValidationError naming the offending edge.
double verify_odd_distance(const Geometry& geometry, const ExchangeGraph& graph, const SparseState& witness);

enum class Conclusion { impossible, inconclusive };

std::string_view to_string(Conclusion conclusion);

struct Certificate {
  std::string pattern_digest;
  int n = 0;
  std::string mirror;
  double residual = 0.0;
  double initial_target_overlap = 0.0;
  Conclusion conclusion = Conclusion::inconclusive;
  bool main_diagonal_symmetric = false;
  bool anti_diagonal_symmetric = false;
  std::string reason;
};

/// Only the main-diagonal reflection is required of the pattern; whether it
/// is also anti-diagonal symmetric (full two-axis symmetry) is recorded.
/// `mirror` must be rotation_pi.
Certificate impossibility_certificate(const CouplingPattern& pattern, const SparseState& diagonal_initial,
                                      const SymmetryMap& mirror);

/// FNV-1a 64-bit digest of the canonical pattern JSON, as 16 hex digits.
std::string pattern_digest(const CouplingPattern& pattern);

}  // namespace spinmirror
