#pragma once

// Engineered and uniform chains, and the lattice layouts built from them.
//
// Hamiltonian convention everywhere: H = sum_e c_e (X_a X_b + Y_a Y_b), so
// the single-excitation hopping amplitude across an edge is 2 c_e.

#include <optional>
#include <span>
#include <vector>

#include "spinmirror/lattice.hpp"

namespace spinmirror {

struct ChainCouplings {
  int n = 0;
  std::vector<double> couplings;
  /// First time of perfect 1 -> n transfer, when one exists.
  std::optional<double> transfer_time;

  bool operator==(const ChainCouplings&) const = default;
};

/// c_m = scale * sqrt(m (n - m)) / 2. Single-excitation hopping is
/// scale * sqrt(m (n - m)), a spin-(n-1)/2 rotation generator.
ChainCouplings christandl_chain(int n, double scale = 1.0);

/// Homogeneous chain. The transfer time exists only for n in {2, 3}.
ChainCouplings uniform_chain(int n, double strength = 1.0);

/// First perfect-transfer time of a chain, derived from its
/// single-excitation spectrum: for a mirror-symmetric chain whose sorted
/// eigenvalues are equally spaced by d the time is pi / d. The candidate is
/// confirmed by evolving the end-to-end amplitude (|amp| >= 1 - 1e-10).
/// Returns nullopt when the spectrum is not equally spaced or the chain is
/// not mirror symmetric.
std::optional<double> perfect_transfer_time(std::span<const double> couplings);

/// Single-excitation block of the chain (hopping 2 c_m on the off-diagonals),
/// row-major n x n.
std::vector<double> chain_single_excitation_block(std::span<const double> couplings);

CouplingPattern chain_pattern(const ChainCouplings& chain);

/// N x N lattice with J(i,j) = row_chain.couplings[i] and
/// K(i,j) = col_chain.couplings[j] (1-based i, j).
CouplingPattern product_lattice_couplings(const ChainCouplings& row_chain, const ChainCouplings& col_chain);

/// n_rows x n lattice: every row is a copy of `chain` on the horizontal
/// edges, every vertical coupling is 0.
CouplingPattern parallel_chain_pattern(const ChainCouplings& chain, int n_rows);

}  // namespace spinmirror
