#pragma once

// Fixed-excitation-number sectors of the exchange Hamiltonian.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "spinmirror/lattice.hpp"

namespace spinmirror {

inline constexpr int kMaxSites = 63;

/// C(n, k) as an exact 64-bit integer; throws on overflow.
std::uint64_t binomial(int n, int k);

/// Combinadic rank of a bitmask among masks of the same popcount:
/// sum over set bits p_0 < p_1 < ... of C(p_i, i + 1). This is the position
/// of the mask in increasing numeric order.
std::uint64_t combinadic_rank(std::uint64_t mask);
std::uint64_t combinadic_unrank(std::uint64_t rank, int excitations, int site_count);

/// All weight-k bitmasks over M sites, in increasing numeric order.
class SectorBasis {
 public:
  SectorBasis(int site_count, int excitations);

  int site_count() const { return site_count_; }
  int excitations() const { return excitations_; }
  std::size_t dim() const { return states_.size(); }

  std::uint64_t unrank(std::size_t index) const { return states_[index]; }
  /// Throws if `mask` has the wrong popcount or lies outside the sites.
  std::size_t rank(std::uint64_t mask) const;
  bool contains(std::uint64_t mask) const;
  std::span<const std::uint64_t> states() const { return states_; }

 private:
  int site_count_;
  int excitations_;
  std::vector<std::uint64_t> states_;
};

using BasisPtr = std::shared_ptr<const SectorBasis>;

BasisPtr make_basis(int site_count, int excitations);

struct MatrixEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  double value = 0.0;
  bool operator==(const MatrixEntry&) const = default;
};

/// Real symmetric sparse matrix of H restricted to one sector. Each
/// unordered pair of coupled basis states is stored once (row < col); the
/// diagonal is identically zero.
class SectorHamiltonian {
 public:
  SectorHamiltonian(BasisPtr basis, std::vector<MatrixEntry> upper);

  const SectorBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  std::size_t dim() const { return basis_->dim(); }
  std::span<const MatrixEntry> entries() const { return upper_; }

  /// out = H in.
  void apply(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& in) const;

  Eigen::MatrixXd dense() const;
  /// Max absolute row sum, an upper bound on the spectral radius.
  double norm_bound() const;

 private:
  BasisPtr basis_;
  std::vector<MatrixEntry> upper_;
  // Full (both triangles) CSR copy for matrix-vector products.
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> col_index_;
  std::vector<double> values_;
};

/// Hopping rule: masks b and b' = b with one excitation moved across edge
/// (a, c, w) are coupled by 2w.
SectorHamiltonian build_sector_hamiltonian(const ExchangeGraph& graph, int excitations);
SectorHamiltonian build_sector_hamiltonian(const ExchangeGraph& graph, BasisPtr basis);

struct SectorState {
  BasisPtr basis;
  Eigen::VectorXcd amplitudes;

  static SectorState basis_state(BasisPtr basis, std::uint64_t mask);
  double norm() const { return amplitudes.norm(); }
};

}  // namespace spinmirror
