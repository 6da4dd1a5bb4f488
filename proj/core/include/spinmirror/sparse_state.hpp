#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "spinmirror/lattice.hpp"
#include "spinmirror/sector.hpp"
#include "spinmirror/symmetry.hpp"

namespace spinmirror {

using Amplitude = std::complex<double>;

/// Amplitudes keyed by full occupation bitmask, possibly spanning several
/// excitation sectors. Terms are kept sorted by mask with unique keys.
class SparseState {
 public:
  using Term = std::pair<std::uint64_t, Amplitude>;

  explicit SparseState(std::size_t site_count = 0);
  /// Duplicate masks are summed.
  SparseState(std::size_t site_count, std::vector<Term> terms);

  static SparseState basis(std::size_t site_count, std::uint64_t mask);
  static SparseState from_sector(const SectorState& state);

  std::size_t site_count() const { return site_count_; }
  std::size_t support_size() const { return terms_.size(); }
  std::span<const Term> terms() const { return terms_; }
  Amplitude amplitude(std::uint64_t mask) const;

  double norm() const;
  SparseState normalized() const;
  /// <this|other>, conjugate-linear in this.
  Amplitude inner(const SparseState& other) const;

  /// Popcounts present in the support, ascending.
  std::vector<int> sectors() const;
  SparseState sector_component(int excitations) const;
  SectorState to_sector(const BasisPtr& basis) const;

  SparseState permuted(const SymmetryMap& sym) const;
  /// Places bit p of this state on site positions[p] of a `site_count`-site state.
  SparseState embedded(std::size_t site_count, std::span<const std::size_t> positions) const;
  /// Product of states with disjoint site supports on the same site count.
  SparseState tensor(const SparseState& other) const;
  /// Drops terms with |amplitude| <= threshold.
  SparseState pruned(double threshold) const;

  SparseState& operator+=(const SparseState& other);
  SparseState& operator-=(const SparseState& other);
  SparseState& operator*=(Amplitude factor);

  friend SparseState operator+(SparseState a, const SparseState& b) { return a += b; }
  friend SparseState operator-(SparseState a, const SparseState& b) { return a -= b; }
  friend SparseState operator*(Amplitude factor, SparseState a) { return a *= factor; }

 private:
  void canonicalize();

  std::size_t site_count_;
  std::vector<Term> terms_;
};

/// Exact sparse application of H = sum_e w_e (XX + YY)_e.
SparseState apply_hamiltonian(const ExchangeGraph& graph, const SparseState& state);

}  // namespace spinmirror
