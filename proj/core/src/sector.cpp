#include "spinmirror/sector.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <numeric>
#include <string>

#include "spinmirror/errors.hpp"

namespace spinmirror {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int i = 1; i <= k; ++i) {
    // result * num is divisible by i; split i across both factors so the product stays in range.
    const auto d = static_cast<std::uint64_t>(i);
    const std::uint64_t g = std::gcd(result, d);
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i) / (d / g);
    result /= g;
    if (result > std::numeric_limits<std::uint64_t>::max() / num) throw ValidationError("binomial overflow");
    result *= num;
  }
  return result;
}

std::uint64_t combinadic_rank(std::uint64_t mask) {
  std::uint64_t rank = 0;
  int i = 1;
  while (mask != 0) {
    const int p = std::countr_zero(mask);
    rank += binomial(p, i);
    ++i;
    mask &= mask - 1;
  }
  return rank;
}

std::uint64_t combinadic_unrank(std::uint64_t rank, int excitations, int site_count) {
  std::uint64_t mask = 0;
  int p = site_count - 1;
  for (int i = excitations; i >= 1; --i) {
    while (p >= 0 && binomial(p, i) > rank) --p;
    if (p < 0) throw ValidationError("combinadic_unrank: rank out of range");
    mask |= std::uint64_t{1} << p;
    rank -= binomial(p, i);
    --p;
  }
  return mask;
}

SectorBasis::SectorBasis(int site_count, int excitations) : site_count_(site_count), excitations_(excitations) {
  if (site_count < 0 || site_count > kMaxSites) {
    throw ValidationError("sector basis: site count must be in [0, " + std::to_string(kMaxSites) + "]");
  }
  if (excitations < 0 || excitations > site_count) {
    throw ValidationError("sector basis: excitation number " + std::to_string(excitations) + " outside [0, " +
                          std::to_string(site_count) + "]");
  }
  const std::uint64_t dim = binomial(site_count, excitations);
  if (dim > (std::uint64_t{1} << 32)) throw ValidationError("sector basis: dimension too large to enumerate");
  states_.reserve(static_cast<std::size_t>(dim));
  if (excitations == 0) {
    states_.push_back(0);
    return;
  }
  // Gosper's hack walks weight-k masks in increasing order.
  std::uint64_t mask = (std::uint64_t{1} << excitations) - 1;
  const std::uint64_t limit = std::uint64_t{1} << site_count;
  while (mask < limit) {
    states_.push_back(mask);
    const std::uint64_t low = mask & (~mask + 1);
    const std::uint64_t ripple = mask + low;
    if (ripple == 0) break;
    mask = (((ripple ^ mask) >> 2) / low) | ripple;
  }
}

bool SectorBasis::contains(std::uint64_t mask) const {
  if (site_count_ < 64 && (mask >> site_count_) != 0) return false;
  return std::popcount(mask) == excitations_;
}

std::size_t SectorBasis::rank(std::uint64_t mask) const {
  if (!contains(mask)) throw ValidationError("sector basis: mask " + std::to_string(mask) + " not in sector");
  return static_cast<std::size_t>(combinadic_rank(mask));
}

BasisPtr make_basis(int site_count, int excitations) {
  return std::make_shared<const SectorBasis>(site_count, excitations);
}

SectorHamiltonian::SectorHamiltonian(BasisPtr basis, std::vector<MatrixEntry> upper)
    : basis_(std::move(basis)), upper_(std::move(upper)) {
  const std::size_t n = basis_->dim();
  std::vector<std::size_t> counts(n + 1, 0);
  for (const auto& e : upper_) {
    if (e.row >= e.col || e.col >= n) throw ValidationError("sector hamiltonian: entries must satisfy row < col < dim");
    ++counts[e.row + 1];
    ++counts[e.col + 1];
  }
  for (std::size_t i = 0; i < n; ++i) counts[i + 1] += counts[i];
  row_start_ = counts;
  col_index_.resize(2 * upper_.size());
  values_.resize(2 * upper_.size());
  auto fill = counts;
  for (const auto& e : upper_) {
    col_index_[fill[e.row]] = e.col;
    values_[fill[e.row]++] = e.value;
    col_index_[fill[e.col]] = e.row;
    values_[fill[e.col]++] = e.value;
  }
}

void SectorHamiltonian::apply(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const {
  const std::size_t n = dim();
  if (in.size() != n || out.size() != n) throw ValidationError("sector hamiltonian: vector size mismatch");
  for (std::size_t r = 0; r < n; ++r) {
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) acc += values_[p] * in[col_index_[p]];
    out[r] = acc;
  }
}

Eigen::VectorXcd SectorHamiltonian::apply(const Eigen::VectorXcd& in) const {
  Eigen::VectorXcd out(in.size());
  apply(std::span<const std::complex<double>>(in.data(), static_cast<std::size_t>(in.size())),
        std::span<std::complex<double>>(out.data(), static_cast<std::size_t>(out.size())));
  return out;
}

Eigen::MatrixXd SectorHamiltonian::dense() const {
  const auto n = static_cast<Eigen::Index>(dim());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : upper_) {
    m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
    m(static_cast<Eigen::Index>(e.col), static_cast<Eigen::Index>(e.row)) = e.value;
  }
  return m;
}

double SectorHamiltonian::norm_bound() const {
  double best = 0.0;
  for (std::size_t r = 0; r < dim(); ++r) {
    double sum = 0.0;
    for (std::size_t p = row_start_[r]; p < row_start_[r + 1]; ++p) sum += std::abs(values_[p]);
    best = std::max(best, sum);
  }
  return best;
}

SectorHamiltonian build_sector_hamiltonian(const ExchangeGraph& graph, int excitations) {
  return build_sector_hamiltonian(graph, make_basis(static_cast<int>(graph.site_count()), excitations));
}

SectorHamiltonian build_sector_hamiltonian(const ExchangeGraph& graph, BasisPtr basis) {
  if (static_cast<std::size_t>(basis->site_count()) != graph.site_count()) {
    throw ValidationError("sector hamiltonian: basis and graph site counts differ");
  }
  std::vector<MatrixEntry> upper;
  const auto states = basis->states();
  for (std::size_t col = 0; col < states.size(); ++col) {
    const std::uint64_t mask = states[col];
    for (const auto& e : graph.edges()) {
      if (e.strength == 0.0) continue;
      const bool on_a = (mask >> e.a) & 1U;
      const bool on_b = (mask >> e.b) & 1U;
      if (on_a == on_b) continue;
      const std::uint64_t moved = mask ^ (std::uint64_t{1} << e.a) ^ (std::uint64_t{1} << e.b);
      const std::size_t row = basis->rank(moved);
      if (row < col) upper.push_back({row, col, 2.0 * e.strength});
    }
  }
  std::sort(upper.begin(), upper.end(),
            [](const MatrixEntry& x, const MatrixEntry& y) { return std::pair(x.row, x.col) < std::pair(y.row, y.col); });
  return SectorHamiltonian(std::move(basis), std::move(upper));
}

SectorState SectorState::basis_state(BasisPtr basis, std::uint64_t mask) {
  SectorState s{basis, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dim()))};
  s.amplitudes(static_cast<Eigen::Index>(basis->rank(mask))) = 1.0;
  return s;
}

}  // namespace spinmirror
