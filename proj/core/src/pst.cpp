#include "spinmirror/pst.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "spinmirror/errors.hpp"

namespace spinmirror {

namespace {

constexpr double kSpacingTolerance = 1e-9;
constexpr double kTransferTolerance = 1e-10;

bool mirror_symmetric(std::span<const double> c) {
  const std::size_t m = c.size();
  for (std::size_t i = 0; i < m; ++i) {
    const double scale = std::max({1.0, std::abs(c[i]), std::abs(c[m - 1 - i])});
    if (std::abs(c[i] - c[m - 1 - i]) > 1e-12 * scale) return false;
  }
  return true;
}

}  // namespace

std::vector<double> chain_single_excitation_block(std::span<const double> couplings) {
  const std::size_t n = couplings.size() + 1;
  std::vector<double> block(n * n, 0.0);
  for (std::size_t m = 0; m + 1 < n; ++m) {
    block[m * n + m + 1] = 2.0 * couplings[m];
    block[(m + 1) * n + m] = 2.0 * couplings[m];
  }
  return block;
}

std::optional<double> perfect_transfer_time(std::span<const double> couplings) {
  const auto n = static_cast<Eigen::Index>(couplings.size() + 1);
  if (n < 2 || !mirror_symmetric(couplings)) return std::nullopt;

  const auto block = chain_single_excitation_block(couplings);
  const Eigen::MatrixXd h = Eigen::Map<const Eigen::MatrixXd>(block.data(), n, n);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  const Eigen::VectorXd& lambda = solver.eigenvalues();

  const double spacing = lambda(1) - lambda(0);
  if (spacing <= 0.0) return std::nullopt;
  for (Eigen::Index i = 2; i < n; ++i) {
    if (std::abs((lambda(i) - lambda(i - 1)) - spacing) > kSpacingTolerance * spacing) return std::nullopt;
  }
  const double t = std::numbers::pi / spacing;

  // <n| exp(-i h t) |1>
  std::complex<double> amp{0.0, 0.0};
  for (Eigen::Index k = 0; k < n; ++k) {
    amp += solver.eigenvectors()(n - 1, k) * solver.eigenvectors()(0, k) *
           std::exp(std::complex<double>(0.0, -lambda(k) * t));
  }
  if (std::abs(amp) < 1.0 - kTransferTolerance) return std::nullopt;
  return t;
}

ChainCouplings christandl_chain(int n, double scale) {
  if (n < 2) throw ValidationError("christandl_chain: n must be >= 2, got " + std::to_string(n));
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("christandl_chain: scale must be positive");
  ChainCouplings chain;
  chain.n = n;
  chain.couplings.reserve(static_cast<std::size_t>(n - 1));
  for (int m = 1; m < n; ++m) chain.couplings.push_back(scale * std::sqrt(static_cast<double>(m) * (n - m)) / 2.0);
  chain.transfer_time = perfect_transfer_time(chain.couplings);
  if (!chain.transfer_time) {
    throw NumericalError("christandl_chain: spectral transfer-time check failed for n=" + std::to_string(n));
  }
  return chain;
}

ChainCouplings uniform_chain(int n, double strength) {
  if (n < 2) throw ValidationError("uniform_chain: n must be >= 2, got " + std::to_string(n));
  if (!std::isfinite(strength) || strength == 0.0) throw ValidationError("uniform_chain: strength must be nonzero");
  ChainCouplings chain;
  chain.n = n;
  chain.couplings.assign(static_cast<std::size_t>(n - 1), strength);
  chain.transfer_time = perfect_transfer_time(chain.couplings);
  return chain;
}

CouplingPattern chain_pattern(const ChainCouplings& chain) { return CouplingPattern::chain(chain.couplings); }

CouplingPattern product_lattice_couplings(const ChainCouplings& row_chain, const ChainCouplings& col_chain) {
  if (row_chain.n != col_chain.n) {
    throw ValidationError("product_lattice_couplings: chain lengths differ (" + std::to_string(row_chain.n) +
                          " vs " + std::to_string(col_chain.n) + ")");
  }
  const int n = row_chain.n;
  const auto geometry = Geometry::square(n);
  std::vector<double> vertical;
  std::vector<double> horizontal;
  vertical.reserve(geometry.vertical_edge_count());
  horizontal.reserve(geometry.horizontal_edge_count());
  for (int i = 1; i < n; ++i)
    for (int j = 1; j <= n; ++j) vertical.push_back(row_chain.couplings[static_cast<std::size_t>(i - 1)]);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j < n; ++j) horizontal.push_back(col_chain.couplings[static_cast<std::size_t>(j - 1)]);
  return CouplingPattern(geometry, std::move(vertical), std::move(horizontal));
}

CouplingPattern parallel_chain_pattern(const ChainCouplings& chain, int n_rows) {
  if (n_rows < 1) throw ValidationError("parallel_chain_pattern: n_rows must be >= 1");
  const auto geometry = Geometry::rectangular(n_rows, chain.n);
  std::vector<double> horizontal;
  horizontal.reserve(geometry.horizontal_edge_count());
  for (int i = 0; i < n_rows; ++i) horizontal.insert(horizontal.end(), chain.couplings.begin(), chain.couplings.end());
  return CouplingPattern(geometry, std::vector<double>(geometry.vertical_edge_count(), 0.0), std::move(horizontal));
}

}  // namespace spinmirror
