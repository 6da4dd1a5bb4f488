#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "spinmirror/analysis.hpp"
#include "spinmirror/errors.hpp"
#include "spinmirror/pst.hpp"
#include "spinmirror/symmetry.hpp"

using namespace spinmirror;

namespace {

/// exp(-i H t) of the single-excitation block via Eigen's Pade exponential.
Eigen::MatrixXcd block_propagator(std::span<const double> couplings, double t) {
  const auto n = static_cast<Eigen::Index>(couplings.size()) + 1;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index m = 0; m + 1 < n; ++m) h(m, m + 1) = h(m + 1, m) = 2.0 * couplings[static_cast<std::size_t>(m)];
  return (std::complex<double>(0.0, -t) * h).exp();
}

}  // namespace

TEST(Christandl, TwoSite) {
  const auto c = christandl_chain(2);
  ASSERT_EQ(c.couplings.size(), 1U);
  EXPECT_DOUBLE_EQ(c.couplings[0], 0.5);
  ASSERT_TRUE(c.transfer_time);
  EXPECT_NEAR(*c.transfer_time, std::numbers::pi / 2, 1e-14);
  EXPECT_NEAR(std::abs(block_propagator(c.couplings, *c.transfer_time)(1, 0)), 1.0, 1e-14);
}

TEST(Christandl, FourSite) {
  const auto c = christandl_chain(4);
  ASSERT_EQ(c.couplings.size(), 3U);
  EXPECT_NEAR(c.couplings[0], std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(c.couplings[1], 1.0, 1e-15);
  EXPECT_NEAR(c.couplings[2], std::sqrt(3.0) / 2, 1e-15);
  EXPECT_NEAR(std::abs(block_propagator(c.couplings, *c.transfer_time)(3, 0)), 1.0, 1e-12);
}

TEST(Christandl, TransferTimeScalesInversely) {
  for (int n = 2; n <= 12; ++n) {
    for (double scale : {0.5, 1.0, 3.0}) {
      const auto c = christandl_chain(n, scale);
      ASSERT_TRUE(c.transfer_time);
      EXPECT_NEAR(*c.transfer_time, std::numbers::pi / (2 * scale), 1e-12) << "n=" << n;
    }
  }
}

TEST(Christandl, MirrorSymmetricAndMirrorsEveryBasisSite) {
  const auto c7 = christandl_chain(7);
  for (std::size_t m = 0; m < c7.couplings.size(); ++m) EXPECT_DOUBLE_EQ(c7.couplings[m], c7.couplings[5 - m]);
  for (int n = 2; n <= 12; ++n) {
    const auto c = christandl_chain(n);
    const auto u = block_propagator(c.couplings, *c.transfer_time);
    for (int m = 0; m < n; ++m) EXPECT_GE(std::abs(u(n - 1 - m, m)), 1.0 - 1e-10) << "n=" << n << " m=" << m;
  }
}

TEST(Christandl, Rejects) {
  EXPECT_THROW(christandl_chain(1), ValidationError);
  EXPECT_THROW(christandl_chain(3, 0.0), ValidationError);
  EXPECT_THROW(christandl_chain(3, -1.0), ValidationError);
}

TEST(UniformChain, TransferTimeOnlyForTwoAndThree) {
  const auto u2 = uniform_chain(2);
  ASSERT_TRUE(u2.transfer_time);
  EXPECT_NEAR(*u2.transfer_time, std::numbers::pi / 4, 1e-14);
  const auto u3 = uniform_chain(3);
  ASSERT_TRUE(u3.transfer_time);
  EXPECT_NEAR(*u3.transfer_time, std::numbers::pi / (2 * std::sqrt(2.0)), 1e-14);
  for (int n = 4; n <= 10; ++n) EXPECT_FALSE(uniform_chain(n).transfer_time) << n;
  EXPECT_THROW(uniform_chain(1), ValidationError);
}

TEST(UniformChain, FourSiteDenseScanBelowOne) {
  const auto c = uniform_chain(4);
  const TransferAmplitude amp(chain_pattern(c), {1, 1}, {1, 4});
  double peak = 0.0;
  for (int i = 1; i <= 50000; ++i) peak = std::max(peak, amp.fidelity(50.0 * i / 50000));
  EXPECT_LT(peak, 1.0);
  EXPECT_GT(peak, 0.9);
}

TEST(PerfectTransferTime, RejectsAsymmetricChains) {
  const std::vector<double> c{1.0, 0.5};
  EXPECT_FALSE(perfect_transfer_time(c));
}

TEST(SingleExcitationBlock, HoppingIsTwiceCoupling) {
  const std::vector<double> c{0.25, 1.5};
  const auto block = chain_single_excitation_block(c);
  ASSERT_EQ(block.size(), 9U);
  EXPECT_DOUBLE_EQ(block[1], 0.5);
  EXPECT_DOUBLE_EQ(block[3], 0.5);
  EXPECT_DOUBLE_EQ(block[5], 3.0);
  EXPECT_DOUBLE_EQ(block[0], 0.0);
}

TEST(ProductLattice, TwoByTwoAllHalf) {
  const auto c = christandl_chain(2);
  const auto p = product_lattice_couplings(c, c);
  for (double w : p.edge_weights()) EXPECT_DOUBLE_EQ(w, 0.5);
}

TEST(ProductLattice, SymmetricUnderRotationAndDiagonals) {
  const auto c = christandl_chain(4);
  const auto p = product_lattice_couplings(c, c);
  const auto& g = p.geometry();
  for (auto k : {SymmetryKind::rotation_pi, SymmetryKind::main_diagonal, SymmetryKind::anti_diagonal})
    EXPECT_TRUE(check_symmetry(p, SymmetryMap::make(k, g)));
}

TEST(ProductLattice, RowsAndColumnsIndependent) {
  const auto p = product_lattice_couplings(christandl_chain(3), uniform_chain(3, 0.7));
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 3; ++j) EXPECT_DOUBLE_EQ(p.J(i, j), p.J(i, 1));
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 2; ++j) EXPECT_DOUBLE_EQ(p.K(i, j), 0.7);
  EXPECT_THROW(product_lattice_couplings(christandl_chain(3), christandl_chain(4)), ValidationError);
}

TEST(ProductLattice, SingleExcitationMirrorsEverySite) {
  const auto c = christandl_chain(4);
  const auto p = product_lattice_couplings(c, c);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j)
      EXPECT_GE(transfer_fidelity(p, {i, j}, {5 - i, 5 - j}, *c.transfer_time), 1.0 - 1e-10);
}

TEST(ParallelChains, RowsTransferIndependently) {
  const auto c = christandl_chain(5);
  const auto p = parallel_chain_pattern(c, 3);
  EXPECT_EQ(p.geometry().rows(), 3);
  EXPECT_EQ(p.geometry().cols(), 5);
  for (double w : p.vertical()) EXPECT_EQ(w, 0.0);
  EXPECT_TRUE(check_symmetry(p, SymmetryMap::make(SymmetryKind::vertical_axis, p.geometry())));
  for (int i = 1; i <= 3; ++i) EXPECT_GE(transfer_fidelity(p, {i, 1}, {i, 5}, *c.transfer_time), 1.0 - 1e-10);
  EXPECT_THROW(parallel_chain_pattern(c, 0), ValidationError);
}
