#include <gtest/gtest.h>

#include <bit>

#include "oracle/pauli_oracle.hpp"
#include "spinmirror/errors.hpp"
#include "spinmirror/pst.hpp"
#include "spinmirror/rng.hpp"
#include "spinmirror/sector.hpp"
#include "spinmirror/symmetry.hpp"
#include "spinmirror/analysis.hpp"

using namespace spinmirror;

namespace {

std::vector<oracle::Coupling> couplings_of(const ExchangeGraph& g) {
  std::vector<oracle::Coupling> out;
  for (const auto& e : g.edges()) out.push_back({e.a, e.b, e.strength});
  return out;
}

}  // namespace

TEST(Binomial, ValuesAndOverflow) {
  EXPECT_EQ(binomial(4, 2), 6U);
  EXPECT_EQ(binomial(16, 3), 560U);
  EXPECT_EQ(binomial(5, 7), 0U);
  EXPECT_EQ(binomial(63, 31), 916312070471295267ULL);
}

TEST(SectorBasis, SmallDims) {
  const SectorBasis b0(4, 0);
  ASSERT_EQ(b0.dim(), 1U);
  EXPECT_EQ(b0.unrank(0), 0U);
  EXPECT_EQ(SectorBasis(4, 2).dim(), 6U);
  EXPECT_THROW(SectorBasis(4, 5), ValidationError);
  EXPECT_THROW(SectorBasis(64, 1), ValidationError);
}

TEST(SectorBasis, RoundTripAndMonotone) {
  const SectorBasis b(16, 3);
  ASSERT_EQ(b.dim(), 560U);
  for (std::size_t x = 0; x < b.dim(); ++x) {
    EXPECT_EQ(b.rank(b.unrank(x)), x);
    EXPECT_EQ(std::popcount(b.unrank(x)), 3);
    if (x > 0) EXPECT_LT(b.unrank(x - 1), b.unrank(x));
  }
  std::size_t count = 0;
  for (std::uint64_t m = 0; m < (1U << 16); ++m) {
    if (std::popcount(m) != 3) {
      EXPECT_FALSE(b.contains(m));
      continue;
    }
    ++count;
    EXPECT_EQ(b.unrank(b.rank(m)), m);
  }
  EXPECT_EQ(count, 560U);
  EXPECT_THROW(b.rank(0b1), ValidationError);
  EXPECT_EQ(combinadic_unrank(17, 3, 16), b.unrank(17));
}

TEST(SectorHamiltonian, TwoSiteChain) {
  const std::vector<double> c{1.0};
  const auto h = build_sector_hamiltonian(CouplingPattern::chain(c).to_graph(), 1);
  Eigen::MatrixXd expected(2, 2);
  expected << 0, 2, 2, 0;
  EXPECT_EQ(h.dense(), expected);
}

TEST(SectorHamiltonian, ThreeSiteUniformTridiagonal) {
  const std::vector<double> c{1.0, 1.0};
  const auto h = build_sector_hamiltonian(CouplingPattern::chain(c).to_graph(), 1);
  Eigen::MatrixXd expected(3, 3);
  expected << 0, 2, 0, 2, 0, 2, 0, 2, 0;
  EXPECT_EQ(h.dense(), expected);
}

TEST(SectorHamiltonian, ChristandlFourMatchesKroneckerOracle) {
  const auto graph = chain_pattern(christandl_chain(4)).to_graph();
  const auto full = oracle::dense_kron_hamiltonian(4, couplings_of(graph));
  const auto h = build_sector_hamiltonian(graph, 2);
  const auto& basis = h.basis();
  const auto dense = h.dense();
  for (std::size_t r = 0; r < basis.dim(); ++r)
    for (std::size_t c = 0; c < basis.dim(); ++c) {
      const auto ref = full(static_cast<Eigen::Index>(basis.unrank(r)), static_cast<Eigen::Index>(basis.unrank(c)));
      EXPECT_EQ(ref.imag(), 0.0);
      EXPECT_EQ(dense(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)), ref.real());
    }
}

TEST(SectorHamiltonian, CommutesWithSymmetry) {
  const auto g = Geometry::square(3);
  const auto rx = rx_generators(g);
  const auto p = random_symmetric_pattern(g, rx, 5, 0.2, 1.5);
  for (auto kind : {SymmetryKind::main_diagonal, SymmetryKind::anti_diagonal, SymmetryKind::rotation_pi}) {
    const auto sym = SymmetryMap::make(kind, g);
    for (int k = 0; k <= 9; ++k) {
      const auto h = build_sector_hamiltonian(p.to_graph(), k);
      const auto perm = basis_permutation(h.basis(), sym);
      const auto d = h.dense();
      for (Eigen::Index r = 0; r < d.rows(); ++r)
        for (Eigen::Index c = 0; c < d.cols(); ++c)
          EXPECT_EQ(d(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(r)]),
                      static_cast<Eigen::Index>(perm[static_cast<std::size_t>(c)])),
                    d(r, c));
    }
  }
}

TEST(SectorHamiltonian, ApplyMatchesDenseAndNormBound) {
  const auto g = Geometry::rectangular(2, 4);
  Rng rng(3);
  std::vector<double> w(g.edge_count());
  for (auto& x : w) x = rng.uniform(-1.0, 1.0);
  const auto h = build_sector_hamiltonian(CouplingPattern::from_edge_weights(g, w).to_graph(), 3);
  Eigen::VectorXcd v(static_cast<Eigen::Index>(h.dim()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = {rng.normal(), rng.normal()};
  const Eigen::VectorXcd ref = h.dense().cast<std::complex<double>>() * v;
  EXPECT_LT((h.apply(v) - ref).norm(), 1e-12);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
  EXPECT_LE(es.eigenvalues().cwiseAbs().maxCoeff(), h.norm_bound() + 1e-12);
}

TEST(SectorState, BasisState) {
  const auto basis = make_basis(5, 2);
  const auto s = SectorState::basis_state(basis, 0b10010);
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
  EXPECT_EQ(s.amplitudes(static_cast<Eigen::Index>(basis->rank(0b10010))), std::complex<double>(1.0, 0.0));
  EXPECT_THROW(SectorState::basis_state(basis, 0b111), ValidationError);
}
