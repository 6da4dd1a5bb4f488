#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

#include "spinmirror/errors.hpp"
#include "spinmirror/evolution.hpp"
#include "spinmirror/pst.hpp"
#include "spinmirror/rng.hpp"
#include "spinmirror/symmetry.hpp"

using namespace spinmirror;
using cplx = std::complex<double>;

namespace {

SectorState random_sector_state(const BasisPtr& basis, Rng& rng) {
  SectorState s{basis, Eigen::VectorXcd(static_cast<Eigen::Index>(basis->dim()))};
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) s.amplitudes(i) = {rng.normal(), rng.normal()};
  s.amplitudes.normalize();
  return s;
}

CouplingPattern random_pattern(const Geometry& g, Rng& rng) {
  std::vector<double> w(g.edge_count());
  for (auto& x : w) x = rng.uniform(0.1, 2.0);
  return CouplingPattern::from_edge_weights(g, w);
}

}  // namespace

TEST(Evolve, ZeroTimeIsIdentity) {
  Rng rng(1);
  const auto h = build_sector_hamiltonian(random_pattern(Geometry::square(3), rng).to_graph(), 2);
  const auto psi = random_sector_state(h.basis_ptr(), rng);
  EXPECT_EQ(evolve(h, psi, 0.0).amplitudes, psi.amplitudes);
  EXPECT_THROW(evolve(h, psi, std::nan("")), ValidationError);
  EXPECT_THROW(evolve(h, psi, std::numeric_limits<double>::infinity()), ValidationError);
}

TEST(Evolve, TwoSiteAnalytic) {
  const std::vector<double> c{1.0};
  const auto h = build_sector_hamiltonian(CouplingPattern::chain(c).to_graph(), 1);
  const auto psi = SectorState::basis_state(h.basis_ptr(), 0b01);
  for (auto method : {EvolutionMethod::dense, EvolutionMethod::krylov}) {
    const auto out = evolve(h, psi, std::numbers::pi / 4, method);
    EXPECT_NEAR(std::abs(out.amplitudes(static_cast<Eigen::Index>(h.basis().rank(0b10)))), 1.0, 1e-12);
    // <01| U |10> = -i sin(2t) for t = pi/8.
    const auto half = evolve(h, psi, std::numbers::pi / 8, method);
    EXPECT_NEAR(std::abs(half.amplitudes(1) - cplx(0, -std::sin(std::numbers::pi / 4))), 0.0, 1e-12);
  }
}

TEST(Evolve, ForwardBackwardAndAgreesWithPade) {
  Rng rng(2);
  const auto h = build_sector_hamiltonian(random_pattern(Geometry::rectangular(2, 3), rng).to_graph(), 3);
  const auto psi = random_sector_state(h.basis_ptr(), rng);
  const double t = 1.7;
  const Eigen::VectorXcd ref = (cplx(0, -t) * h.dense().cast<cplx>()).exp() * psi.amplitudes;
  for (auto method : {EvolutionMethod::dense, EvolutionMethod::krylov}) {
    const auto out = evolve(h, psi, t, method);
    EXPECT_LT((out.amplitudes - ref).norm(), 1e-10);
    EXPECT_LT((evolve(h, out, -t, method).amplitudes - psi.amplitudes).norm(), 1e-10);
  }
}

TEST(Evolve, UnitarityOverRandomDraws) {
  Rng rng(3);
  const Geometry geometries[] = {Geometry::chain(6), Geometry::square(2), Geometry::square(3), Geometry::rectangular(2, 4)};
  int draws = 0;
  while (draws < 1000) {
    const auto& g = geometries[draws % 4];
    const auto p = random_pattern(g, rng);
    const int k = static_cast<int>(rng.next_u64() % (g.site_count() + 1));
    const auto h = build_sector_hamiltonian(p.to_graph(), k);
    for (int rep = 0; rep < 10; ++rep, ++draws) {
      const auto psi = random_sector_state(h.basis_ptr(), rng);
      const double t = rng.uniform(-20.0, 20.0);
      EXPECT_NEAR(evolve(h, psi, t).norm(), 1.0, 1e-12);
    }
  }
}

TEST(Evolve, KrylovAgreesWithDenseOnMidSizes) {
  Rng rng(4);
  struct Case {
    Geometry geometry;
    int k;
  };
  const Case cases[] = {{Geometry::square(4), 4}, {Geometry::rectangular(2, 7), 5}};
  for (const auto& c : cases) {
    const auto h = build_sector_hamiltonian(random_pattern(c.geometry, rng).to_graph(), c.k);
    ASSERT_GE(h.dim(), 1000U);
    ASSERT_LE(h.dim(), kDenseCrossover);
    const auto psi = random_sector_state(h.basis_ptr(), rng);
    for (double t : {0.3, 4.0}) {
      KrylovStats stats;
      const auto krylov = krylov_evolve(h, psi.amplitudes, t, {}, &stats);
      const auto dense = evolve(h, psi, t, EvolutionMethod::dense);
      EXPECT_LT((krylov - dense.amplitudes).norm(), 1e-9) << "dim " << h.dim() << " t " << t;
      EXPECT_GT(stats.substeps, 0);
    }
  }
}

TEST(EvolveSparse, AgreesWithSectorEvolutionAcrossSectors) {
  Rng rng(5);
  const auto g = Geometry::square(3);
  const auto p = random_pattern(g, rng);
  const auto graph = p.to_graph();
  std::vector<SparseState::Term> terms;
  for (std::uint64_t m = 0; m < 512; m += 7) terms.emplace_back(m, Amplitude{rng.normal(), rng.normal()});
  const auto psi = SparseState(9, terms).normalized();
  const double t = 2.3;
  const auto out = evolve_sparse(graph, psi, t);
  EXPECT_NEAR(out.norm(), 1.0, 1e-12);
  for (int k : psi.sectors()) {
    const auto basis = make_basis(9, k);
    const auto sector = evolve(build_sector_hamiltonian(graph, basis), psi.sector_component(k).to_sector(basis), t);
    EXPECT_LT((out.sector_component(k).to_sector(basis).amplitudes - sector.amplitudes).norm(), 1e-9) << k;
  }
}

TEST(SpectralPropagator, UnitaryAndElement) {
  const auto c = christandl_chain(5);
  const auto h = build_sector_hamiltonian(chain_pattern(c).to_graph(), 1);
  const SpectralPropagator prop(h);
  const auto u = prop.unitary(*c.transfer_time);
  EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(5, 5)).norm(), 1e-12);
  EXPECT_NEAR(std::abs(prop.element(4, 0, *c.transfer_time)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(u(4, 0)), 1.0, 1e-12);
}
