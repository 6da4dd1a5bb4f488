#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "spinmirror/errors.hpp"
#include "spinmirror/rng.hpp"
#include "spinmirror/symmetry.hpp"

using namespace spinmirror;

namespace {

const SymmetryKind kAll[] = {SymmetryKind::identity,      SymmetryKind::main_diagonal, SymmetryKind::anti_diagonal,
                             SymmetryKind::rotation_pi,   SymmetryKind::vertical_axis, SymmetryKind::horizontal_axis};

CouplingPattern random_pattern(const Geometry& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> w(g.edge_count());
  for (auto& x : w) x = rng.uniform(0.1, 2.0);
  return CouplingPattern::from_edge_weights(g, w);
}

}  // namespace

TEST(SymmetryMap, ExplicitImages) {
  const auto g = Geometry::square(4);
  auto image = [&](SymmetryKind k, Coord c) { return g.coord(SymmetryMap::make(k, g)(g.flat(c))); };
  EXPECT_EQ(image(SymmetryKind::main_diagonal, {1, 3}), (Coord{3, 1}));
  EXPECT_EQ(image(SymmetryKind::anti_diagonal, {1, 3}), (Coord{2, 4}));
  EXPECT_EQ(image(SymmetryKind::rotation_pi, {1, 3}), (Coord{4, 2}));
  EXPECT_EQ(image(SymmetryKind::vertical_axis, {1, 3}), (Coord{1, 2}));
  EXPECT_EQ(image(SymmetryKind::horizontal_axis, {1, 3}), (Coord{4, 3}));
  EXPECT_EQ(image(SymmetryKind::identity, {1, 3}), (Coord{1, 3}));
}

TEST(SymmetryMap, AllAreInvolutionsAndBijections) {
  for (int n = 1; n <= 8; ++n) {
    const auto g = Geometry::square(n);
    for (auto k : kAll) {
      const auto s = SymmetryMap::make(k, g);
      std::set<std::size_t> image(s.perm().begin(), s.perm().end());
      EXPECT_EQ(image.size(), g.site_count());
      EXPECT_TRUE(s.is_involution()) << to_string(k) << " n=" << n;
    }
  }
}

TEST(SymmetryMap, RotationIsCompositionOfDiagonals) {
  for (int n = 1; n <= 8; ++n) {
    const auto g = Geometry::square(n);
    const auto md = SymmetryMap::make(SymmetryKind::main_diagonal, g);
    const auto ad = SymmetryMap::make(SymmetryKind::anti_diagonal, g);
    const auto rot = SymmetryMap::make(SymmetryKind::rotation_pi, g);
    EXPECT_EQ(ad.after(md), rot);
    EXPECT_EQ(md.after(ad), rot);
    for (std::size_t s = 0; s < g.site_count(); ++s) EXPECT_EQ(rot(s), ad(md(s)));
  }
}

TEST(SymmetryMap, DiagonalsNeedSquare) {
  const auto g = Geometry::rectangular(2, 4);
  EXPECT_THROW(SymmetryMap::make(SymmetryKind::main_diagonal, g), ValidationError);
  EXPECT_NO_THROW(SymmetryMap::make(SymmetryKind::vertical_axis, g));
  EXPECT_THROW(parse_symmetry_kind("diagonal"), ValidationError);
  for (auto k : kAll) EXPECT_EQ(parse_symmetry_kind(to_string(k)), k);
}

TEST(SymmetryMap, MaskAction) {
  const auto g = Geometry::chain(4);
  const auto rev = SymmetryMap::make(SymmetryKind::rotation_pi, g);
  EXPECT_EQ(rev.apply_to_mask(0b0001), 0b1000U);
  EXPECT_EQ(rev.apply_to_mask(0b0011), 0b1100U);
  EXPECT_EQ(rev.apply_to_mask(0b1001), 0b1001U);
}

TEST(CheckSymmetry, UniformPassesEverything) {
  const auto g = Geometry::square(4);
  const auto p = CouplingPattern::uniform(g, 1.0);
  for (auto k : kAll) EXPECT_TRUE(check_symmetry(p, SymmetryMap::make(k, g)));
}

TEST(CheckSymmetry, TwoByTwoExample) {
  const auto g = Geometry::square(2);
  // J11 = 1, J12 = 2, K11 = 1, K21 = 2.
  const CouplingPattern p(g, {1.0, 2.0}, {1.0, 2.0});
  EXPECT_TRUE(check_symmetry(p, SymmetryMap::make(SymmetryKind::main_diagonal, g)));
  EXPECT_FALSE(check_symmetry(p, SymmetryMap::make(SymmetryKind::anti_diagonal, g)));
}

TEST(CheckSymmetry, GraphMissingImageFails) {
  const auto g = Geometry::square(3);
  const auto md = SymmetryMap::make(SymmetryKind::main_diagonal, g);
  const ExchangeGraph one(9, {{g.flat({1, 1}), g.flat({1, 3}), 1.0}});
  EXPECT_FALSE(check_symmetry(one, md));
  const ExchangeGraph both(9, {{g.flat({1, 1}), g.flat({1, 3}), 1.0}, {g.flat({1, 1}), g.flat({3, 1}), 1.0}});
  EXPECT_TRUE(check_symmetry(both, md));
}

TEST(CheckSymmetry, BothDiagonalsImplyRotation) {
  for (int n = 2; n <= 6; ++n) {
    const auto g = Geometry::square(n);
    const auto gens = rx_generators(g);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto p = random_symmetric_pattern(g, gens, seed, 0.1, 2.0);
      ASSERT_TRUE(check_symmetry(p, gens));
      EXPECT_TRUE(check_symmetry(p, SymmetryMap::make(SymmetryKind::rotation_pi, g)));
    }
  }
}

TEST(GroupClosure, RxHasFourElements) {
  const auto g = Geometry::square(4);
  const auto gens = rx_generators(g);
  const auto group = group_closure(g, gens);
  EXPECT_EQ(group.size(), 4U);
  EXPECT_TRUE(std::any_of(group.begin(), group.end(), [](const SymmetryMap& s) { return s.is_identity(); }));
  EXPECT_TRUE(std::any_of(group.begin(), group.end(), [&](const SymmetryMap& s) {
    return s == SymmetryMap::make(SymmetryKind::rotation_pi, g);
  }));
  EXPECT_EQ(group_closure(g, {}).size(), 1U);
}

TEST(EdgeOrbits, MatchBruteForcePartition) {
  for (int n = 2; n <= 5; ++n) {
    const auto g = Geometry::square(n);
    const auto nn = g.nearest_neighbour_edges();
    for (const auto& gens : {rx_generators(g), std::vector{SymmetryMap::make(SymmetryKind::rotation_pi, g)},
                             std::vector{SymmetryMap::make(SymmetryKind::main_diagonal, g)}}) {
      const auto group = group_closure(g, gens);
      // Brute force: two edges share an orbit iff some group element maps one to the other.
      std::map<std::size_t, std::set<std::size_t>> expected;
      for (std::size_t e = 0; e < nn.size(); ++e) {
        for (const auto& s : group) {
          auto a = s(nn[e].first), b = s(nn[e].second);
          if (a > b) std::swap(a, b);
          const auto f = static_cast<std::size_t>(std::find(nn.begin(), nn.end(), std::pair(a, b)) - nn.begin());
          expected[e].insert(f);
        }
      }
      const auto orbits = edge_orbits(g, gens);
      std::size_t covered = 0;
      for (const auto& orbit : orbits) {
        covered += orbit.size();
        for (auto e : orbit) EXPECT_EQ(std::set(orbit.begin(), orbit.end()), expected[e]);
      }
      EXPECT_EQ(covered, nn.size());
    }
  }
}

TEST(EdgeOrbits, TwoByTwoCounts) {
  const auto g = Geometry::square(2);
  EXPECT_EQ(edge_orbits(g, std::vector{SymmetryMap::make(SymmetryKind::rotation_pi, g)}).size(), 2U);
  EXPECT_EQ(edge_orbits(g, rx_generators(g)).size(), 1U);
  EXPECT_EQ(edge_orbits(g, {}).size(), 4U);
}

TEST(Symmetrize, FixedPointAndIdempotent) {
  const auto g = Geometry::square(3);
  const auto gens = rx_generators(g);
  const auto p = random_pattern(g, 7);
  const auto s = symmetrize_pattern(p, gens);
  EXPECT_TRUE(check_symmetry(s, gens));
  EXPECT_EQ(symmetrize_pattern(s, gens), s);
  const auto u = CouplingPattern::uniform(g, 1.5);
  EXPECT_EQ(symmetrize_pattern(u, gens), u);
}

TEST(Symmetrize, SingleEdgePerturbationSplitsAcrossOrbit) {
  const auto g = Geometry::square(3);
  const std::vector gens{SymmetryMap::make(SymmetryKind::main_diagonal, g)};
  auto w = CouplingPattern::uniform(g, 1.0).edge_weights();
  w[0] += 0.2;  // (1,1)-(2,1), partner (1,1)-(1,2)
  const auto s = symmetrize_pattern(CouplingPattern::from_edge_weights(g, w), gens);
  EXPECT_NEAR(s.J(1, 1), 1.1, 1e-15);
  EXPECT_NEAR(s.K(1, 1), 1.1, 1e-15);
  EXPECT_DOUBLE_EQ(s.J(2, 2), 1.0);
}

TEST(RandomSymmetric, DeterministicInRangeAndSymmetric) {
  const auto g4 = Geometry::square(4);
  const auto rx = rx_generators(g4);
  const auto a = random_symmetric_pattern(g4, rx, 42, 0.5, 1.5);
  EXPECT_EQ(a, random_symmetric_pattern(g4, rx, 42, 0.5, 1.5));
  EXPECT_NE(a, random_symmetric_pattern(g4, rx, 43, 0.5, 1.5));
  EXPECT_TRUE(check_symmetry(a, rx));
  for (double w : a.edge_weights()) {
    EXPECT_GE(w, 0.5);
    EXPECT_LE(w, 1.5);
  }
  const auto g3 = Geometry::square(3);
  const std::vector rot{SymmetryMap::make(SymmetryKind::rotation_pi, g3)};
  EXPECT_TRUE(check_symmetry(random_symmetric_pattern(g3, rot, 1, 0.1, 1.0), rot));
  EXPECT_THROW(random_symmetric_pattern(g3, rot, 1, 1.0, 1.0), ValidationError);
}
