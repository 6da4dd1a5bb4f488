#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "spinmirror/analysis.hpp"
#include "spinmirror/errors.hpp"
#include "spinmirror/optimizer.hpp"
#include "spinmirror/pst.hpp"
#include "spinmirror/witness.hpp"
#include "spinmirror/serialization.hpp"
#include "spinmirror/rng.hpp"

using namespace spinmirror;
using cplx = std::complex<double>;

namespace {

Objective reversal_average(const Geometry& g, int k) {
  return Objective(ObjectiveKind::sector_average, k, SymmetryMap::make(SymmetryKind::rotation_pi, g));
}

}  // namespace

TEST(FreeParameters, Counts) {
  const auto g = Geometry::square(2);
  EXPECT_EQ(free_parameters(g, std::vector{SymmetryMap::make(SymmetryKind::rotation_pi, g)}).size(), 2U);
  EXPECT_EQ(free_parameters(g, {}).size(), 4U);
  const auto g4 = Geometry::square(4);
  EXPECT_LT(free_parameters(g4, rx_generators(g4)).size(), g4.edge_count());
}

TEST(FreeParameters, PatternValuesRoundTrip) {
  const auto g = Geometry::square(3);
  const auto params = free_parameters(g, rx_generators(g));
  std::vector<double> v(params.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 + static_cast<double>(i);
  const auto p = params.pattern(v);
  EXPECT_TRUE(check_symmetry(p, rx_generators(g)));
  EXPECT_EQ(params.values(p), v);
  EXPECT_THROW(params.pattern(std::vector<double>{1.0}), ValidationError);
}

TEST(EvaluateObjective, ChristandlChainReachesOne) {
  const auto c = christandl_chain(6);
  const auto p = chain_pattern(c);
  const auto v = evaluate_objective(p, reversal_average(p.geometry(), 1));
  EXPECT_GE(v.value, 1.0 - 1e-10);
  // First perfect time, or an odd multiple of it.
  const double periods = v.time / *c.transfer_time;
  EXPECT_NEAR(periods, std::round(periods), 1e-6);
}

TEST(EvaluateObjective, ZeroCouplingsFreeze) {
  const auto p = CouplingPattern::uniform(Geometry::chain(5), 0.0);
  auto obj = reversal_average(p.geometry(), 1);
  obj.time_max = 3.0;
  EXPECT_NEAR(evaluate_objective(p, obj).value, 1.0 / 5.0, 1e-15);
  auto two = reversal_average(p.geometry(), 2);
  two.time_max = 3.0;
  // Reversal-invariant 2-excitation states of 5 sites: {1,5}, {2,4}.
  EXPECT_NEAR(evaluate_objective(p, two).value, 2.0 / 10.0, 1e-15);
}

TEST(EvaluateObjective, UniformFourChainBelowOne) {
  const auto p = chain_pattern(uniform_chain(4));
  const auto v = evaluate_objective(p, reversal_average(p.geometry(), 1));
  EXPECT_LT(v.value, 1.0);
}

TEST(EvaluateObjective, SingleStateMatchesMirroringReport) {
  const auto c = christandl_chain(5);
  const auto p = chain_pattern(c);
  auto obj = Objective(ObjectiveKind::single_state, 2, SymmetryMap::make(SymmetryKind::rotation_pi, p.geometry()));
  obj.state = SectorState::basis_state(make_basis(5, 2), 0b00011);
  const auto v = evaluate_objective(p, obj);
  EXPECT_GE(v.value, 1.0 - 1e-9);
  EXPECT_THROW(evaluate_objective(p, Objective(ObjectiveKind::single_state, 2, obj.mirror)), ValidationError);
}

TEST(EvaluateObjective, ScaleInvariance) {
  const auto g = Geometry::square(2);
  const CouplingPattern p(g, {1.0, 1.0}, {0.37, 0.37});
  for (int k = 1; k <= 3; ++k) {
    auto obj = reversal_average(g, k);
    obj.polish = false;
    const auto a = evaluate_objective(p, obj);
    const auto b = evaluate_objective(p.scaled(2.0), obj);
    EXPECT_NEAR(a.value, b.value, 1e-12);
    EXPECT_NEAR(a.time, 2.0 * b.time, 1e-9);
  }
}

TEST(Optimize, ZeroItersEvaluatesInitialOnly) {
  const auto preset = chain4_preset(3);
  auto config = preset.config;
  config.max_iters = 0;
  const auto run = optimize(config, preset.objective);
  EXPECT_EQ(run.evaluations, 1U);
  ASSERT_EQ(run.trace.size(), 1U);
  EXPECT_EQ(run.best_pattern, config.initial);
  EXPECT_EQ(run.best_value, evaluate_objective(config.initial, preset.objective).value);
}

TEST(Optimize, DeterministicMonotoneAndConstrained) {
  const auto g = Geometry::square(2);
  const std::vector rot{SymmetryMap::make(SymmetryKind::rotation_pi, g)};
  OptimizationConfig config{rot, CouplingPattern(g, {1.0, 1.0}, {0.5, 0.5})};
  config.seed = 11;
  config.max_iters = 4;
  config.restarts = 3;
  auto obj = reversal_average(g, 1);
  obj.grid_points = 100;
  const auto a = optimize(config, obj);
  const auto b = optimize(config, obj);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  ASSERT_EQ(a.trace.size(), b.trace.size());
  double prev = -1.0;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(a.trace[i].parameters, b.trace[i].parameters);
    EXPECT_EQ(a.trace[i].value, b.trace[i].value);
    EXPECT_GE(a.trace[i].best, prev);
    prev = a.trace[i].best;
  }
  EXPECT_TRUE(check_symmetry(a.best_pattern, rot));
  EXPECT_EQ(a.restart_best.size(), 3U);
  EXPECT_GT(a.evaluations, 3U);
  for (double w : a.best_pattern.edge_weights()) {
    EXPECT_GE(w, config.lower_bound);
    EXPECT_LE(w, config.upper_bound);
  }
}

TEST(Optimize, NelderMeadImproves) {
  const auto preset = chain4_preset(0);
  auto config = preset.config;
  config.method = OptimizerMethod::nelder_mead;
  config.restarts = 1;
  config.max_iters = 80;
  const double start = evaluate_objective(config.initial, preset.objective).value;
  const auto run = optimize(config, preset.objective);
  EXPECT_GT(run.best_value, start);
}

TEST(Optimize, RejectsBadConfig) {
  auto preset = chain4_preset(0);
  preset.config.restarts = 0;
  EXPECT_THROW(optimize(preset.config, preset.objective), ValidationError);
  preset.config.restarts = 1;
  preset.config.lower_bound = 2.0;
  preset.config.upper_bound = 1.0;
  EXPECT_THROW(optimize(preset.config, preset.objective), ValidationError);
}

TEST(WitnessCeiling, FrozenAndVacuousCases) {
  const auto g = Geometry::square(3);
  const auto p = CouplingPattern::uniform(g, 1.0);
  const auto diag = SparseState::basis(3, 0b001);
  const auto basis = make_basis(9, 4);
  const auto w = build_witness({3, diag}).to_sector(basis);
  Objective obj(ObjectiveKind::single_state, 4, SymmetryMap::make(SymmetryKind::rotation_pi, g));

  obj.state = w;
  EXPECT_NEAR(witness_ceiling(p, obj, diag), 0.0, 1e-14);

  // A basis state with (2,1) and (1,2) both empty is orthogonal to the witness.
  SectorState perp = SectorState::basis_state(
      basis, (1U << g.flat({1, 1})) | (1U << g.flat({1, 3})) | (1U << g.flat({2, 3})) | (1U << g.flat({3, 3})));
  ASSERT_NEAR(std::abs(w.amplitudes.dot(perp.amplitudes)), 0.0, 1e-15);
  obj.state = perp;
  EXPECT_NEAR(witness_ceiling(p, obj, diag), 1.0, 1e-12);

  const auto rot = SymmetryMap::make(SymmetryKind::rotation_pi, g);
  EXPECT_THROW(witness_ceiling(random_symmetric_pattern(g, std::vector{rot}, 1, 0.2, 1.0), obj, diag), ValidationError);
}

TEST(WitnessCeiling, DominatesDenseScanForRxPatterns) {
  const auto preset = rx_3x3_witness_preset();
  const auto g = Geometry::square(3);
  auto obj = preset.objective;
  const double ceiling = witness_ceiling(CouplingPattern::uniform(g, 1.0), obj, *preset.witness_diagonal);
  EXPECT_NEAR(ceiling, std::sqrt(7.0 / 8.0), 1e-12);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto p = random_symmetric_pattern(g, rx_generators(g), seed, 0.2, 2.0);
    const auto prop = SpectralPropagator(build_sector_hamiltonian(p.to_graph(), 4));
    const auto& psi = obj.state->amplitudes;
    const auto targets = basis_permutation(*obj.state->basis, obj.mirror);
    Eigen::VectorXcd tau(psi.size());
    for (Eigen::Index x = 0; x < psi.size(); ++x) tau(static_cast<Eigen::Index>(targets[static_cast<std::size_t>(x)])) = psi(x);
    double peak = 0.0;
    for (int i = 0; i <= 3000; ++i) peak = std::max(peak, std::abs(tau.dot(prop.evolve(psi, 0.02 * i))));
    EXPECT_LE(peak, witness_ceiling(p, obj, *preset.witness_diagonal) + 1e-9);
  }
}

TEST(WitnessCeiling, HalfWitnessMixture) {
  const auto g = Geometry::square(3);
  const auto p = random_symmetric_pattern(g, rx_generators(g), 9, 0.3, 1.7);
  const auto diag = SparseState::basis(3, 0b001);
  const auto basis = make_basis(9, 4);
  const auto w = build_witness({3, diag}).to_sector(basis).amplitudes;
  // Orthogonal partner: a basis state outside the witness support, mixed with w.
  const auto perp = SectorState::basis_state(basis, 0b000001111).amplitudes;
  ASSERT_NEAR(std::abs(w.dot(perp)), 0.0, 1e-15);
  Objective obj(ObjectiveKind::single_state, 4, SymmetryMap::make(SymmetryKind::rotation_pi, g));
  obj.state = SectorState{basis, (w + perp) / std::sqrt(2.0)};
  const double ceiling = witness_ceiling(p, obj, diag);
  EXPECT_LE(ceiling, 1.0 / std::sqrt(2.0) + 1e-12);
  const auto scan = evaluate_objective(p, obj);
  EXPECT_LE(scan.value, ceiling + 1e-9);
}

TEST(Probe, SmallGridDeterministic) {
  ProbeConfig config{12, 200, 0.05, 1.0};
  const auto a = probe_rotation_2x2(config);
  const auto b = probe_rotation_2x2(config);
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  ASSERT_EQ(a.rows.size(), 12U);
  EXPECT_EQ(a.sector_values_at_best.size(), 3U);
  EXPECT_GT(a.best_value, 0.0);
  EXPECT_LE(a.best_value, 1.0 + 1e-12);
  EXPECT_THROW(probe_rotation_2x2({1, 10, 0.1, 1.0}), ValidationError);
}
