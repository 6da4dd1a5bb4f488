#include <benchmark/benchmark.h>

#include <cmath>

#include "spinmirror/evolution.hpp"
#include "spinmirror/optimizer.hpp"
#include "spinmirror/pst.hpp"
#include "spinmirror/rng.hpp"
#include "spinmirror/sector.hpp"
#include "spinmirror/symmetry.hpp"
#include "spinmirror/witness.hpp"

using namespace spinmirror;

namespace {

CouplingPattern random_pattern(const Geometry& g, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> w(g.edge_count());
  for (auto& x : w) x = rng.uniform(0.5, 1.5);
  return CouplingPattern::from_edge_weights(g, w);
}

SectorState random_state(const BasisPtr& basis, std::uint64_t seed) {
  Rng rng(seed);
  SectorState s{basis, Eigen::VectorXcd(static_cast<Eigen::Index>(basis->dim()))};
  for (Eigen::Index i = 0; i < s.amplitudes.size(); ++i) s.amplitudes(i) = {rng.normal(), rng.normal()};
  s.amplitudes.normalize();
  return s;
}

// Args: lattice side, excitations.
void BM_SectorHamiltonianBuild(benchmark::State& state) {
  const auto graph = random_pattern(Geometry::square(static_cast<int>(state.range(0))), 1).to_graph();
  const int k = static_cast<int>(state.range(1));
  std::size_t dim = 0;
  for (auto _ : state) {
    auto h = build_sector_hamiltonian(graph, k);
    dim = h.dim();
    benchmark::DoNotOptimize(h);
  }
  state.counters["dim"] = static_cast<double>(dim);
}
BENCHMARK(BM_SectorHamiltonianBuild)->Args({3, 4})->Args({4, 4})->Args({4, 8})->Args({5, 3})->Unit(benchmark::kMillisecond);

void evolve_bench(benchmark::State& state, EvolutionMethod method) {
  const auto g = Geometry::rectangular(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto h = build_sector_hamiltonian(random_pattern(g, 2).to_graph(), static_cast<int>(state.range(2)));
  const auto psi = random_state(h.basis_ptr(), 3);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(h, psi, 2.5, method));
  state.counters["dim"] = static_cast<double>(h.dim());
}

// Args: rows, cols, excitations.
void BM_EvolveDense(benchmark::State& state) { evolve_bench(state, EvolutionMethod::dense); }
void BM_EvolveKrylov(benchmark::State& state) { evolve_bench(state, EvolutionMethod::krylov); }
BENCHMARK(BM_EvolveDense)->Args({3, 3, 3})->Args({3, 4, 4})->Args({4, 4, 3})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvolveKrylov)->Args({3, 3, 3})->Args({3, 4, 4})->Args({4, 4, 3})->Args({4, 4, 8})->Unit(benchmark::kMillisecond);

// Arg: lattice side.
void BM_WitnessApply(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto g = Geometry::square(n);
  const auto graph = random_symmetric_pattern(g, rx_generators(g), 4, 0.5, 1.5).to_graph();
  Rng rng(5);
  std::vector<SparseState::Term> terms;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) terms.emplace_back(m, Amplitude{rng.normal(), rng.normal()});
  const auto witness = build_witness({n, SparseState(static_cast<std::size_t>(n), terms).normalized()});
  for (auto _ : state) benchmark::DoNotOptimize(verify_zero_energy(graph, witness));
  state.counters["support"] = static_cast<double>(witness.support_size());
}
BENCHMARK(BM_WitnessApply)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

// Arg: time grid points.
void BM_EvaluateObjective(benchmark::State& state) {
  auto preset = rx_3x3_witness_preset();
  preset.objective.grid_points = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_objective(preset.config.initial, preset.objective));
}
BENCHMARK(BM_EvaluateObjective)->Arg(100)->Arg(400)->Arg(1600)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
