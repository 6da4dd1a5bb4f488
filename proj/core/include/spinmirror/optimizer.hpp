#pragma once

// Symmetry-constrained search over coupling patterns for the best mirroring
// fidelity, plus the frozen-witness ceiling it can be compared against.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "spinmirror/lattice.hpp"
#include "spinmirror/sector.hpp"
#include "spinmirror/sparse_state.hpp"
#include "spinmirror/symmetry.hpp"

namespace spinmirror {

enum class ObjectiveKind { single_state, sector_average };

/// Mirroring figure of merit, maximised over a time grid on [0, time_max].
///
/// single_state:   |<P psi0| U(t) |psi0>|
/// sector_average: (1/dim) sum_x |U_{perm(x), x}(t)|
///
/// The grid has `grid_points` uniform points; the best point is refined on a
/// grid `refine_factor` times finer within one coarse spacing, then polished
/// by golden-section search inside the refined bracket.
struct Objective {
  Objective(ObjectiveKind kind, int excitations, SymmetryMap mirror)
      : kind(kind), excitations(excitations), mirror(std::move(mirror)) {}

  ObjectiveKind kind;
  int excitations;
  SymmetryMap mirror;
  /// Required for single_state.
  std::optional<SectorState> state;
  /// Defaults to 8 pi / (mean coupling).
  std::optional<double> time_max;
  int grid_points = 400;
  int refine_factor = 10;
  bool polish = true;
};

struct ObjectiveValue {
  double value = 0.0;
  double time = 0.0;
};

ObjectiveValue evaluate_objective(const CouplingPattern& pattern, const Objective& objective);

/// Time window actually used for `pattern`.
double objective_time_max(const CouplingPattern& pattern, const Objective& objective);

/// One free value per edge orbit of the constraint group.
struct FreeParameters {
  Geometry geometry;
  std::vector<std::vector<std::size_t>> orbits;

  std::size_t size() const { return orbits.size(); }
  CouplingPattern pattern(std::span<const double> values) const;
  /// Orbit averages of `pattern`.
  std::vector<double> values(const CouplingPattern& pattern) const;
};

FreeParameters free_parameters(const Geometry& geometry, std::span<const SymmetryMap> group);

enum class OptimizerMethod { coordinate_descent, nelder_mead };

struct OptimizationConfig {
  std::vector<SymmetryMap> constraint_group;
  CouplingPattern initial;
  OptimizerMethod method = OptimizerMethod::coordinate_descent;
  std::uint64_t seed = 0;
  int max_iters = 60;
  int restarts = 8;
  /// Restarts after the first start from initial * (1 + spread * U(-1, 1)) per orbit.
  double restart_spread = 0.25;
  double lower_bound = 0.05;
  double upper_bound = 10.0;
  int line_search_evals = 24;
};

struct TraceRow {
  int restart = 0;
  int iteration = 0;
  double value = 0.0;  // incumbent of this restart
  double best = 0.0;   // best over the whole run so far
  double time = 0.0;
  std::vector<double> parameters;
};

struct OptimizationRun {
  OptimizationConfig config;
  CouplingPattern best_pattern;
  double best_time = 0.0;
  double best_value = 0.0;
  std::vector<double> restart_best;
  std::vector<TraceRow> trace;
  std::size_t evaluations = 0;
  double wall_seconds = 0.0;
};

/// Budget exhaustion is a normal completion. max_iters = 0 evaluates the
/// initial pattern only.
OptimizationRun optimize(const OptimizationConfig& config, const Objective& objective);

/// Upper bound on |<tau| U(t) |psi0>| for all t, tau = P psi0, implied by the
/// stationary witness component w (the witness built from `diagonal_state`,
/// projected onto the objective's sector and normalised):
///   |<tau|w> c| + ||tau - w <w|tau>|| * ||psi0 - c w||,  c = <w|psi0>.
/// Requires a main-diagonal symmetric pattern and a single_state objective.
double witness_ceiling(const CouplingPattern& pattern, const Objective& objective, const SparseState& diagonal_state);

struct Preset {
  OptimizationConfig config;
  Objective objective;
  std::optional<SparseState> witness_diagonal;
};

/// 3x3 lattice under both diagonal reflections; psi0 is the basis state
/// with (1,1) and every above-diagonal site excited, whose witness
/// component (diagonal |100>) is frozen.
Preset rx_3x3_witness_preset(std::uint64_t seed = 0);
/// Unconstrained 4-site chain, single excitation, started 5% off the
/// engineered couplings.
Preset chain4_preset(std::uint64_t seed = 0);

struct ProbeConfig {
  int ratio_points = 200;
  int time_points = 2000;
  double ratio_lo = 0.05;
  double ratio_hi = 1.0;
};

struct ProbeRow {
  double ratio = 0.0;
  double value = 0.0;
  double time = 0.0;
};

/// Exhaustive grid over the rotation-symmetric 2x2 lattice: vertical
/// couplings 1, horizontal couplings `ratio`. The value at each time is the
/// worst sector_average over the sectors k = 1, 2, 3.
struct ProbeReport {
  ProbeConfig config;
  double best_value = 0.0;
  double best_ratio = 0.0;
  double best_time = 0.0;
  std::vector<double> sector_values_at_best;  // k = 1, 2, 3
  std::vector<ProbeRow> rows;
};

ProbeReport probe_rotation_2x2(const ProbeConfig& config = {});

}  // namespace spinmirror
