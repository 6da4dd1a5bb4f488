#include "spinmirror/optimizer.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "spinmirror/analysis.hpp"
#include "spinmirror/errors.hpp"
#include "spinmirror/evolution.hpp"
#include "spinmirror/pst.hpp"
#include "spinmirror/rng.hpp"
#include "spinmirror/witness.hpp"

namespace spinmirror {

namespace {

using cplx = std::complex<double>;

constexpr double kGoldenRatio = 0.6180339887498949;

/// Objective as a function of time for one fixed pattern.
class TimeProfile {
 public:
  TimeProfile(const CouplingPattern& pattern, const Objective& objective) : kind_(objective.kind) {
    const auto& geometry = pattern.geometry();
    const auto basis = make_basis(static_cast<int>(geometry.site_count()), objective.excitations);
    const SpectralPropagator propagator(build_sector_hamiltonian(pattern.to_graph(), basis));
    lambda_ = propagator.eigenvalues();
    const Eigen::MatrixXd& v = propagator.eigenvectors();
    const auto targets = basis_permutation(*basis, objective.mirror);
    const auto n = static_cast<Eigen::Index>(basis->dim());

    if (kind_ == ObjectiveKind::single_state) {
      if (!objective.state) throw ValidationError("single_state objective needs an initial state");
      const auto& psi = objective.state->amplitudes;
      if (psi.size() != n) throw ValidationError("objective state does not match the sector dimension");
      Eigen::VectorXcd tau(n);
      for (Eigen::Index x = 0; x < n; ++x) tau(static_cast<Eigen::Index>(targets[static_cast<std::size_t>(x)])) = psi(x);
      const Eigen::VectorXcd c = v.transpose().cast<cplx>() * psi;
      const Eigen::VectorXcd d = v.transpose().cast<cplx>() * tau;
      weights_ = d.conjugate().cwiseProduct(c);
    } else {
      overlap_.resize(n, n);
      for (Eigen::Index x = 0; x < n; ++x) {
        const auto y = static_cast<Eigen::Index>(targets[static_cast<std::size_t>(x)]);
        overlap_.row(x) = v.row(y).cwiseProduct(v.row(x));
      }
    }
  }

  double operator()(double t) const {
    Eigen::VectorXcd phase(lambda_.size());
    for (Eigen::Index k = 0; k < lambda_.size(); ++k) phase(k) = std::exp(cplx(0.0, -lambda_(k) * t));
    if (kind_ == ObjectiveKind::single_state) return std::abs(weights_.cwiseProduct(phase).sum());
    const Eigen::VectorXcd amps = overlap_.cast<cplx>() * phase;
    return amps.cwiseAbs().sum() / static_cast<double>(amps.size());
  }

 private:
  ObjectiveKind kind_;
  Eigen::VectorXd lambda_;
  Eigen::VectorXcd weights_;
  Eigen::MatrixXd overlap_;
};

/// Max of f on [a, b] by golden-section search; returns the best point seen.
template <class F>
std::pair<double, double> golden_section_max(const F& f, double a, double b, int evals) {
  double x1 = b - kGoldenRatio * (b - a);
  double x2 = a + kGoldenRatio * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  std::pair<double, double> best = f1 >= f2 ? std::pair(x1, f1) : std::pair(x2, f2);
  for (int i = 2; i < evals; ++i) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGoldenRatio * (b - a);
      f1 = f(x1);
      if (f1 > best.second) best = {x1, f1};
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGoldenRatio * (b - a);
      f2 = f(x2);
      if (f2 > best.second) best = {x2, f2};
    }
  }
  return best;
}

}  // namespace

double objective_time_max(const CouplingPattern& pattern, const Objective& objective) {
  if (objective.time_max) {
    if (!(*objective.time_max > 0.0)) throw ValidationError("objective time window must be positive");
    return *objective.time_max;
  }
  const double mean = pattern.mean_strength();
  return mean > 0.0 ? 8.0 * std::numbers::pi / mean : 1.0;
}

ObjectiveValue evaluate_objective(const CouplingPattern& pattern, const Objective& objective) {
  if (objective.grid_points < 2) throw ValidationError("objective needs at least 2 grid points");
  if (objective.mirror.site_count() != pattern.geometry().site_count()) {
    throw ValidationError("objective mirror does not match the pattern geometry");
  }
  const TimeProfile profile(pattern, objective);
  const double t_max = objective_time_max(pattern, objective);
  const int points = objective.grid_points;
  const double spacing = t_max / (points - 1);

  ObjectiveValue best{profile(0.0), 0.0};
  for (int i = 1; i < points; ++i) {
    const double t = t_max * i / (points - 1);
    const double v = profile(t);
    if (v > best.value) best = {v, t};
  }
  if (objective.refine_factor > 1) {
    const double fine = spacing / objective.refine_factor;
    const double centre = best.time;
    for (int j = -objective.refine_factor; j <= objective.refine_factor; ++j) {
      const double t = centre + j * fine;
      if (j == 0 || t < 0.0 || t > t_max) continue;
      const double v = profile(t);
      if (v > best.value) best = {v, t};
    }
    if (objective.polish) {
      const double a = std::max(0.0, best.time - fine);
      const double b = std::min(t_max, best.time + fine);
      if (b > a) {
        const auto [t, v] = golden_section_max(profile, a, b, 80);
        if (v > best.value) best = {v, t};
      }
    }
  }
  return best;
}

CouplingPattern FreeParameters::pattern(std::span<const double> values) const {
  if (values.size() != orbits.size()) throw ValidationError("free parameter count mismatch");
  std::vector<double> weights(geometry.edge_count(), 0.0);
  for (std::size_t o = 0; o < orbits.size(); ++o)
    for (auto e : orbits[o]) weights[e] = values[o];
  return CouplingPattern::from_edge_weights(geometry, weights);
}

std::vector<double> FreeParameters::values(const CouplingPattern& pattern) const {
  if (!(pattern.geometry() == geometry)) throw ValidationError("pattern geometry differs from parameter map");
  const auto weights = pattern.edge_weights();
  std::vector<double> out;
  out.reserve(orbits.size());
  for (const auto& orbit : orbits) {
    double sum = 0.0;
    for (auto e : orbit) sum += weights[e];
    out.push_back(sum / static_cast<double>(orbit.size()));
  }
  return out;
}

FreeParameters free_parameters(const Geometry& geometry, std::span<const SymmetryMap> group) {
  return FreeParameters{geometry, edge_orbits(geometry, group)};
}

namespace {

class SearchState {
 public:
  SearchState(const OptimizationConfig& config, const Objective& objective, OptimizationRun& run)
      : config_(config),
        objective_(objective),
        run_(run),
        params_(free_parameters(config.initial.geometry(), config.constraint_group)) {}

  const FreeParameters& params() const { return params_; }

  double clamp(double x) const { return std::clamp(x, config_.lower_bound, config_.upper_bound); }

  ObjectiveValue evaluate(std::span<const double> values) {
    const auto pattern = params_.pattern(values);
    if (!check_symmetry(pattern, config_.constraint_group)) {
      throw NumericalError("optimizer produced a pattern outside the constraint group");
    }
    const auto result = evaluate_objective(pattern, objective_);
    ++run_.evaluations;
    if (run_.evaluations == 1 || result.value > run_.best_value) {
      run_.best_value = result.value;
      run_.best_time = result.time;
      run_.best_pattern = pattern;
    }
    return result;
  }

  void record(int restart, int iteration, const ObjectiveValue& incumbent, std::span<const double> x) {
    run_.trace.push_back({restart, iteration, incumbent.value, run_.best_value, incumbent.time,
                          std::vector<double>(x.begin(), x.end())});
  }

  ObjectiveValue coordinate_descent(int restart, std::vector<double>& x) {
    ObjectiveValue fx = evaluate(x);
    record(restart, 0, fx, x);
    std::vector<double> radius(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) radius[i] = 0.5 * std::max(x[i], config_.lower_bound);

    for (int it = 1; it <= config_.max_iters; ++it) {
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double a = clamp(x[i] - radius[i]);
        const double b = clamp(x[i] + radius[i]);
        if (!(b > a)) {
          radius[i] *= 0.5;
          continue;
        }
        auto trial = x;
        ObjectiveValue best_line = fx;
        double best_coord = x[i];
        const auto line = [&](double s) {
          trial[i] = s;
          const auto r = evaluate(trial);
          if (r.value > best_line.value) {
            best_line = r;
            best_coord = s;
          }
          return r.value;
        };
        golden_section_max(line, a, b, config_.line_search_evals);
        if (best_line.value > fx.value) {
          x[i] = best_coord;
          fx = best_line;
        } else {
          radius[i] *= 0.5;
        }
      }
      record(restart, it, fx, x);
      bool converged = true;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (radius[i] > 1e-12 * std::max(1.0, x[i])) converged = false;
      if (converged) break;
    }
    return fx;
  }

  ObjectiveValue nelder_mead(int restart, std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> simplex{x};
    for (std::size_t i = 0; i < n; ++i) {
      auto v = x;
      v[i] = clamp(v[i] * 1.1 + (v[i] == 0.0 ? 0.1 : 0.0));
      if (v[i] == x[i]) v[i] = clamp(x[i] * 0.9);
      simplex.push_back(v);
    }
    std::vector<ObjectiveValue> f;
    for (const auto& v : simplex) f.push_back(evaluate(v));
    auto order = [&] {
      std::vector<std::size_t> idx(simplex.size());
      for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
      std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a].value > f[b].value; });
      std::vector<std::vector<double>> s2;
      std::vector<ObjectiveValue> f2;
      for (auto i : idx) {
        s2.push_back(simplex[i]);
        f2.push_back(f[i]);
      }
      simplex = std::move(s2);
      f = std::move(f2);
    };
    order();
    record(restart, 0, f[0], simplex[0]);
    auto point = [&](const std::vector<double>& centroid, const std::vector<double>& worst, double coeff) {
      std::vector<double> p(n);
      for (std::size_t i = 0; i < n; ++i) p[i] = clamp(centroid[i] + coeff * (worst[i] - centroid[i]));
      return p;
    };
    for (int it = 1; it <= config_.max_iters; ++it) {
      std::vector<double> centroid(n, 0.0);
      for (std::size_t v = 0; v < n; ++v)
        for (std::size_t i = 0; i < n; ++i) centroid[i] += simplex[v][i] / static_cast<double>(n);
      const auto reflected = point(centroid, simplex[n], -1.0);
      const auto fr = evaluate(reflected);
      if (fr.value > f[0].value) {
        const auto expanded = point(centroid, simplex[n], -2.0);
        const auto fe = evaluate(expanded);
        if (fe.value > fr.value) {
          simplex[n] = expanded;
          f[n] = fe;
        } else {
          simplex[n] = reflected;
          f[n] = fr;
        }
      } else if (fr.value > f[n - 1].value) {
        simplex[n] = reflected;
        f[n] = fr;
      } else {
        const auto contracted = point(centroid, simplex[n], 0.5);
        const auto fc = evaluate(contracted);
        if (fc.value > f[n].value) {
          simplex[n] = contracted;
          f[n] = fc;
        } else {
          for (std::size_t v = 1; v <= n; ++v) {
            for (std::size_t i = 0; i < n; ++i) simplex[v][i] = clamp(simplex[0][i] + 0.5 * (simplex[v][i] - simplex[0][i]));
            f[v] = evaluate(simplex[v]);
          }
        }
      }
      order();
      record(restart, it, f[0], simplex[0]);
      double spread = 0.0;
      for (std::size_t v = 1; v <= n; ++v)
        for (std::size_t i = 0; i < n; ++i) spread = std::max(spread, std::abs(simplex[v][i] - simplex[0][i]));
      if (spread < 1e-13) break;
    }
    x = simplex[0];
    return f[0];
  }

 private:
  const OptimizationConfig& config_;
  const Objective& objective_;
  OptimizationRun& run_;
  FreeParameters params_;
};

}  // namespace

OptimizationRun optimize(const OptimizationConfig& config, const Objective& objective) {
  if (config.max_iters < 0 || config.restarts < 1) throw ValidationError("optimize: invalid iteration budget");
  if (!(config.lower_bound > 0.0 && config.lower_bound < config.upper_bound)) {
    throw ValidationError("optimize: invalid coupling box");
  }
  if (config.line_search_evals < 3) throw ValidationError("optimize: line search needs at least 3 evaluations");
  const auto started = std::chrono::steady_clock::now();

  OptimizationRun run{config, config.initial, 0.0, 0.0, {}, {}, 0, 0.0};
  SearchState search(config, objective, run);
  Rng rng(config.seed);

  auto base = search.params().values(symmetrize_pattern(config.initial, config.constraint_group));
  for (auto& v : base) v = search.clamp(v);

  const int restarts = config.max_iters == 0 ? 1 : config.restarts;
  for (int r = 0; r < restarts; ++r) {
    auto x = base;
    if (r > 0) {
      for (auto& v : x) v = search.clamp(v * (1.0 + config.restart_spread * rng.uniform(-1.0, 1.0)));
    }
    ObjectiveValue result;
    if (config.max_iters == 0) {
      result = search.evaluate(x);
      search.record(r, 0, result, x);
    } else if (config.method == OptimizerMethod::coordinate_descent) {
      result = search.coordinate_descent(r, x);
    } else {
      result = search.nelder_mead(r, x);
    }
    run.restart_best.push_back(result.value);
  }
  run.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return run;
}

double witness_ceiling(const CouplingPattern& pattern, const Objective& objective, const SparseState& diagonal_state) {
  const auto& geometry = pattern.geometry();
  if (!geometry.is_square()) throw ValidationError("witness_ceiling: square lattice required");
  if (!check_symmetry(pattern, SymmetryMap::make(SymmetryKind::main_diagonal, geometry))) {
    throw ValidationError("witness_ceiling: pattern is not main-diagonal symmetric");
  }
  if (objective.kind != ObjectiveKind::single_state || !objective.state) {
    throw ValidationError("witness_ceiling: single_state objective required");
  }
  const auto& psi = objective.state->amplitudes;
  const auto& basis = objective.state->basis;
  const auto n = static_cast<Eigen::Index>(basis->dim());

  const auto component = build_witness({geometry.side(), diagonal_state}).sector_component(objective.excitations);
  if (component.norm() == 0.0) return 1.0;
  const Eigen::VectorXcd w = component.normalized().to_sector(basis).amplitudes;

  const auto targets = basis_permutation(*basis, objective.mirror);
  Eigen::VectorXcd tau(n);
  for (Eigen::Index x = 0; x < n; ++x) tau(static_cast<Eigen::Index>(targets[static_cast<std::size_t>(x)])) = psi(x);

  const cplx c = w.dot(psi);
  const cplx w_tau = w.dot(tau);
  const double frozen = std::abs(std::conj(w_tau) * c);
  const double moving = (tau - w_tau * w).norm() * (psi - c * w).norm();
  return frozen + moving;
}

Preset rx_3x3_witness_preset(std::uint64_t seed) {
  const auto geometry = Geometry::square(3);
  const auto basis = make_basis(9, 4);
  // (1,1), (1,2), (1,3), (2,3).
  const std::uint64_t mask = (1U << geometry.flat({1, 1})) | (1U << geometry.flat({1, 2})) |
                             (1U << geometry.flat({1, 3})) | (1U << geometry.flat({2, 3}));
  Objective objective(ObjectiveKind::single_state, 4, SymmetryMap::make(SymmetryKind::rotation_pi, geometry));
  objective.state = SectorState::basis_state(basis, mask);

  OptimizationConfig config{rx_generators(geometry), CouplingPattern::uniform(geometry, 1.0)};
  config.seed = seed;
  config.max_iters = 12;
  config.restarts = 8;
  return Preset{std::move(config), std::move(objective), SparseState::basis(3, 0b001)};
}

Preset chain4_preset(std::uint64_t seed) {
  const auto chain = christandl_chain(4);
  const double offsets[] = {1.05, 0.95, 1.03};
  std::vector<double> start;
  for (std::size_t m = 0; m < chain.couplings.size(); ++m) start.push_back(chain.couplings[m] * offsets[m]);
  const auto initial = CouplingPattern::chain(start);
  Objective objective(ObjectiveKind::sector_average, 1,
                      SymmetryMap::make(SymmetryKind::rotation_pi, initial.geometry()));
  OptimizationConfig config{{}, initial};
  config.seed = seed;
  config.max_iters = 200;
  config.restarts = 8;
  config.restart_spread = 0.05;
  return Preset{std::move(config), std::move(objective), std::nullopt};
}

ProbeReport probe_rotation_2x2(const ProbeConfig& config) {
  if (config.ratio_points < 2 || config.time_points < 2) throw ValidationError("probe: grid too small");
  if (!(config.ratio_lo > 0.0 && config.ratio_lo < config.ratio_hi)) throw ValidationError("probe: invalid ratio range");
  const auto geometry = Geometry::square(2);
  const auto rotation = SymmetryMap::make(SymmetryKind::rotation_pi, geometry);

  ProbeReport report;
  report.config = config;
  report.best_value = -1.0;
  for (int i = 0; i < config.ratio_points; ++i) {
    const double ratio = config.ratio_lo + (config.ratio_hi - config.ratio_lo) * i / (config.ratio_points - 1);
    const CouplingPattern pattern(geometry, {1.0, 1.0}, {ratio, ratio});
    std::vector<TimeProfile> profiles;
    for (int k = 1; k <= 3; ++k) profiles.emplace_back(pattern, Objective(ObjectiveKind::sector_average, k, rotation));
    const double t_max = 8.0 * std::numbers::pi / pattern.mean_strength();

    ProbeRow row{ratio, -1.0, 0.0};
    for (int j = 0; j < config.time_points; ++j) {
      const double t = t_max * j / (config.time_points - 1);
      double worst = 1.0;
      for (const auto& p : profiles) worst = std::min(worst, p(t));
      if (worst > row.value) row = {ratio, worst, t};
    }
    if (row.value > report.best_value) {
      report.best_value = row.value;
      report.best_ratio = ratio;
      report.best_time = row.time;
      report.sector_values_at_best.clear();
      for (const auto& p : profiles) report.sector_values_at_best.push_back(p(row.time));
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace spinmirror
