#include "spinmirror/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "spinmirror/errors.hpp"

namespace spinmirror {

namespace {

using cplx = std::complex<double>;

struct DenseOps {
  const SectorHamiltonian* h;
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const { return h->apply(v); }
  static cplx inner(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return a.dot(b); }
  static double norm(const Eigen::VectorXcd& v) { return v.norm(); }
  static void axpy(Eigen::VectorXcd& y, cplx alpha, const Eigen::VectorXcd& x) { y += alpha * x; }
  static Eigen::VectorXcd scaled(const Eigen::VectorXcd& x, cplx alpha) { return alpha * x; }
  static Eigen::VectorXcd zero_like(const Eigen::VectorXcd& x) { return Eigen::VectorXcd::Zero(x.size()); }
  double norm_estimate() const { return h->norm_bound(); }
};

struct SparseOps {
  const ExchangeGraph* graph;
  SparseState apply(const SparseState& v) const { return apply_hamiltonian(*graph, v); }
  static cplx inner(const SparseState& a, const SparseState& b) { return a.inner(b); }
  static double norm(const SparseState& v) { return v.norm(); }
  static void axpy(SparseState& y, cplx alpha, const SparseState& x) { y += alpha * x; }
  static SparseState scaled(const SparseState& x, cplx alpha) { return alpha * x; }
  static SparseState zero_like(const SparseState& x) { return SparseState(x.site_count()); }
  // ||XX + YY|| = 2 per edge.
  double norm_estimate() const { return 2.0 * graph->l1_norm(); }
};

/// Restarted Lanczos propagation of w by exp(-i H t); each restart covers a
/// sub-step tau accepted when the a-posteriori error estimate
/// beta0 * beta_m * |e_m^T exp(-i tau T) e_1| is within tolerance * tau / |t|.
template <class Vec, class Ops>
Vec lanczos_propagate(const Ops& ops, Vec w, double t, const KrylovOptions& options, KrylovStats* stats) {
  if (!std::isfinite(t)) throw ValidationError("evolve: time must be finite");
  if (options.subspace_dim < 1) throw ValidationError("evolve: Krylov dimension must be >= 1");
  KrylovStats local;
  const double total = std::abs(t);
  const double direction = t < 0.0 ? -1.0 : 1.0;
  const double norm_est = ops.norm_estimate();
  const double breakdown = 1e-13 * std::max(norm_est, 1e-300);
  double done = 0.0;
  double tau_next = total;

  while (done < total) {
    if (local.substeps >= options.max_substeps) throw NumericalError("evolve: Krylov sub-step budget exhausted");
    const double beta0 = Ops::norm(w);
    if (beta0 == 0.0) break;

    std::vector<Vec> basis;
    std::vector<double> alpha;
    std::vector<double> beta;
    basis.push_back(Ops::scaled(w, cplx{1.0 / beta0, 0.0}));
    bool lucky = false;
    for (int j = 0; j < options.subspace_dim; ++j) {
      Vec u = ops.apply(basis[static_cast<std::size_t>(j)]);
      const double a = Ops::inner(basis[static_cast<std::size_t>(j)], u).real();
      alpha.push_back(a);
      // Full reorthogonalisation (covers the three-term recurrence as well).
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& v : basis) Ops::axpy(u, -Ops::inner(v, u), v);
      }
      const double b = Ops::norm(u);
      beta.push_back(b);
      if (b <= breakdown) {
        lucky = true;
        break;
      }
      if (j + 1 < options.subspace_dim) basis.push_back(Ops::scaled(u, cplx{1.0 / b, 0.0}));
    }

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      tri(i, i) = alpha[static_cast<std::size_t>(i)];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[static_cast<std::size_t>(i)];
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
    const Eigen::VectorXd& theta = solver.eigenvalues();
    const Eigen::MatrixXd& s = solver.eigenvectors();
    const double beta_m = lucky ? 0.0 : beta.back();

    double tau = std::min(tau_next, total - done);
    Eigen::VectorXcd y(m);
    double err = 0.0;
    for (;;) {
      Eigen::VectorXcd phase(m);
      for (Eigen::Index k = 0; k < m; ++k) phase(k) = std::exp(cplx(0.0, -direction * theta(k) * tau)) * s(0, k);
      y = s * phase;
      err = beta0 * beta_m * std::abs(y(m - 1));
      const double allowed = options.tolerance * (total > 0.0 ? tau / total : 1.0);
      if (err <= allowed || tau <= total * 1e-14) break;
      ++local.rejected;
      tau *= std::clamp(0.9 * std::pow(allowed / err, 1.0 / static_cast<double>(m)), 0.1, 0.5);
    }

    Vec next = Ops::zero_like(w);
    for (Eigen::Index i = 0; i < m; ++i) Ops::axpy(next, beta0 * y(i), basis[static_cast<std::size_t>(i)]);
    w = std::move(next);
    done = (total - done - tau <= total * 1e-15) ? total : done + tau;
    local.error_estimate += err;
    ++local.substeps;

    const double allowed = options.tolerance * (total > 0.0 ? tau / total : 1.0);
    const double growth = err > 0.0 ? std::pow(allowed / err, 1.0 / static_cast<double>(m)) : 2.0;
    tau_next = tau * std::clamp(0.9 * growth, 0.5, 2.0);
    if (lucky) tau_next = total;
  }
  if (stats != nullptr) *stats = local;
  return w;
}

}  // namespace

SpectralPropagator::SpectralPropagator(const SectorHamiltonian& hamiltonian)
    : SpectralPropagator(hamiltonian.dense()) {}

SpectralPropagator::SpectralPropagator(const Eigen::MatrixXd& dense_hamiltonian) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_hamiltonian);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
}

Eigen::VectorXcd SpectralPropagator::evolve(const Eigen::VectorXcd& psi, double t) const {
  if (psi.size() != eigenvalues_.size()) throw ValidationError("evolve: state dimension mismatch");
  if (!std::isfinite(t)) throw ValidationError("evolve: time must be finite");
  Eigen::VectorXcd coeff = eigenvectors_.transpose().cast<cplx>() * psi;
  for (Eigen::Index k = 0; k < coeff.size(); ++k) coeff(k) *= std::exp(cplx(0.0, -eigenvalues_(k) * t));
  return eigenvectors_.cast<cplx>() * coeff;
}

Eigen::MatrixXcd SpectralPropagator::unitary(double t) const {
  if (!std::isfinite(t)) throw ValidationError("unitary: time must be finite");
  Eigen::VectorXcd phases(eigenvalues_.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(cplx(0.0, -eigenvalues_(k) * t));
  const Eigen::MatrixXcd v = eigenvectors_.cast<cplx>();
  return v * phases.asDiagonal() * v.transpose();
}

cplx SpectralPropagator::element(std::size_t to, std::size_t from, double t) const {
  const auto r = static_cast<Eigen::Index>(to);
  const auto c = static_cast<Eigen::Index>(from);
  cplx acc{};
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) {
    acc += eigenvectors_(r, k) * eigenvectors_(c, k) * std::exp(cplx(0.0, -eigenvalues_(k) * t));
  }
  return acc;
}

Eigen::VectorXcd krylov_evolve(const SectorHamiltonian& hamiltonian, const Eigen::VectorXcd& psi, double t,
                               const KrylovOptions& options, KrylovStats* stats) {
  if (static_cast<std::size_t>(psi.size()) != hamiltonian.dim()) throw ValidationError("evolve: state dimension mismatch");
  return lanczos_propagate(DenseOps{&hamiltonian}, psi, t, options, stats);
}

SparseState evolve_sparse(const ExchangeGraph& graph, const SparseState& psi, double t, const KrylovOptions& options,
                          KrylovStats* stats) {
  if (graph.site_count() != psi.site_count()) throw ValidationError("evolve_sparse: site counts differ");
  return lanczos_propagate(SparseOps{&graph}, psi, t, options, stats);
}

SectorState evolve(const SectorHamiltonian& hamiltonian, const SectorState& psi, double t, EvolutionMethod method) {
  if (!std::isfinite(t)) throw ValidationError("evolve: time must be finite");
  if (static_cast<std::size_t>(psi.amplitudes.size()) != hamiltonian.dim()) {
    throw ValidationError("evolve: state dimension " + std::to_string(psi.amplitudes.size()) +
                          " does not match sector dimension " + std::to_string(hamiltonian.dim()));
  }
  if (method == EvolutionMethod::automatic) {
    method = hamiltonian.dim() <= kDenseCrossover ? EvolutionMethod::dense : EvolutionMethod::krylov;
  }
  if (t == 0.0) return psi;
  if (method == EvolutionMethod::dense) {
    return SectorState{psi.basis, SpectralPropagator(hamiltonian).evolve(psi.amplitudes, t)};
  }
  return SectorState{psi.basis, krylov_evolve(hamiltonian, psi.amplitudes, t)};
}

}  // namespace spinmirror
