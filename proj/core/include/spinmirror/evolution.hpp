#pragma once

// Time evolution exp(-i H t) inside one excitation sector.
//
// Small sectors (dim <= kDenseCrossover) use a full symmetric
// eigendecomposition. Larger ones use a restarted Lanczos approximation of
// the exponential action with adaptive sub-steps.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>

#include "spinmirror/sector.hpp"
#include "spinmirror/sparse_state.hpp"

namespace spinmirror {

inline constexpr std::size_t kDenseCrossover = 4096;

struct KrylovOptions {
  int subspace_dim = 30;
  /// Target 2-norm error of the whole propagation.
  double tolerance = 1e-10;
  int max_substeps = 100000;
};

struct KrylovStats {
  int substeps = 0;
  int rejected = 0;
  double error_estimate = 0.0;
};

enum class EvolutionMethod { automatic, dense, krylov };

/// Eigendecomposition H = V diag(lambda) V^T, reusable for many times.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const SectorHamiltonian& hamiltonian);
  explicit SpectralPropagator(const Eigen::MatrixXd& dense_hamiltonian);

  std::size_t dim() const { return static_cast<std::size_t>(eigenvalues_.size()); }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }

  Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi, double t) const;
  /// Full dim x dim unitary exp(-i H t).
  Eigen::MatrixXcd unitary(double t) const;
  /// <to| exp(-i H t) |from> on basis indices.
  std::complex<double> element(std::size_t to, std::size_t from, double t) const;

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
};

Eigen::VectorXcd krylov_evolve(const SectorHamiltonian& hamiltonian, const Eigen::VectorXcd& psi, double t,
                               const KrylovOptions& options = {}, KrylovStats* stats = nullptr);

/// Krylov propagation over sparse vectors; the support grows only to
/// hop-connected masks, so eigenstates and low-entanglement states stay cheap.
SparseState evolve_sparse(const ExchangeGraph& graph, const SparseState& psi, double t,
                          const KrylovOptions& options = {}, KrylovStats* stats = nullptr);

/// exp(-i H t) psi. Non-finite t is rejected.
SectorState evolve(const SectorHamiltonian& hamiltonian, const SectorState& psi, double t,
                   EvolutionMethod method = EvolutionMethod::automatic);

}  // namespace spinmirror
