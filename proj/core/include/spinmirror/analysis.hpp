#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spinmirror/evolution.hpp"
#include "spinmirror/lattice.hpp"
#include "spinmirror/sector.hpp"
#include "spinmirror/symmetry.hpp"

namespace spinmirror {

/// |<target| exp(-i H t) |source>| in the single-excitation sector.
double transfer_fidelity(const CouplingPattern& pattern, Coord source, Coord target, double t);

/// Single-excitation amplitude between two fixed sites, diagonalised once so
/// that dense time grids are cheap.
class TransferAmplitude {
 public:
  TransferAmplitude(const CouplingPattern& pattern, Coord source, Coord target);
  std::complex<double> amplitude(double t) const;
  double fidelity(double t) const { return std::abs(amplitude(t)); }

 private:
  Eigen::VectorXd eigenvalues_;
  Eigen::VectorXd weights_;  // V(target, k) * V(source, k)
};

struct MirroringReport {
  int excitations = 0;
  std::string symmetry;
  double time = 0.0;
  BasisPtr basis;
  /// targets[x] = rank of perm(basis state x).
  std::vector<std::size_t> targets;
  /// U_{perm(x), x}.
  std::vector<std::complex<double>> amplitudes;
  /// amplitudes / |amplitudes| (1 where the amplitude vanishes).
  std::vector<std::complex<double>> phases;
  double min_modulus = 0.0;
  double max_offtarget = 0.0;

  bool perfect(double tol) const { return min_modulus >= 1.0 - tol; }
};

/// Index of perm(x) in the same sector basis, for every basis state x.
std::vector<std::size_t> basis_permutation(const SectorBasis& basis, const SymmetryMap& sym);

MirroringReport mirroring_report(const CouplingPattern& pattern, int excitations, const SymmetryMap& sym, double t);
MirroringReport mirroring_report(const SpectralPropagator& propagator, const BasisPtr& basis, const SymmetryMap& sym,
                                 double t);

inline constexpr double kPhaseFitTolerance = 1e-8;

/// Fit of mirroring phases to the fermionic controlled-phase network:
///   phase(x) = g_k * s^{C(k,2)},  g_k = g_1^k,  s in {+1, -1}
/// across all supplied sectors. With a single sector only the constant g_k
/// is fitted (the pair sign is then undetermined and reported as +1).
struct PhaseFit {
  struct Sector {
    int excitations = 0;
    std::complex<double> phase;  // fitted g_k * s^{C(k,2)}
    double residual = 0.0;       // max |phase(x) - fitted| within the sector
  };
  std::vector<Sector> sectors;
  std::complex<double> excitation_phase{1.0, 0.0};
  int pair_sign = 1;
  bool pair_sign_determined = false;
  double residual = 0.0;
  bool fits = false;
};

PhaseFit phase_network_fit(std::span<const MirroringReport> reports, double tol = kPhaseFitTolerance);
PhaseFit phase_network_fit(const MirroringReport& report, double tol = kPhaseFitTolerance);

enum class SymmetryLabel { even, odd, mixed };

std::string_view to_string(SymmetryLabel label);

struct SpectrumEntry {
  double eigenvalue = 0.0;
  SymmetryLabel label = SymmetryLabel::mixed;
  /// <v| P |v>, +1 or -1 for a genuine label.
  double parity = 0.0;
  std::size_t group = 0;
};

struct SpectrumGroup {
  std::size_t first = 0;  // entry indices [first, last)
  std::size_t last = 0;
  double eigenvalue = 0.0;
  bool has_even = false;
  bool has_odd = false;
  bool opposite_symmetry_pair() const { return has_even && has_odd; }
};

struct SpectrumClassification {
  std::vector<SpectrumEntry> entries;
  std::vector<SpectrumGroup> groups;
  /// Column i is the simultaneous eigenvector of entries[i].
  Eigen::MatrixXd eigenvectors;
  double degeneracy_tol = 0.0;

  std::size_t opposite_symmetry_groups() const;
};

/// Default 1e-8 * (spectral range). Throws ValidationError when the basis
/// permutation induced by `sym` does not commute with H.
SpectrumClassification classify_spectrum(const SectorHamiltonian& hamiltonian, const SymmetryMap& sym,
                                         std::optional<double> degeneracy_tol = std::nullopt);

}  // namespace spinmirror
