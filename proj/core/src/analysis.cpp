#include "spinmirror/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "spinmirror/errors.hpp"

namespace spinmirror {

using cplx = std::complex<double>;

TransferAmplitude::TransferAmplitude(const CouplingPattern& pattern, Coord source, Coord target) {
  const auto& geometry = pattern.geometry();
  const auto from = geometry.flat(source);
  const auto to = geometry.flat(target);
  const auto basis = make_basis(static_cast<int>(geometry.site_count()), 1);
  const SpectralPropagator propagator(build_sector_hamiltonian(pattern.to_graph(), basis));
  eigenvalues_ = propagator.eigenvalues();
  const auto r = static_cast<Eigen::Index>(basis->rank(std::uint64_t{1} << to));
  const auto c = static_cast<Eigen::Index>(basis->rank(std::uint64_t{1} << from));
  weights_ = propagator.eigenvectors().row(r).transpose().cwiseProduct(propagator.eigenvectors().row(c).transpose());
}

cplx TransferAmplitude::amplitude(double t) const {
  cplx acc{};
  for (Eigen::Index k = 0; k < eigenvalues_.size(); ++k) acc += weights_(k) * std::exp(cplx(0.0, -eigenvalues_(k) * t));
  return acc;
}

double transfer_fidelity(const CouplingPattern& pattern, Coord source, Coord target, double t) {
  if (!std::isfinite(t)) throw ValidationError("transfer_fidelity: time must be finite");
  const auto& geometry = pattern.geometry();
  if (t == 0.0) return geometry.flat(source) == geometry.flat(target) ? 1.0 : 0.0;
  return TransferAmplitude(pattern, source, target).fidelity(t);
}

std::vector<std::size_t> basis_permutation(const SectorBasis& basis, const SymmetryMap& sym) {
  if (sym.site_count() != static_cast<std::size_t>(basis.site_count())) {
    throw ValidationError("symmetry acts on " + std::to_string(sym.site_count()) + " sites, basis has " +
                          std::to_string(basis.site_count()));
  }
  std::vector<std::size_t> out(basis.dim());
  for (std::size_t x = 0; x < basis.dim(); ++x) out[x] = basis.rank(sym.apply_to_mask(basis.unrank(x)));
  return out;
}

MirroringReport mirroring_report(const SpectralPropagator& propagator, const BasisPtr& basis, const SymmetryMap& sym,
                                 double t) {
  if (propagator.dim() != basis->dim()) throw ValidationError("mirroring_report: propagator and basis differ");
  MirroringReport report;
  report.excitations = basis->excitations();
  report.symmetry = std::string(sym.name());
  report.time = t;
  report.basis = basis;
  report.targets = basis_permutation(*basis, sym);

  const auto n = static_cast<Eigen::Index>(basis->dim());
  // exp(-i H 0) is the identity exactly; avoid V V^T rounding.
  const Eigen::MatrixXcd u = t == 0.0 ? Eigen::MatrixXcd::Identity(n, n) : propagator.unitary(t);

  report.min_modulus = n > 0 ? 1.0 : 0.0;
  report.amplitudes.resize(basis->dim());
  report.phases.resize(basis->dim());
  for (Eigen::Index x = 0; x < n; ++x) {
    const auto target = static_cast<Eigen::Index>(report.targets[static_cast<std::size_t>(x)]);
    const cplx amp = u(target, x);
    const double modulus = std::abs(amp);
    report.amplitudes[static_cast<std::size_t>(x)] = amp;
    report.phases[static_cast<std::size_t>(x)] = modulus > 0.0 ? amp / modulus : cplx{1.0, 0.0};
    report.min_modulus = std::min(report.min_modulus, modulus);
    for (Eigen::Index y = 0; y < n; ++y) {
      if (y != target) report.max_offtarget = std::max(report.max_offtarget, std::abs(u(y, x)));
    }
  }
  return report;
}

MirroringReport mirroring_report(const CouplingPattern& pattern, int excitations, const SymmetryMap& sym, double t) {
  if (!std::isfinite(t)) throw ValidationError("mirroring_report: time must be finite");
  const auto basis = make_basis(static_cast<int>(pattern.geometry().site_count()), excitations);
  const SpectralPropagator propagator(build_sector_hamiltonian(pattern.to_graph(), basis));
  return mirroring_report(propagator, basis, sym, t);
}

namespace {

cplx unit(cplx z) {
  const double m = std::abs(z);
  return m > 0.0 ? z / m : cplx{1.0, 0.0};
}

double max_deviation(const MirroringReport& r, cplx model) {
  double worst = 0.0;
  for (const auto& p : r.phases) worst = std::max(worst, std::abs(p - model));
  return worst;
}

cplx mean_phase(const MirroringReport& r) {
  cplx sum{};
  for (const auto& p : r.phases) sum += p;
  return unit(sum);
}

long pair_count(int k) { return static_cast<long>(k) * (k - 1) / 2; }

}  // namespace

PhaseFit phase_network_fit(std::span<const MirroringReport> reports, double tol) {
  PhaseFit fit;
  const MirroringReport* single = nullptr;
  for (const auto& r : reports) {
    if (r.excitations == 1) single = &r;
  }

  if (single == nullptr || reports.size() == 1) {
    // Per-sector constants only.
    for (const auto& r : reports) {
      PhaseFit::Sector s{r.excitations, r.excitations == 0 ? cplx{1.0, 0.0} : mean_phase(r), 0.0};
      s.residual = max_deviation(r, s.phase);
      fit.residual = std::max(fit.residual, s.residual);
      fit.sectors.push_back(s);
    }
    if (single != nullptr) fit.excitation_phase = fit.sectors.front().phase;
    fit.fits = fit.residual <= tol;
    return fit;
  }

  fit.excitation_phase = mean_phase(*single);
  double best_residual = 0.0;
  for (int sign : {1, -1}) {
    PhaseFit candidate;
    candidate.pair_sign = sign;
    for (const auto& r : reports) {
      cplx model = std::pow(fit.excitation_phase, r.excitations);
      if (pair_count(r.excitations) % 2 == 1) model *= static_cast<double>(sign);
      PhaseFit::Sector s{r.excitations, model, max_deviation(r, model)};
      candidate.residual = std::max(candidate.residual, s.residual);
      candidate.sectors.push_back(s);
    }
    if (sign == 1 || candidate.residual < best_residual) {
      best_residual = candidate.residual;
      fit.sectors = candidate.sectors;
      fit.pair_sign = sign;
      fit.residual = candidate.residual;
    }
  }
  fit.pair_sign_determined = std::any_of(reports.begin(), reports.end(),
                                         [](const MirroringReport& r) { return pair_count(r.excitations) % 2 == 1; });
  if (!fit.pair_sign_determined) fit.pair_sign = 1;
  fit.fits = fit.residual <= tol;
  return fit;
}

PhaseFit phase_network_fit(const MirroringReport& report, double tol) {
  return phase_network_fit(std::span<const MirroringReport>(&report, 1), tol);
}

std::string_view to_string(SymmetryLabel label) {
  switch (label) {
    case SymmetryLabel::even:
      return "+1";
    case SymmetryLabel::odd:
      return "-1";
    case SymmetryLabel::mixed:
      return "mixed";
  }
  return "mixed";
}

std::size_t SpectrumClassification::opposite_symmetry_groups() const {
  return static_cast<std::size_t>(
      std::count_if(groups.begin(), groups.end(), [](const SpectrumGroup& g) { return g.opposite_symmetry_pair(); }));
}

SpectrumClassification classify_spectrum(const SectorHamiltonian& hamiltonian, const SymmetryMap& sym,
                                         std::optional<double> degeneracy_tol) {
  const auto& basis = hamiltonian.basis();
  const auto perm = basis_permutation(basis, sym);

  // P H P^T = H, entry by entry.
  const auto entries = hamiltonian.entries();
  auto lookup = [&](std::size_t r, std::size_t c) {
    if (r > c) std::swap(r, c);
    auto it = std::lower_bound(entries.begin(), entries.end(), std::pair(r, c), [](const MatrixEntry& e, const auto& key) {
      return std::pair(e.row, e.col) < key;
    });
    return (it != entries.end() && it->row == r && it->col == c) ? it->value : 0.0;
  };
  for (const auto& e : entries) {
    if (std::abs(lookup(perm[e.row], perm[e.col]) - e.value) > 1e-12 * std::max(1.0, std::abs(e.value))) {
      throw ValidationError("classify_spectrum: symmetry '" + std::string(sym.name()) +
                            "' does not commute with the Hamiltonian");
    }
  }

  const SpectralPropagator propagator(hamiltonian);
  const Eigen::VectorXd& lambda = propagator.eigenvalues();
  const Eigen::MatrixXd& v = propagator.eigenvectors();
  const auto n = lambda.size();

  SpectrumClassification out;
  const double range = n > 0 ? lambda(n - 1) - lambda(0) : 0.0;
  out.degeneracy_tol = degeneracy_tol.value_or(1e-8 * range);
  out.eigenvectors = Eigen::MatrixXd::Zero(n, n);

  const Eigen::MatrixXd dense = hamiltonian.dense();
  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index stop = start + 1;
    while (stop < n && lambda(stop) - lambda(stop - 1) <= out.degeneracy_tol) ++stop;
    const Eigen::Index width = stop - start;
    const Eigen::MatrixXd block = v.middleCols(start, width);

    Eigen::MatrixXd permuted(n, width);
    for (Eigen::Index x = 0; x < n; ++x) permuted.row(static_cast<Eigen::Index>(perm[static_cast<std::size_t>(x)])) = block.row(x);
    Eigen::MatrixXd p_block = block.transpose() * permuted;
    p_block = 0.5 * (p_block + p_block.transpose()).eval();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> parity(p_block);
    const Eigen::MatrixXd rotated = block * parity.eigenvectors();

    SpectrumGroup group;
    group.first = static_cast<std::size_t>(start);
    group.last = static_cast<std::size_t>(stop);
    for (Eigen::Index c = 0; c < width; ++c) {
      const Eigen::VectorXd vec = rotated.col(c);
      SpectrumEntry entry;
      entry.eigenvalue = vec.dot(dense * vec);
      entry.parity = parity.eigenvalues()(c);
      if (std::abs(entry.parity - 1.0) < 1e-6) {
        entry.label = SymmetryLabel::even;
        group.has_even = true;
      } else if (std::abs(entry.parity + 1.0) < 1e-6) {
        entry.label = SymmetryLabel::odd;
        group.has_odd = true;
      } else {
        entry.label = SymmetryLabel::mixed;
      }
      entry.group = out.groups.size();
      out.eigenvectors.col(start + c) = vec;
      out.entries.push_back(entry);
    }
    group.eigenvalue = lambda.segment(start, width).mean();
    out.groups.push_back(group);
    start = stop;
  }
  return out;
}

}  // namespace spinmirror
