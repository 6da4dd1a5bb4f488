#include "spinmirror/witness.hpp"

#include <cmath>
#include <cstdio>

#include "spinmirror/errors.hpp"
#include "spinmirror/serialization.hpp"

namespace spinmirror {

SparseState phi_pair(int sign) {
  if (sign != 1 && sign != -1) throw ValidationError("phi_pair: sign must be +1 or -1");
  const double r = 1.0 / std::sqrt(2.0);
  // |01>: left (bit 0) empty, right (bit 1) excited.
  return SparseState(2, {{0b10, Amplitude{r, 0.0}}, {0b01, Amplitude{sign * r, 0.0}}});
}

std::vector<MirrorPair> mirror_pairs(int n) {
  const auto geometry = Geometry::square(n);
  std::vector<MirrorPair> pairs;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) pairs.push_back({geometry.flat({i, j}), geometry.flat({j, i}), j - i});
  return pairs;
}

std::vector<std::size_t> diagonal_sites(int n) {
  const auto geometry = Geometry::square(n);
  std::vector<std::size_t> sites;
  for (int r = 1; r <= n; ++r) sites.push_back(geometry.flat({r, r}));
  return sites;
}

SparseState build_witness(const WitnessSpec& spec) {
  const auto geometry = Geometry::square(spec.n);
  if (spec.diagonal_state.site_count() != static_cast<std::size_t>(spec.n)) {
    throw ValidationError("build_witness: diagonal state must act on " + std::to_string(spec.n) + " sites");
  }
  if (std::abs(spec.diagonal_state.norm() - 1.0) > 1e-12) {
    throw ValidationError("build_witness: diagonal state is not normalised");
  }
  const auto sites = geometry.site_count();
  SparseState witness = spec.diagonal_state.embedded(sites, diagonal_sites(spec.n));
  for (const auto& pair : mirror_pairs(spec.n)) {
    const std::size_t positions[] = {pair.upper, pair.lower};
    witness = witness.tensor(phi_pair(WitnessSpec::pair_sign(pair.distance)).embedded(sites, positions));
  }
  return witness;
}

double verify_zero_energy(const ExchangeGraph& graph, const SparseState& witness) {
  const double norm = witness.norm();
  if (norm == 0.0) return 0.0;
  const double residual = apply_hamiltonian(graph, witness).norm();
  return residual / (norm * std::max(1.0, graph.l1_norm()));
}

double verify_odd_distance(const Geometry& geometry, const ExchangeGraph& graph, const SparseState& witness) {
  if (graph.site_count() != geometry.site_count()) throw ValidationError("verify_odd_distance: graph does not match geometry");
  for (const auto& e : graph.edges()) {
    const int d = manhattan_distance(geometry, e.a, e.b);
    if (d % 2 == 0) {
      const auto a = geometry.coord(e.a);
      const auto b = geometry.coord(e.b);
      throw ValidationError("verify_odd_distance: edge (" + std::to_string(a.row) + "," + std::to_string(a.col) +
                            ")-(" + std::to_string(b.row) + "," + std::to_string(b.col) + ") spans even distance " +
                            std::to_string(d));
    }
  }
  if (!check_symmetry(graph, SymmetryMap::make(SymmetryKind::main_diagonal, geometry))) {
    throw ValidationError("verify_odd_distance: graph is not main-diagonal symmetric");
  }
  return verify_zero_energy(graph, witness);
}

std::string_view to_string(Conclusion conclusion) {
  return conclusion == Conclusion::impossible ? "impossible" : "inconclusive";
}

Certificate impossibility_certificate(const CouplingPattern& pattern, const SparseState& diagonal_initial,
                                      const SymmetryMap& mirror) {
  const auto& geometry = pattern.geometry();
  if (!geometry.is_square()) throw ValidationError("impossibility_certificate: square lattice required");
  if (mirror.kind() != SymmetryKind::rotation_pi) {
    throw ValidationError("impossibility_certificate: mirror must be rotation_pi, got " + std::string(mirror.name()));
  }
  const int n = geometry.side();
  Certificate cert;
  cert.pattern_digest = pattern_digest(pattern);
  cert.n = n;
  cert.mirror = std::string(mirror.name());
  cert.main_diagonal_symmetric = check_symmetry(pattern, SymmetryMap::make(SymmetryKind::main_diagonal, geometry));
  cert.anti_diagonal_symmetric = check_symmetry(pattern, SymmetryMap::make(SymmetryKind::anti_diagonal, geometry));

  const auto witness = build_witness({n, diagonal_initial});
  const auto target = witness.permuted(mirror);
  cert.residual = verify_zero_energy(pattern.to_graph(), witness);
  // The witness is stationary, so sup_t |<target| U(t) |witness>| is this overlap.
  cert.initial_target_overlap = std::abs(target.inner(witness));

  if (!cert.main_diagonal_symmetric) {
    cert.reason = "pattern is not main-diagonal symmetric; witness hypothesis unmet";
  } else if (cert.residual > kWitnessResidualTolerance) {
    cert.reason = "witness residual above tolerance";
  } else if (cert.initial_target_overlap >= 1.0 - kWitnessOverlapMargin) {
    cert.reason = "diagonal state is reversal symmetric; witness coincides with its mirror image";
  } else {
    cert.conclusion = Conclusion::impossible;
    cert.reason = "stationary witness differs from its mirror image";
  }
  return cert;
}

std::string pattern_digest(const CouplingPattern& pattern) {
  const std::string canonical = to_json(pattern).dump();
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

}  // namespace spinmirror
