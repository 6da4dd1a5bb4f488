#include "spinmirror/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <set>

#include "spinmirror/errors.hpp"

namespace spinmirror {

namespace {

void require_keys(const json& doc, std::string_view what, std::initializer_list<std::string_view> required,
                  std::initializer_list<std::string_view> optional = {}) {
  if (!doc.is_object()) throw ValidationError(std::string(what) + ": expected a JSON object");
  std::set<std::string, std::less<>> allowed;
  for (auto k : required) {
    if (!doc.contains(std::string(k))) throw ValidationError(std::string(what) + ": missing key '" + std::string(k) + "'");
    allowed.emplace(k);
  }
  for (auto k : optional) allowed.emplace(k);
  for (const auto& [key, value] : doc.items()) {
    if (!allowed.contains(key)) throw ValidationError(std::string(what) + ": unknown key '" + key + "'");
  }
}

double number(const json& v, std::string_view what) {
  if (!v.is_number()) throw ValidationError(std::string(what) + ": expected a number");
  return v.get<double>();
}

int integer(const json& v, std::string_view what) {
  if (!v.is_number_integer()) throw ValidationError(std::string(what) + ": expected an integer");
  return v.get<int>();
}

std::vector<double> numbers(const json& v, std::string_view what) {
  if (!v.is_array()) throw ValidationError(std::string(what) + ": expected an array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, what));
  return out;
}

json matrix(std::span<const double> flat, int rows, int cols) {
  json m = json::array();
  for (int r = 0; r < rows; ++r) {
    json row = json::array();
    for (int c = 0; c < cols; ++c) row.push_back(flat[static_cast<std::size_t>(r * cols + c)]);
    m.push_back(std::move(row));
  }
  return m;
}

std::vector<double> flatten(const json& m, int rows, int cols, std::string_view what) {
  if (!m.is_array() || static_cast<int>(m.size()) != rows) {
    throw ValidationError(std::string(what) + ": expected " + std::to_string(rows) + " rows");
  }
  std::vector<double> out;
  for (const auto& row : m) {
    auto values = numbers(row, what);
    if (static_cast<int>(values.size()) != cols) {
      throw ValidationError(std::string(what) + ": expected rows of length " + std::to_string(cols));
    }
    out.insert(out.end(), values.begin(), values.end());
  }
  return out;
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

void csv_row(std::ostream& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out << ',';
    out << c;
    first = false;
  }
  out << '\n';
}

}  // namespace

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

json to_json(const CouplingPattern& pattern) {
  const auto& g = pattern.geometry();
  json doc;
  switch (g.kind()) {
    case GeometryKind::chain:
      doc["kind"] = "chain";
      doc["n"] = g.cols();
      doc["couplings"] = std::vector<double>(pattern.horizontal().begin(), pattern.horizontal().end());
      return doc;
    case GeometryKind::square:
      doc["kind"] = "square";
      doc["n"] = g.rows();
      break;
    case GeometryKind::rectangular:
      doc["kind"] = "rectangular";
      doc["rows"] = g.rows();
      doc["cols"] = g.cols();
      break;
  }
  doc["J"] = matrix(pattern.vertical(), g.rows() - 1, g.cols());
  doc["K"] = matrix(pattern.horizontal(), g.rows(), g.cols() - 1);
  return doc;
}

CouplingPattern pattern_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw ValidationError("pattern: missing string key 'kind'");
  }
  const auto kind = doc["kind"].get<std::string>();
  if (kind == "chain") {
    require_keys(doc, "pattern", {"kind", "n", "couplings"});
    const int n = integer(doc["n"], "pattern.n");
    auto couplings = numbers(doc["couplings"], "pattern.couplings");
    if (static_cast<int>(couplings.size()) != n - 1) throw ValidationError("pattern: chain needs n-1 couplings");
    return CouplingPattern::chain(couplings);
  }
  Geometry geometry = Geometry::chain(2);
  if (kind == "square") {
    require_keys(doc, "pattern", {"kind", "n", "J", "K"});
    geometry = Geometry::square(integer(doc["n"], "pattern.n"));
  } else if (kind == "rectangular") {
    require_keys(doc, "pattern", {"kind", "rows", "cols", "J", "K"});
    geometry = Geometry::rectangular(integer(doc["rows"], "pattern.rows"), integer(doc["cols"], "pattern.cols"));
  } else {
    throw ValidationError("pattern: unknown kind '" + kind + "'");
  }
  return CouplingPattern(geometry, flatten(doc["J"], geometry.rows() - 1, geometry.cols(), "pattern.J"),
                         flatten(doc["K"], geometry.rows(), geometry.cols() - 1, "pattern.K"));
}

json to_json(const ExchangeGraph& graph) {
  json edges = json::array();
  for (const auto& e : graph.edges()) edges.push_back(json::array({e.a, e.b, e.strength}));
  return json{{"sites", graph.site_count()}, {"edges", std::move(edges)}};
}

ExchangeGraph graph_from_json(const json& doc) {
  require_keys(doc, "graph", {"sites", "edges"});
  const int sites = integer(doc["sites"], "graph.sites");
  if (sites < 1) throw ValidationError("graph: sites must be positive");
  if (!doc["edges"].is_array()) throw ValidationError("graph.edges: expected an array");
  std::vector<Edge> edges;
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 3) throw ValidationError("graph.edges: each edge is [a, b, w]");
    const int a = integer(e[0], "graph edge endpoint");
    const int b = integer(e[1], "graph edge endpoint");
    if (a < 0 || b < 0) throw ValidationError("graph.edges: negative site index");
    edges.push_back({static_cast<std::size_t>(a), static_cast<std::size_t>(b), number(e[2], "graph edge strength")});
  }
  return ExchangeGraph(static_cast<std::size_t>(sites), std::move(edges));
}

json to_json(const ChainCouplings& chain) {
  json doc{{"n", chain.n}, {"couplings", chain.couplings}};
  doc["transfer_time"] = chain.transfer_time ? json(*chain.transfer_time) : json(nullptr);
  return doc;
}

ChainCouplings chain_from_json(const json& doc) {
  require_keys(doc, "chain", {"n", "couplings"}, {"transfer_time"});
  ChainCouplings chain;
  chain.n = integer(doc["n"], "chain.n");
  chain.couplings = numbers(doc["couplings"], "chain.couplings");
  if (chain.n < 2 || static_cast<int>(chain.couplings.size()) != chain.n - 1) {
    throw ValidationError("chain: needs n >= 2 and n-1 couplings");
  }
  if (doc.contains("transfer_time") && !doc["transfer_time"].is_null()) {
    chain.transfer_time = number(doc["transfer_time"], "chain.transfer_time");
  }
  return chain;
}

json to_json(const SparseState& state) {
  json out = json::array();
  for (const auto& [mask, amp] : state.terms()) out.push_back(json::array({mask, amp.real(), amp.imag()}));
  return out;
}

SparseState state_from_json(const json& doc, std::size_t site_count) {
  if (!doc.is_array()) throw ValidationError("state: expected an array of [mask, re, im]");
  std::vector<SparseState::Term> terms;
  for (const auto& t : doc) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number_unsigned()) {
      throw ValidationError("state: each term is [mask, re, im] with a non-negative integer mask");
    }
    const auto mask = t[0].get<std::uint64_t>();
    if (site_count < 64 && (mask >> site_count) != 0) throw ValidationError("state: mask exceeds the site count");
    terms.emplace_back(mask, Amplitude{number(t[1], "state re"), number(t[2], "state im")});
  }
  return SparseState(site_count, std::move(terms));
}

json to_json(const Certificate& c) {
  return json{{"schema", kCertificateSchema},
              {"tool_version", kToolVersion},
              {"pattern_digest", c.pattern_digest},
              {"n", c.n},
              {"mirror", c.mirror},
              {"residual", c.residual},
              {"initial_target_overlap", c.initial_target_overlap},
              {"conclusion", to_string(c.conclusion)},
              {"main_diagonal_symmetric", c.main_diagonal_symmetric},
              {"anti_diagonal_symmetric", c.anti_diagonal_symmetric},
              {"reason", c.reason}};
}

json to_json(const MirroringReport& r) {
  return json{{"schema", kMirroringSchema},       {"excitations", r.excitations}, {"symmetry", r.symmetry},
              {"time", r.time},                   {"dim", r.targets.size()},      {"min_modulus", r.min_modulus},
              {"max_offtarget", r.max_offtarget}};
}

json to_json(const PhaseFit& fit) {
  json sectors = json::array();
  for (const auto& s : fit.sectors) {
    sectors.push_back({{"excitations", s.excitations}, {"phase", complex_json(s.phase)}, {"residual", s.residual}});
  }
  return json{{"sectors", std::move(sectors)},
              {"excitation_phase", complex_json(fit.excitation_phase)},
              {"pair_sign", fit.pair_sign},
              {"pair_sign_determined", fit.pair_sign_determined},
              {"residual", fit.residual},
              {"fits", fit.fits}};
}

std::string symmetry_label_json(SymmetryLabel label) { return std::string(to_string(label)); }

json to_json(const SpectrumClassification& s) {
  json groups = json::array();
  for (const auto& g : s.groups) {
    json labels = json::array();
    for (std::size_t i = g.first; i < g.last; ++i) labels.push_back(symmetry_label_json(s.entries[i].label));
    groups.push_back({{"eigenvalue", g.eigenvalue},
                      {"size", g.last - g.first},
                      {"labels", std::move(labels)},
                      {"opposite_symmetry_pair", g.opposite_symmetry_pair()}});
  }
  return json{{"schema", kSpectrumSchema},
              {"dim", s.entries.size()},
              {"degeneracy_tol", s.degeneracy_tol},
              {"opposite_symmetry_groups", s.opposite_symmetry_groups()},
              {"groups", std::move(groups)}};
}

json to_json(const OptimizationRun& run) {
  json group = json::array();
  for (const auto& g : run.config.constraint_group) group.push_back(std::string(g.name()));
  json config{{"constraint_generators", std::move(group)},
              {"method", run.config.method == OptimizerMethod::coordinate_descent ? "coordinate_descent" : "nelder_mead"},
              {"seed", run.config.seed},
              {"max_iters", run.config.max_iters},
              {"restarts", run.config.restarts},
              {"restart_spread", run.config.restart_spread},
              {"lower_bound", run.config.lower_bound},
              {"upper_bound", run.config.upper_bound},
              {"line_search_evals", run.config.line_search_evals},
              {"initial", to_json(run.config.initial)}};
  return json{{"schema", kOptimizationSchema},
              {"tool_version", kToolVersion},
              {"config", std::move(config)},
              {"best_value", run.best_value},
              {"best_time", run.best_time},
              {"best_pattern", to_json(run.best_pattern)},
              {"restart_best", run.restart_best},
              {"evaluations", run.evaluations},
              {"status", "evidence"}};
}

json to_json(const ProbeReport& r) {
  return json{{"schema", kProbeSchema},
              {"tool_version", kToolVersion},
              {"ratio_points", r.config.ratio_points},
              {"time_points", r.config.time_points},
              {"ratio_lo", r.config.ratio_lo},
              {"ratio_hi", r.config.ratio_hi},
              {"best_value", r.best_value},
              {"best_ratio", r.best_ratio},
              {"best_time", r.best_time},
              {"sector_values_at_best", r.sector_values_at_best},
              {"status", "evidence"}};
}

void write_mirroring_csv(std::ostream& out, const MirroringReport& r) {
  out << "# schema=" << kMirroringSchema << '\n';
  out << "index,mask,target_mask,re,im,modulus,phase_re,phase_im\n";
  for (std::size_t x = 0; x < r.targets.size(); ++x) {
    const auto a = r.amplitudes[x];
    csv_row(out, {std::to_string(x), std::to_string(r.basis->unrank(x)), std::to_string(r.basis->unrank(r.targets[x])),
                  format_double(a.real()), format_double(a.imag()), format_double(std::abs(a)),
                  format_double(r.phases[x].real()), format_double(r.phases[x].imag())});
  }
}

void write_spectrum_csv(std::ostream& out, const SpectrumClassification& s) {
  out << "# schema=" << kSpectrumSchema << '\n';
  out << "index,eigenvalue,label,parity,group,group_size,opposite_pair\n";
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    const auto& e = s.entries[i];
    const auto& g = s.groups[e.group];
    csv_row(out, {std::to_string(i), format_double(e.eigenvalue), symmetry_label_json(e.label),
                  format_double(e.parity), std::to_string(e.group), std::to_string(g.last - g.first),
                  g.opposite_symmetry_pair() ? "1" : "0"});
  }
}

void write_trace_csv(std::ostream& out, const OptimizationRun& run) {
  out << "# schema=" << kTraceSchema << '\n';
  out << "restart,iteration,value,best,time";
  const std::size_t params = run.trace.empty() ? 0 : run.trace.front().parameters.size();
  for (std::size_t p = 0; p < params; ++p) out << ",p" << p;
  out << '\n';
  for (const auto& row : run.trace) {
    out << row.restart << ',' << row.iteration << ',' << format_double(row.value) << ',' << format_double(row.best)
        << ',' << format_double(row.time);
    for (double v : row.parameters) out << ',' << format_double(v);
    out << '\n';
  }
}

void write_probe_csv(std::ostream& out, const ProbeReport& r) {
  out << "# schema=" << kProbeSchema << '\n';
  out << "ratio,value,time\n";
  for (const auto& row : r.rows) csv_row(out, {format_double(row.ratio), format_double(row.value), format_double(row.time)});
}

void write_fidelity_csv(std::ostream& out, std::span<const double> times, std::span<const std::string> names,
                        std::span<const std::vector<double>> series) {
  if (names.size() != series.size()) throw ValidationError("write_fidelity_csv: names and series differ in length");
  for (const auto& s : series) {
    if (s.size() != times.size()) throw ValidationError("write_fidelity_csv: series length differs from time grid");
  }
  out << "# schema=" << kFidelitySchema << '\n';
  out << "time";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    out << format_double(times[i]);
    for (const auto& s : series) out << ',' << format_double(s[i]);
    out << '\n';
  }
}

}  // namespace spinmirror
