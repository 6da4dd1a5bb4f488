#include "spinmirror/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "spinmirror/analysis.hpp"
#include "spinmirror/errors.hpp"
#include "spinmirror/optimizer.hpp"
#include "spinmirror/pst.hpp"
#include "spinmirror/serialization.hpp"
#include "spinmirror/symmetry.hpp"
#include "spinmirror/witness.hpp"

namespace spinmirror::cli {
namespace {

namespace fs = std::filesystem;

constexpr std::string_view kCertificateBatchSchema = "spinmirror.certificate-batch/1";
constexpr std::string_view kOddDistanceSchema = "spinmirror.odd-distance/1";
constexpr std::string_view kMetaSchema = "spinmirror.meta/1";

// Flat JSON object -> CLI11 config items. Keys are long option names of
// the invoked subcommand without the leading dashes; arrays feed
// multi-value options.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* root) : root_(root) {}

  std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
    json doc = json::object();
    for (const CLI::Option* opt : app->get_options()) {
      if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
      const auto& name = opt->get_lnames().front();
      if (name == "help" || name == "config") continue;
      std::vector<std::string> values = opt->results();
      if (values.empty() && default_also && !opt->get_default_str().empty()) values = {opt->get_default_str()};
      if (values.empty()) continue;
      if (values.size() == 1) {
        doc[name] = values.front();
      } else {
        doc[name] = values;
      }
    }
    return doc.dump(2) + "\n";
  }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json doc;
    try {
      doc = json::parse(input);
    } catch (const json::exception& e) {
      throw CLI::ConversionError("config file is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object()) throw CLI::ConversionError("config file must hold a JSON object");
    std::vector<std::string> parents;
    if (!root_->get_subcommands().empty()) parents.push_back(root_->get_subcommands().front()->get_name());
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& v : value) item.inputs.push_back(scalar(key, v));
      } else {
        item.inputs.push_back(scalar(key, value));
      }
      items.push_back(std::move(item));
    }
    return items;
  }

 private:
  const CLI::App* root_;

  static std::string scalar(const std::string& key, const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config key '" + key + "' must be a string, number, boolean or array of those");
  }
};

struct PatternOptions {
  std::string source;
  int n = 0;
  int rows = 0;
  int cols = 0;
  double scale = 1.0;
  std::uint64_t seed = 0;
  double lo = 0.5;
  double hi = 1.5;
  std::string file;
};

struct BuiltPattern {
  CouplingPattern pattern;
  std::optional<double> natural_time;
  std::string source;
};

const std::vector<std::string> kPatternSources = {"christandl-product",   "christandl-chain", "uniform-chain",
                                                  "uniform-lattice",      "parallel-chains",  "random-rx",
                                                  "random-main-diagonal", "random-rotation",  "file"};

void add_pattern_options(CLI::App* cmd, PatternOptions& p, const std::string& default_source) {
  p.source = default_source;
  cmd->add_option("--pattern", p.source, "Coupling pattern source")
      ->check(CLI::IsMember(kPatternSources))
      ->capture_default_str();
  cmd->add_option("--n", p.n, "Lattice side, chain length, or parallel-chain length");
  cmd->add_option("--rows", p.rows, "Rows (rectangular lattices, or number of parallel chains)");
  cmd->add_option("--cols", p.cols, "Columns (rectangular lattices)");
  cmd->add_option("--scale", p.scale, "Coupling scale")->capture_default_str();
  cmd->add_option("--seed", p.seed, "Seed for random patterns")->capture_default_str();
  cmd->add_option("--lo", p.lo, "Lower bound for random couplings")->capture_default_str();
  cmd->add_option("--hi", p.hi, "Upper bound for random couplings")->capture_default_str();
  cmd->add_option("--pattern-file", p.file, "Pattern JSON (with --pattern file)");
}

int require_n(const PatternOptions& p) {
  if (p.n <= 0) throw ValidationError("--pattern " + p.source + " needs --n >= 1");
  return p.n;
}

Geometry lattice_geometry(const PatternOptions& p) {
  if (p.rows > 0 || p.cols > 0) {
    if (p.rows <= 0 || p.cols <= 0) throw ValidationError("--rows and --cols must be given together");
    return Geometry::rectangular(p.rows, p.cols);
  }
  return Geometry::square(require_n(p));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

BuiltPattern build_pattern(const PatternOptions& p, std::uint64_t seed) {
  const auto& s = p.source;
  if (s == "christandl-product") {
    const auto c = christandl_chain(require_n(p), p.scale);
    return {product_lattice_couplings(c, c), c.transfer_time, s};
  }
  if (s == "christandl-chain") {
    const auto c = christandl_chain(require_n(p), p.scale);
    return {chain_pattern(c), c.transfer_time, s};
  }
  if (s == "uniform-chain") {
    const auto c = uniform_chain(require_n(p), p.scale);
    return {chain_pattern(c), c.transfer_time, s};
  }
  if (s == "uniform-lattice") return {CouplingPattern::uniform(lattice_geometry(p), p.scale), std::nullopt, s};
  if (s == "parallel-chains") {
    const auto c = christandl_chain(require_n(p), p.scale);
    return {parallel_chain_pattern(c, p.rows > 0 ? p.rows : 2), c.transfer_time, s};
  }
  if (s == "random-rx" || s == "random-main-diagonal" || s == "random-rotation") {
    const Geometry g = s == "random-rotation" ? lattice_geometry(p) : Geometry::square(require_n(p));
    std::vector<SymmetryMap> gens;
    if (s == "random-rx") {
      gens = rx_generators(g);
    } else if (s == "random-main-diagonal") {
      gens.push_back(SymmetryMap::make(SymmetryKind::main_diagonal, g));
    } else {
      gens.push_back(SymmetryMap::make(SymmetryKind::rotation_pi, g));
    }
    return {random_symmetric_pattern(g, gens, seed, p.lo, p.hi), std::nullopt, s};
  }
  if (p.file.empty()) throw ValidationError("--pattern file needs --pattern-file");
  return {pattern_from_json(read_json(p.file)), std::nullopt, "file:" + p.file};
}

struct Output {
  std::string dir = ".";

  fs::path path(const std::string& name) const { return fs::path(dir) / name; }

  void prepare() const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory '" + dir + "': " + ec.message());
  }

  void write_text(const std::string& name, const std::string& text) const {
    std::ofstream f(path(name), std::ios::binary | std::ios::trunc);
    if (!f) throw ValidationError("cannot write '" + path(name).string() + "'");
    f << text;
  }

  void write_json(const std::string& name, const json& doc) const { write_text(name, doc.dump(2) + "\n"); }

  template <typename Fn>
  void write_csv(const std::string& name, Fn&& fn) const {
    std::ostringstream s;
    fn(s);
    write_text(name, s.str());
  }
};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_meta(const Output& o, const std::string& command, const std::vector<std::string>& args,
                const std::vector<std::string>& files) {
  o.write_json("meta.json", json{{"schema", kMetaSchema},
                                 {"tool_version", kToolVersion},
                                 {"command", command},
                                 {"arguments", args},
                                 {"files", files},
                                 {"timestamp", utc_timestamp()}});
}

double golden_max(const std::function<double(double)>& f, double a, double b, double& best_x, int evals = 100) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a);
  double x2 = a + r * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  double best = std::max(f1, f2);
  best_x = f1 >= f2 ? x1 : x2;
  for (int i = 0; i < evals; ++i) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = f(x1);
      if (f1 > best) best = f1, best_x = x1;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = f(x2);
      if (f2 > best) best = f2, best_x = x2;
    }
  }
  return best;
}

// ---------------------------------------------------------------- chain

struct ChainArgs {
  int n = 0;
  bool uniform = false;
  bool christandl = false;
  double scale = 1.0;
  std::optional<double> t_max;
  int steps = 4001;
};

json run_chain(const ChainArgs& a, const Output& o, std::vector<std::string>& files) {
  if (a.n < 2) throw ValidationError("chain: --n must be >= 2, got " + std::to_string(a.n));
  if (a.steps < 2) throw ValidationError("chain: --steps must be >= 2");
  const bool both = !a.uniform && !a.christandl;
  std::vector<std::pair<std::string, ChainCouplings>> chains;
  if (a.uniform || both) chains.emplace_back("uniform", uniform_chain(a.n, a.scale));
  if (a.christandl || both) chains.emplace_back("christandl", christandl_chain(a.n, a.scale));

  const double t_max = a.t_max.value_or(4.0 * std::numbers::pi / a.scale);
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ValidationError("chain: --t-max must be positive");
  std::vector<double> times(static_cast<std::size_t>(a.steps));
  for (int i = 0; i < a.steps; ++i) times[static_cast<std::size_t>(i)] = t_max * i / (a.steps - 1);

  std::vector<std::string> names;
  std::vector<std::vector<double>> series;
  json summary = json::object();
  for (const auto& [name, chain] : chains) {
    const auto pattern = chain_pattern(chain);
    const TransferAmplitude amp(pattern, Coord{1, 1}, Coord{1, a.n});
    std::vector<double> f(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) f[i] = amp.fidelity(times[i]);
    const double step = times[1] - times[0];
    const double grid_peak = *std::max_element(f.begin(), f.end());
    // Revivals repeat the peak up to rounding: refine every near-maximal
    // local maximum and report the earliest one that attains the best value.
    std::vector<std::pair<double, double>> candidates;  // (time, value)
    for (std::size_t i = 0; i < f.size(); ++i) {
      const bool local = (i == 0 || f[i] >= f[i - 1]) && (i + 1 == f.size() || f[i] >= f[i + 1]);
      if (!local || f[i] < grid_peak - 1e-3) continue;
      double x = times[i];
      double v = golden_max([&](double t) { return amp.fidelity(t); }, std::max(0.0, times[i] - step),
                            std::min(t_max, times[i] + step), x);
      if (f[i] >= v) v = f[i], x = times[i];
      candidates.emplace_back(x, v);
    }
    double peak = 0.0;
    for (const auto& c : candidates) peak = std::max(peak, c.second);
    double peak_time = 0.0;
    for (const auto& c : candidates) {
      if (c.second >= peak - 1e-12) {
        peak_time = c.first;
        break;
      }
    }

    json entry{{"couplings", chain.couplings}, {"peak_fidelity", peak}, {"peak_time", peak_time}};
    if (chain.transfer_time) {
      entry["transfer_time"] = *chain.transfer_time;
      entry["fidelity_at_transfer_time"] = amp.fidelity(*chain.transfer_time);
    } else {
      entry["transfer_time"] = nullptr;
      entry["fidelity_at_transfer_time"] = nullptr;
    }
    summary[name] = std::move(entry);
    names.push_back(name);
    series.push_back(std::move(f));
  }

  o.write_csv("fidelity.csv", [&](std::ostream& s) { write_fidelity_csv(s, times, names, series); });
  json doc{{"schema", kChainSummarySchema}, {"tool_version", kToolVersion}, {"n", a.n},   {"scale", a.scale},
           {"t_max", t_max},                {"steps", a.steps},             {"chains", summary}};
  o.write_json("chain_summary.json", doc);
  files = {"fidelity.csv", "chain_summary.json"};
  return doc;
}

// ---------------------------------------------------------------- mirror

struct MirrorArgs {
  PatternOptions pattern;
  std::vector<int> k{1};
  std::optional<double> time;
  std::string symmetry = "rotation_pi";
  bool expect_perfect = false;
  double tol = 1e-10;
};

int run_mirror(const MirrorArgs& a, const Output& o, std::vector<std::string>& files, json& doc) {
  const auto built = build_pattern(a.pattern, a.pattern.seed);
  const auto& p = built.pattern;
  const double t = a.time ? *a.time : built.natural_time.value_or(std::nan(""));
  if (!std::isfinite(t)) throw ValidationError("mirror: pattern '" + built.source + "' has no transfer time; pass --time");
  const auto sym = SymmetryMap::make(parse_symmetry_kind(a.symmetry), p.geometry());
  std::vector<int> ks = a.k;
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());

  std::vector<MirroringReport> reports;
  json sectors = json::array();
  double min_modulus = 1.0;
  for (int k : ks) {
    reports.push_back(mirroring_report(p, k, sym, t));
    const auto& r = reports.back();
    min_modulus = std::min(min_modulus, r.min_modulus);
    const std::string csv = "mirroring_k" + std::to_string(k) + ".csv";
    o.write_csv(csv, [&](std::ostream& s) { write_mirroring_csv(s, r); });
    files.push_back(csv);
    sectors.push_back(to_json(r));
  }
  const bool perfect = min_modulus >= 1.0 - a.tol;
  doc = json{{"schema", kMirroringSchema},
             {"tool_version", kToolVersion},
             {"pattern_source", built.source},
             {"pattern_digest", pattern_digest(p)},
             {"pattern", to_json(p)},
             {"symmetry", a.symmetry},
             {"time", t},
             {"tolerance", a.tol},
             {"min_modulus", min_modulus},
             {"perfect", perfect},
             {"sectors", std::move(sectors)},
             {"phase_fit", to_json(phase_network_fit(reports))}};
  o.write_json("mirroring.json", doc);
  files.push_back("mirroring.json");
  if (a.expect_perfect && !perfect) {
    throw NumericalError("mirror: min_modulus " + format_double(min_modulus) + " is below 1 - " + format_double(a.tol));
  }
  return kExitOk;
}

// ---------------------------------------------------------------- witness

struct WitnessArgs {
  PatternOptions pattern;
  std::string diag;
  int seeds = 0;
  std::string odd_distance;
};

SparseState diagonal_state_from_bits(const std::string& bits, int n) {
  std::string b = bits.empty() ? "1" + std::string(static_cast<std::size_t>(std::max(0, n - 1)), '0') : bits;
  if (static_cast<int>(b.size()) != n) {
    throw ValidationError("--diag must have " + std::to_string(n) + " characters, got '" + b + "'");
  }
  std::uint64_t mask = 0;
  for (std::size_t r = 0; r < b.size(); ++r) {
    if (b[r] == '1') {
      mask |= std::uint64_t{1} << r;
    } else if (b[r] != '0') {
      throw ValidationError("--diag must contain only 0 and 1, got '" + b + "'");
    }
  }
  return SparseState::basis(static_cast<std::size_t>(n), mask);
}

json run_odd_distance(const WitnessArgs& a, const Output& o, std::vector<std::string>& files) {
  const auto graph = graph_from_json(read_json(a.odd_distance));
  int n = a.pattern.n;
  if (n <= 0) {
    n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(graph.site_count()))));
    if (static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != graph.site_count()) {
      throw ValidationError("--odd-distance: " + std::to_string(graph.site_count()) + " sites is not a square lattice");
    }
  }
  const auto geometry = Geometry::square(n);
  const auto witness = build_witness({n, diagonal_state_from_bits(a.diag, n)});
  const double residual = verify_odd_distance(geometry, graph, witness);
  json doc{{"schema", kOddDistanceSchema},
           {"tool_version", kToolVersion},
           {"n", n},
           {"edges", graph.edges().size()},
           {"residual", residual},
           {"annihilated", residual <= kWitnessResidualTolerance}};
  o.write_json("odd_distance.json", doc);
  files = {"odd_distance.json"};
  if (residual > kWitnessResidualTolerance) {
    throw NumericalError("witness residual " + format_double(residual) + " above tolerance");
  }
  return doc;
}

json certificate_document(const BuiltPattern& built, const Certificate& cert) {
  json doc = to_json(cert);
  doc["pattern_source"] = built.source;
  return doc;
}

json run_witness(const WitnessArgs& a, const Output& o, std::vector<std::string>& files) {
  if (!a.odd_distance.empty()) return run_odd_distance(a, o, files);
  if (a.seeds < 0) throw ValidationError("--seeds must be >= 0");

  auto certify = [&](std::uint64_t seed) {
    const auto built = build_pattern(a.pattern, seed);
    const auto& g = built.pattern.geometry();
    if (!g.is_square()) throw ValidationError("witness: square lattice required");
    const auto cert = impossibility_certificate(built.pattern, diagonal_state_from_bits(a.diag, g.side()),
                                                SymmetryMap::make(SymmetryKind::rotation_pi, g));
    json doc = certificate_document(built, cert);
    doc["seed"] = seed;
    return std::pair(cert, doc);
  };

  if (a.seeds == 0) {
    auto [cert, doc] = certify(a.pattern.seed);
    o.write_json("certificate.json", doc);
    files = {"certificate.json"};
    return doc;
  }

  json list = json::array();
  std::map<std::string, int> counts{{"impossible", 0}, {"inconclusive", 0}};
  for (int i = 0; i < a.seeds; ++i) {
    auto [cert, doc] = certify(a.pattern.seed + static_cast<std::uint64_t>(i));
    ++counts[std::string(to_string(cert.conclusion))];
    list.push_back(std::move(doc));
  }
  json doc{{"schema", kCertificateBatchSchema},
           {"tool_version", kToolVersion},
           {"pattern_source", a.pattern.source},
           {"first_seed", a.pattern.seed},
           {"seeds", a.seeds},
           {"counts", counts},
           {"certificates", std::move(list)}};
  o.write_json("certificates.json", doc);
  files = {"certificates.json"};
  return doc;
}

// ---------------------------------------------------------------- classify

struct ClassifyArgs {
  PatternOptions pattern;
  int parallel_chains = 0;
  int k = 1;
  std::string symmetry;
  std::optional<double> degeneracy_tol;
};

json run_classify(ClassifyArgs a, const Output& o, std::vector<std::string>& files) {
  if (a.parallel_chains > 0) {
    a.pattern.source = "parallel-chains";
    a.pattern.n = a.parallel_chains;
  }
  if (a.symmetry.empty()) a.symmetry = a.pattern.source == "parallel-chains" ? "vertical_axis" : "rotation_pi";
  const auto built = build_pattern(a.pattern, a.pattern.seed);
  const auto& p = built.pattern;
  const auto sym = SymmetryMap::make(parse_symmetry_kind(a.symmetry), p.geometry());
  const auto h = build_sector_hamiltonian(p.to_graph(), a.k);
  const auto spectrum = classify_spectrum(h, sym, a.degeneracy_tol);

  json doc = to_json(spectrum);
  doc["schema"] = kSpectrumSchema;
  doc["tool_version"] = kToolVersion;
  doc["pattern_source"] = built.source;
  doc["pattern_digest"] = pattern_digest(p);
  doc["excitations"] = a.k;
  doc["symmetry"] = a.symmetry;
  doc["opposite_symmetry_groups"] = spectrum.opposite_symmetry_groups();
  if (built.natural_time) {
    const auto report = mirroring_report(p, a.k, sym, *built.natural_time);
    doc["mirroring_at_transfer_time"] = to_json(report);
  }
  o.write_json("spectrum.json", doc);
  o.write_csv("spectrum.csv", [&](std::ostream& s) { write_spectrum_csv(s, spectrum); });
  files = {"spectrum.json", "spectrum.csv"};
  return doc;
}

// ---------------------------------------------------------------- optimize

struct OptimizeArgs {
  std::string preset;
  std::uint64_t seed = 0;
  std::optional<int> restarts;
  std::optional<int> max_iters;
  std::string method;
};

json run_optimize(const OptimizeArgs& a, const Output& o, std::vector<std::string>& files) {
  Preset preset = a.preset == "rx-3x3-witness" ? rx_3x3_witness_preset(a.seed) : chain4_preset(a.seed);
  if (a.restarts) preset.config.restarts = *a.restarts;
  if (a.max_iters) preset.config.max_iters = *a.max_iters;
  if (a.method == "nelder-mead") preset.config.method = OptimizerMethod::nelder_mead;
  if (a.method == "coordinate-descent") preset.config.method = OptimizerMethod::coordinate_descent;

  const auto run = optimize(preset.config, preset.objective);
  json doc = to_json(run);
  doc["preset"] = a.preset;
  std::optional<double> ceiling;
  if (preset.witness_diagonal) {
    ceiling = witness_ceiling(run.best_pattern, preset.objective, *preset.witness_diagonal);
    doc["witness_ceiling"] = *ceiling;
    doc["within_ceiling"] = run.best_value <= *ceiling + 1e-9;
  }
  o.write_json("optimization.json", doc);
  o.write_csv("trace.csv", [&](std::ostream& s) { write_trace_csv(s, run); });
  files = {"optimization.json", "trace.csv"};
  if (ceiling && run.best_value > *ceiling + 1e-9) {
    throw NumericalError("optimize: best value " + format_double(run.best_value) + " exceeds the witness ceiling " +
                         format_double(*ceiling));
  }
  return doc;
}

// ---------------------------------------------------------------- scan

json run_scan(const ProbeConfig& c, const Output& o, std::vector<std::string>& files) {
  const auto report = probe_rotation_2x2(c);
  json doc = to_json(report);
  o.write_json("probe.json", doc);
  o.write_csv("probe.csv", [&](std::ostream& s) { write_probe_csv(s, report); });
  files = {"probe.json", "probe.csv"};
  return doc;
}

void add_common(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.dir, "Output directory")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perfect state mirroring on spin chains and square lattices", "spinmirror"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  app.fallthrough();
  app.set_config("--config", "", "JSON object of option values for the subcommand (keys are long option names)");
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);

  Output output;

  ChainArgs chain;
  auto* chain_cmd = app.add_subcommand("chain", "Single-excitation end-to-end fidelity of uniform and engineered chains");
  add_common(chain_cmd, output);
  chain_cmd->add_option("--n", chain.n, "Chain length")->required();
  chain_cmd->add_flag("--uniform", chain.uniform, "Uniform couplings");
  chain_cmd->add_flag("--christandl", chain.christandl, "Engineered couplings sqrt(m(n-m))/2");
  chain_cmd->add_option("--scale", chain.scale, "Coupling scale")->capture_default_str();
  chain_cmd->add_option("--t-max", chain.t_max, "End of the time grid (default 4 pi / scale)");
  chain_cmd->add_option("--steps", chain.steps, "Grid points")->capture_default_str();

  MirrorArgs mirror;
  auto* mirror_cmd = app.add_subcommand("mirror", "Mirroring amplitudes and phases in fixed-excitation sectors");
  add_common(mirror_cmd, output);
  add_pattern_options(mirror_cmd, mirror.pattern, "christandl-product");
  mirror_cmd->add_option("--k", mirror.k, "Excitation numbers")->capture_default_str();
  mirror_cmd->add_option("--time", mirror.time, "Evolution time (default: the pattern's transfer time)");
  mirror_cmd->add_option("--symmetry", mirror.symmetry, "Mirror map")->capture_default_str();
  mirror_cmd->add_flag("--expect-perfect", mirror.expect_perfect, "Exit 3 unless min_modulus >= 1 - tol");
  mirror_cmd->add_option("--tol", mirror.tol, "Tolerance for --expect-perfect")->capture_default_str();

  WitnessArgs witness;
  auto* witness_cmd = app.add_subcommand("witness", "Zero-energy witness and impossibility certificate");
  add_common(witness_cmd, output);
  add_pattern_options(witness_cmd, witness.pattern, "uniform-lattice");
  witness_cmd->add_option("--diag", witness.diag, "Diagonal basis state, one 0/1 per site (1,1)..(N,N); default 10..0");
  witness_cmd->add_option("--seeds", witness.seeds, "Batch over this many consecutive seeds");
  witness_cmd->add_option("--odd-distance", witness.odd_distance, "Check a graph JSON with odd-distance couplings");

  ClassifyArgs classify;
  auto* classify_cmd = app.add_subcommand("classify", "Symmetry labels of a sector spectrum");
  add_common(classify_cmd, output);
  add_pattern_options(classify_cmd, classify.pattern, "christandl-product");
  classify_cmd->add_option("--parallel-chains", classify.parallel_chains,
                           "Shortcut for --pattern parallel-chains --n L");
  classify_cmd->add_option("--k", classify.k, "Excitation number")->capture_default_str();
  classify_cmd->add_option("--symmetry", classify.symmetry,
                           "Symmetry (default vertical_axis for parallel chains, otherwise rotation_pi)");
  classify_cmd->add_option("--degeneracy-tol", classify.degeneracy_tol, "Eigenvalue grouping tolerance");

  OptimizeArgs opt;
  auto* optimize_cmd = app.add_subcommand("optimize", "Symmetry-constrained coupling search");
  add_common(optimize_cmd, output);
  optimize_cmd->add_option("--preset", opt.preset, "Preset")
      ->required()
      ->check(CLI::IsMember({"rx-3x3-witness", "chain4"}));
  optimize_cmd->add_option("--seed", opt.seed, "Seed")->capture_default_str();
  optimize_cmd->add_option("--restarts", opt.restarts, "Override the preset restart count");
  optimize_cmd->add_option("--max-iters", opt.max_iters, "Override the preset iteration budget");
  optimize_cmd->add_option("--method", opt.method, "Search method")
      ->check(CLI::IsMember({"coordinate-descent", "nelder-mead"}));

  ProbeConfig probe;
  auto* scan_cmd = app.add_subcommand("scan", "Exhaustive ratio x time probe of the rotation-symmetric 2x2 lattice");
  add_common(scan_cmd, output);
  scan_cmd->add_option("--ratio-points", probe.ratio_points, "Ratio grid points")->capture_default_str();
  scan_cmd->add_option("--time-points", probe.time_points, "Time grid points")->capture_default_str();
  scan_cmd->add_option("--ratio-lo", probe.ratio_lo, "Smallest ratio")->capture_default_str();
  scan_cmd->add_option("--ratio-hi", probe.ratio_hi, "Largest ratio")->capture_default_str();

  std::vector<const char*> argv{"spinmirror"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitValidation;
  }

  CLI::App* cmd = app.get_subcommands().front();
  std::vector<std::string> files;
  json summary;
  int status = kExitOk;
  try {
    output.prepare();
    if (cmd == chain_cmd) {
      summary = run_chain(chain, output, files);
    } else if (cmd == mirror_cmd) {
      status = run_mirror(mirror, output, files, summary);
    } else if (cmd == witness_cmd) {
      summary = run_witness(witness, output, files);
    } else if (cmd == classify_cmd) {
      summary = run_classify(classify, output, files);
    } else if (cmd == optimize_cmd) {
      summary = run_optimize(opt, output, files);
    } else {
      summary = run_scan(probe, output, files);
    }
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericalError& e) {
    if (!files.empty()) write_meta(output, cmd->get_name(), args, files);
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  write_meta(output, cmd->get_name(), args, files);
  out << summary.dump(2) << "\n";
  return status;
}

}  // namespace spinmirror::cli
