#pragma once

// JSON documents and CSV tables for every result type.
//
// Doubles in JSON use the shortest representation that re-parses to the
// same value; CSV cells use "%.17g". Every CSV starts with a
// "# schema=<name>/<version>" line followed by a header row.

#include <iosfwd>
#include <nlohmann/json.hpp>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spinmirror/analysis.hpp"
#include "spinmirror/lattice.hpp"
#include "spinmirror/optimizer.hpp"
#include "spinmirror/pst.hpp"
#include "spinmirror/sparse_state.hpp"
#include "spinmirror/witness.hpp"

namespace spinmirror {

using json = nlohmann::json;

inline constexpr std::string_view kToolVersion = SPINMIRROR_VERSION;

inline constexpr std::string_view kCertificateSchema = "spinmirror.certificate/1";
inline constexpr std::string_view kMirroringSchema = "spinmirror.mirroring/1";
inline constexpr std::string_view kSpectrumSchema = "spinmirror.spectrum/1";
inline constexpr std::string_view kOptimizationSchema = "spinmirror.optimization/1";
inline constexpr std::string_view kTraceSchema = "spinmirror.trace/1";
inline constexpr std::string_view kProbeSchema = "spinmirror.probe/1";
inline constexpr std::string_view kFidelitySchema = "spinmirror.fidelity/1";
inline constexpr std::string_view kChainSummarySchema = "spinmirror.chain/1";

/// "%.17g".
std::string format_double(double value);

/// {"kind":"square","n":N,"J":[[...]],"K":[[...]]}; J has N-1 rows of N,
/// K has N rows of N-1. Chains are {"kind":"chain","n":n,"couplings":[...]},
/// rectangles carry "rows" and "cols" instead of "n".
json to_json(const CouplingPattern& pattern);
CouplingPattern pattern_from_json(const json& doc);

/// {"sites":M,"edges":[[a,b,w],...]} with 0-based flat indices.
json to_json(const ExchangeGraph& graph);
ExchangeGraph graph_from_json(const json& doc);

/// {"n":n,"couplings":[...],"transfer_time":T|null}.
json to_json(const ChainCouplings& chain);
ChainCouplings chain_from_json(const json& doc);

/// [[mask, re, im], ...].
json to_json(const SparseState& state);
SparseState state_from_json(const json& doc, std::size_t site_count);

json to_json(const Certificate& certificate);
json to_json(const MirroringReport& report);
json to_json(const PhaseFit& fit);
json to_json(const SpectrumClassification& spectrum);
/// Deterministic: wall-clock time is left out.
json to_json(const OptimizationRun& run);
json to_json(const ProbeReport& report);

std::string symmetry_label_json(SymmetryLabel label);

/// columns: index,mask,target_mask,re,im,modulus,phase_re,phase_im
void write_mirroring_csv(std::ostream& out, const MirroringReport& report);
/// columns: index,eigenvalue,label,parity,group,group_size,opposite_pair
void write_spectrum_csv(std::ostream& out, const SpectrumClassification& spectrum);
/// columns: restart,iteration,value,best,time,p0,p1,...
void write_trace_csv(std::ostream& out, const OptimizationRun& run);
/// columns: ratio,value,time
void write_probe_csv(std::ostream& out, const ProbeReport& report);
/// columns: time,<one column per series name>
void write_fidelity_csv(std::ostream& out, std::span<const double> times, std::span<const std::string> names,
                        std::span<const std::vector<double>> series);

}  // namespace spinmirror
