// Copyright 2026 The symqaoa Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Experiment orchestration: for every requested depth, optimize parameters
// noiselessly, then run the variant grid {noiseless, noisy} x {no SV, bit-flip
// SV, permutation SV, both} (x measEM when readout errors are configured) and
// record fidelity, <C>, sampled statistics, retention and CX counts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "symqaoa/circuit.hpp"
#include "symqaoa/errors.hpp"
#include "symqaoa/maxcut.hpp"
#include "symqaoa/noise.hpp"
#include "symqaoa/qaoa.hpp"
#include "symqaoa/sampling.hpp"
#include "symqaoa/state.hpp"
#include "symqaoa/symmetry.hpp"
#include "symqaoa/transpile.hpp"

namespace symqaoa {

enum class SvMode { None, BitFlip, Permutation, Both };
enum class SvRealization { IdealProjection, AncillaCircuit };
enum class SvPlacement { End, AfterEachLayer };

inline std::string to_string(SvMode m) {
  switch (m) {
    case SvMode::None: return "none";
    case SvMode::BitFlip: return "bitflip";
    case SvMode::Permutation: return "permutation";
    case SvMode::Both: return "both";
  }
  return "?";
}
inline std::string to_string(SvRealization r) {
  return r == SvRealization::IdealProjection ? "ideal_projection" : "ancilla_circuit";
}
inline std::string to_string(SvPlacement p) { return p == SvPlacement::End ? "end" : "after_each_layer"; }

inline SvMode parse_sv_mode(const std::string& s) {
  if (s == "none") return SvMode::None;
  if (s == "bitflip") return SvMode::BitFlip;
  if (s == "permutation" || s == "perm") return SvMode::Permutation;
  if (s == "both") return SvMode::Both;
  throw ConfigError("unknown sv_mode '" + s + "'");
}
inline SvRealization parse_sv_realization(const std::string& s) {
  if (s == "ideal_projection" || s == "ideal") return SvRealization::IdealProjection;
  if (s == "ancilla_circuit" || s == "circuit") return SvRealization::AncillaCircuit;
  throw ConfigError("unknown sv_realization '" + s + "'");
}
inline SvPlacement parse_sv_placement(const std::string& s) {
  if (s == "end") return SvPlacement::End;
  if (s == "after_each_layer") return SvPlacement::AfterEachLayer;
  throw ConfigError("unknown sv_placement '" + s + "'");
}

struct CouplingConfig {
  CouplingKind kind = CouplingKind::AllToAll;
  std::vector<int> layout;  // logical -> physical; empty selects the default
  int n_physical = 0;       // explicit maps only
  std::vector<Edge> edges;  // explicit maps only
};

struct ExperimentConfig {
  NamedGraph graph;
  std::vector<int> p_values;
  std::uint64_t shots = 10000;
  std::uint64_t seed = 0;
  std::optional<NoiseModel> noise;  // nullopt: "none"
  SvMode sv_mode = SvMode::None;
  SvRealization sv_realization = SvRealization::IdealProjection;
  SvPlacement sv_placement = SvPlacement::End;
  bool meas_em = false;
  CouplingConfig coupling;
  OptimizerConfig optimizer;

  void validate() const {
    if (p_values.empty()) throw ConfigError("p_values must be nonempty");
    for (int p : p_values) {
      if (p < 1) throw ConfigError("every p must be >= 1");
    }
    if (shots < 1) throw ConfigError("shots must be >= 1");
    if (noise) {
      noise->validate();
      if (!noise->readout.empty() && static_cast<int>(noise->readout.size()) != graph.graph.n_nodes()) {
        throw ConfigError("readout list must have one entry per node");
      }
    }
  }
};

// ---------------------------------------------------------------------------
// Config JSON

namespace detail {

inline void require_known_keys(const nlohmann::json& j, std::initializer_list<const char*> keys,
                               const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; }) == keys.end()) {
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

}  // namespace detail

/// Noise section: "none", "representative", or an object with keys
/// p_depol_1q, p_depol_2q, t1_us, t2_us, dur_1q_ns, dur_2q_ns, readout.
/// Missing object keys take the representative values (readout: none).
inline std::optional<NoiseModel> noise_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "none") return std::nullopt;
    if (s == "representative") return NoiseModel::representative();
    throw ConfigError("noise must be \"none\", \"representative\" or an object");
  }
  if (!j.is_object()) throw ConfigError("noise must be \"none\", \"representative\" or an object");
  detail::require_known_keys(j, {"p_depol_1q", "p_depol_2q", "t1_us", "t2_us", "dur_1q_ns", "dur_2q_ns", "readout"},
                             "noise");
  NoiseModel nm = NoiseModel::representative();
  nm.p_depol_1q = j.value("p_depol_1q", nm.p_depol_1q);
  nm.p_depol_2q = j.value("p_depol_2q", nm.p_depol_2q);
  nm.t1 = j.value("t1_us", nm.t1 * 1e6) * 1e-6;
  nm.t2 = j.value("t2_us", nm.t2 * 1e6) * 1e-6;
  nm.dur_1q = j.value("dur_1q_ns", nm.dur_1q * 1e9) * 1e-9;
  nm.dur_2q = j.value("dur_2q_ns", nm.dur_2q * 1e9) * 1e-9;
  if (j.contains("readout")) {
    for (const auto& r : j.at("readout")) {
      if (!r.is_array() || r.size() != 2) throw ConfigError("readout entries must be [p01, p10]");
      nm.readout.push_back({r.at(0).get<double>(), r.at(1).get<double>()});
    }
  }
  nm.validate();
  return nm;
}

inline nlohmann::json noise_to_json(const std::optional<NoiseModel>& nm) {
  if (!nm) return "none";
  nlohmann::json readout = nlohmann::json::array();
  for (const auto& r : nm->readout) readout.push_back({r.p01, r.p10});
  return {{"p_depol_1q", nm->p_depol_1q}, {"p_depol_2q", nm->p_depol_2q}, {"t1_us", nm->t1 * 1e6},
          {"t2_us", nm->t2 * 1e6},         {"dur_1q_ns", nm->dur_1q * 1e9}, {"dur_2q_ns", nm->dur_2q * 1e9},
          {"readout", readout}};
}

inline CouplingConfig coupling_from_json(const nlohmann::json& j) {
  CouplingConfig c;
  auto kind_of = [](const std::string& s) {
    if (s == "all" || s == "all_to_all") return CouplingKind::AllToAll;
    if (s == "linear" || s == "linear_chain") return CouplingKind::LinearChain;
    if (s == "explicit") return CouplingKind::Explicit;
    throw ConfigError("unknown coupling kind '" + s + "'");
  };
  if (j.is_string()) {
    c.kind = kind_of(j.get<std::string>());
    if (c.kind == CouplingKind::Explicit) throw ConfigError("explicit coupling needs an object with edges");
    return c;
  }
  detail::require_known_keys(j, {"kind", "layout", "n_physical", "edges"}, "coupling");
  c.kind = kind_of(j.value("kind", std::string("all")));
  if (j.contains("layout")) c.layout = j.at("layout").get<std::vector<int>>();
  if (c.kind == CouplingKind::Explicit) {
    c.n_physical = j.at("n_physical").get<int>();
    for (const auto& e : j.at("edges")) c.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  return c;
}

inline nlohmann::json coupling_to_json(const CouplingConfig& c) {
  nlohmann::json j = {{"kind", coupling_kind_name(c.kind)}, {"layout", c.layout}};
  if (c.kind == CouplingKind::Explicit) {
    nlohmann::json edges = nlohmann::json::array();
    for (auto [a, b] : c.edges) edges.push_back({a, b});
    j["n_physical"] = c.n_physical;
    j["edges"] = edges;
  }
  return j;
}

/// Keys: graph, p_values, shots, seed, noise, sv_mode, sv_realization,
/// sv_placement, meas_em, coupling, optimizer. `graph` is a benchmark name,
/// a path to a graph JSON file, or an inline {"n", "edges"} object.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  try {
    detail::require_known_keys(j, {"graph", "p_values", "shots", "seed", "noise", "sv_mode", "sv_realization",
                                   "sv_placement", "meas_em", "coupling", "optimizer"},
                               "experiment config");
    ExperimentConfig cfg;
    const auto& g = j.at("graph");
    if (g.is_string()) cfg.graph = load_graph(g.get<std::string>());
    else cfg.graph = {"custom", graph_from_json(g), 0};
    cfg.p_values = j.at("p_values").get<std::vector<int>>();
    cfg.shots = j.value("shots", cfg.shots);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("noise")) cfg.noise = noise_from_json(j.at("noise"));
    cfg.sv_mode = parse_sv_mode(j.value("sv_mode", std::string("none")));
    cfg.sv_realization = parse_sv_realization(j.value("sv_realization", std::string("ideal_projection")));
    cfg.sv_placement = parse_sv_placement(j.value("sv_placement", std::string("end")));
    cfg.meas_em = j.value("meas_em", false);
    if (j.contains("coupling")) cfg.coupling = coupling_from_json(j.at("coupling"));
    if (j.contains("optimizer")) {
      const auto& o = j.at("optimizer");
      detail::require_known_keys(o, {"grid_points", "n_starts", "refine_tol", "seed"}, "optimizer");
      cfg.optimizer.grid_points = o.value("grid_points", cfg.optimizer.grid_points);
      cfg.optimizer.n_starts = o.value("n_starts", cfg.optimizer.n_starts);
      cfg.optimizer.refine_tol = o.value("refine_tol", cfg.optimizer.refine_tol);
      cfg.optimizer.seed = o.value("seed", cfg.optimizer.seed);
    }
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed experiment config: ") + ex.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
  return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Variants

struct Variant {
  bool noisy = false;
  SvMode sv = SvMode::None;
  bool meas_em = false;

  std::string name() const {
    std::string s = noisy ? "noisy" : "noiseless";
    if (sv != SvMode::None) s += "+sv_" + to_string(sv);
    if (meas_em) s += "+measem";
    return s;
  }
};

/// The variant grid selected by a config, in emission order.
inline std::vector<Variant> variants_for(const ExperimentConfig& cfg) {
  std::vector<SvMode> svs{SvMode::None};
  switch (cfg.sv_mode) {
    case SvMode::None: break;
    case SvMode::BitFlip: svs.push_back(SvMode::BitFlip); break;
    case SvMode::Permutation: svs.push_back(SvMode::Permutation); break;
    case SvMode::Both:
      svs.insert(svs.end(), {SvMode::BitFlip, SvMode::Permutation, SvMode::Both});
      break;
  }
  std::vector<Variant> out;
  for (auto sv : svs) out.push_back({false, sv, false});
  if (cfg.noise) {
    for (auto sv : svs) out.push_back({true, sv, false});
    if (cfg.meas_em && cfg.noise->has_readout_error()) {
      for (auto sv : svs) out.push_back({true, sv, true});
    }
  }
  return out;
}

/// Symmetries verified by a variant, in verification order. The permutation
/// symmetry is the lexicographically smallest involutive automorphism.
inline std::vector<SymmetryDescriptor> symmetries_for(const Graph& g, SvMode mode) {
  std::vector<SymmetryDescriptor> out;
  if (mode == SvMode::BitFlip || mode == SvMode::Both) out.emplace_back(global_bitflip(g));
  if (mode == SvMode::Permutation || mode == SvMode::Both) {
    auto p = default_permutation_symmetry(g);
    if (!p) throw SimulationError("graph has no SWAP-representable permutation symmetry");
    out.emplace_back(*p);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Physical programs

/// One stage of a compiled run, all on physical wires: gates, then an
/// optional ancilla postselection, then optional ideal projections.
struct ProgramStep {
  Circuit gates;
  bool verification = false;
  std::optional<int> postselect_wire;
  std::vector<SymmetryDescriptor> ideal;
};

struct PhysicalProgram {
  int n_logical = 0;  // system qubits; an ancilla, if any, is logical qubit n_logical
  int width = 0;      // logical wires including the ancilla
  int n_physical = 0;
  std::vector<ProgramStep> steps;
  std::vector<int> final_layout;
  int swaps_inserted = 0;
  int qaoa_cx = 0;
  int verification_cx = 0;

  int total_cx() const { return qaoa_cx + verification_cx; }
};

inline CouplingMap coupling_for(const CouplingConfig& c, int width) {
  switch (c.kind) {
    case CouplingKind::AllToAll: return CouplingMap::all_to_all(width);
    case CouplingKind::LinearChain: return CouplingMap::linear_chain(width);
    case CouplingKind::Explicit: {
      auto m = CouplingMap::explicit_edges(c.n_physical, c.edges);
      if (m.n_physical < width) throw ConfigError("explicit coupling map has too few qubits");
      return m;
    }
  }
  throw ConfigError("unknown coupling kind");
}

/// Logical -> physical placement; the ancilla (when width > n) takes the
/// lowest free physical wire.
inline std::vector<int> initial_layout(const CouplingConfig& c, const Graph& g, int width, const CouplingMap& cm) {
  const int n = g.n_nodes();
  std::vector<int> layout = c.layout;
  if (layout.empty()) {
    if (c.kind == CouplingKind::LinearChain) {
      layout = default_linear_layout(g);
    } else {
      layout.resize(static_cast<std::size_t>(n));
      std::iota(layout.begin(), layout.end(), 0);
    }
  }
  if (static_cast<int>(layout.size()) != n) throw ConfigError("layout must list one position per node");
  std::vector<bool> used(static_cast<std::size_t>(cm.n_physical), false);
  for (int p : layout) {
    if (p < 0 || p >= cm.n_physical || used[static_cast<std::size_t>(p)]) {
      throw ConfigError("layout is not an injective placement on the coupling map");
    }
    used[static_cast<std::size_t>(p)] = true;
  }
  for (int extra = n; extra < width; ++extra) {
    const auto it = std::find(used.begin(), used.end(), false);
    if (it == used.end()) throw ConfigError("no free physical qubit for the ancilla");
    *it = true;
    layout.push_back(static_cast<int>(it - used.begin()));
  }
  return layout;
}

/// Compiles QAOA (+ verification) for one variant into routed physical
/// steps. With `ancilla` the symmetries become ancilla fragments followed by
/// postselection, otherwise ideal projections at the same checkpoints.
inline PhysicalProgram compile_program(const Graph& g, const QaoaParams& params,
                                       const std::vector<SymmetryDescriptor>& syms, bool ancilla,
                                       SvPlacement placement, const CouplingConfig& coupling) {
  const int n = g.n_nodes();
  PhysicalProgram prog;
  prog.n_logical = n;
  prog.width = n + ((ancilla && !syms.empty()) ? 1 : 0);
  const CouplingMap cm = coupling_for(coupling, prog.width);
  prog.n_physical = cm.n_physical;
  std::vector<int> layout = initial_layout(coupling, g, prog.width, cm);

  std::vector<Circuit> segments;
  if (placement == SvPlacement::End) {
    segments.push_back(build_qaoa_circuit(g, params));
  } else {
    for (int k = 0; k < params.p(); ++k) {
      Circuit seg = k == 0 ? build_initial_layer(g) : Circuit(n);
      seg.append(build_qaoa_layer(g, params.gammas[static_cast<std::size_t>(k)],
                                  params.betas[static_cast<std::size_t>(k)]));
      segments.push_back(std::move(seg));
    }
  }

  for (std::size_t s = 0; s < segments.size(); ++s) {
    auto routed = route(segments[s].widened(prog.width), cm, layout);
    layout = routed.final_layout;
    prog.swaps_inserted += routed.swaps_inserted;
    prog.qaoa_cx += count_report(routed.circuit).cx_count;
    prog.steps.push_back({std::move(routed.circuit), false, std::nullopt, {}});
    if (syms.empty()) continue;
    if (ancilla) {
      for (const auto& sym : syms) {
        auto frag = route(build_verification_circuit(sym, n), cm, layout);
        layout = frag.final_layout;
        prog.swaps_inserted += frag.swaps_inserted;
        prog.verification_cx += count_report(frag.circuit).cx_count;
        const int wire = layout[static_cast<std::size_t>(n)];
        prog.steps.push_back({std::move(frag.circuit), true, wire, {}});
      }
    } else {
      std::vector<SymmetryDescriptor> physical;
      for (const auto& sym : syms) physical.push_back(sym.relabeled(std::span<const int>(layout).first(static_cast<std::size_t>(n))));
      prog.steps.push_back({Circuit(cm.n_physical), false, std::nullopt, std::move(physical)});
    }
  }
  prog.final_layout = std::move(layout);
  return prog;
}

struct ProgramOutcome {
  DensityMatrix system;                  // logical order, ancilla removed
  double retention = 1.0;                // product over all postselections
  std::vector<double> stage_retentions;  // ancilla postselections only
};

/// Executes a compiled program from |0...0>, noisily when `noise` is set.
inline ProgramOutcome run_program(const PhysicalProgram& prog, const std::optional<NoiseModel>& noise) {
  DensityMatrix rho(StateVector(prog.n_physical, 0));
  ProgramOutcome out;
  for (const auto& step : prog.steps) {
    if (!step.gates.ops.empty()) {
      rho = noise ? apply_noisy_circuit(step.gates, *noise, std::move(rho)) : simulate(step.gates, std::move(rho));
    }
    if (step.postselect_wire) {
      auto pr = postselect_qubit_zero(rho, *step.postselect_wire);
      rho = std::move(pr.state);
      out.retention *= pr.retention;
      out.stage_retentions.push_back(pr.retention);
    }
    if (!step.ideal.empty()) {
      auto pr = sequential_verify(rho, step.ideal);
      rho = std::move(pr.state);
      out.retention *= pr.retention;
    }
  }
  // physical wire -> logical index; unused wires go above the ancilla
  std::vector<int> position(static_cast<std::size_t>(prog.n_physical), -1);
  for (std::size_t q = 0; q < prog.final_layout.size(); ++q) {
    position[static_cast<std::size_t>(prog.final_layout[q])] = static_cast<int>(q);
  }
  int next = prog.width;
  for (int& p : position) {
    if (p < 0) p = next++;
  }
  rho = permute_qubits(rho, position);
  while (rho.n_qubits() > prog.n_logical) rho = partial_trace_last_qubit(rho);
  out.system = std::move(rho);
  return out;
}

// ---------------------------------------------------------------------------
// Results

struct ExperimentResult {
  std::string graph;
  int p = 0;
  std::string variant;
  std::vector<std::string> symmetries;
  double fidelity = 0.0;
  double expected_C_exact = 0.0;
  double sample_mean = 0.0;
  double sample_std = 0.0;
  double pr_opt = 0.0;
  double retention = 1.0;
  std::optional<double> shot_retention;  // ancilla-circuit variants only
  std::uint64_t shots_kept = 0;
  int cx_count = 0;
  double overhead = 1.0;
  QaoaParams params_used;
  std::optional<std::string> error;

  bool operator==(const ExperimentResult&) const = default;
};

namespace detail {

inline std::uint64_t variant_salt(int p, std::size_t variant_index) {
  return (static_cast<std::uint64_t>(p) << 16) ^ static_cast<std::uint64_t>(variant_index);
}

}  // namespace detail

/// Runs the full grid. Deterministic for a fixed config. Empty postselections
/// and missing symmetries are recorded on the affected result only.
inline std::vector<ExperimentResult> run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Graph& g = cfg.graph.graph;
  const ObjectiveDiagonal diag = objective_diagonal(g);
  const bool ancilla = cfg.sv_realization == SvRealization::AncillaCircuit;
  const auto variants = variants_for(cfg);
  std::optional<CalibrationMatrix> cal;
  if (cfg.noise && cfg.noise->has_readout_error()) {
    cal = build_calibration_matrix(cfg.noise->readout, g.n_nodes());
  }

  std::vector<ExperimentResult> results;
  for (int p : cfg.p_values) {
    const QaoaParams params = optimize_parameters(g, p, cfg.optimizer).params;
    const StateVector reference = qaoa_state(g, params);
    const int base_cx = compile_program(g, params, {}, false, cfg.sv_placement, cfg.coupling).total_cx();

    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      const Variant& v = variants[vi];
      ExperimentResult r;
      r.graph = cfg.graph.name;
      r.p = p;
      r.variant = v.name();
      r.params_used = params;
      try {
        const auto syms = symmetries_for(g, v.sv);
        for (const auto& s : syms) r.symmetries.push_back(s.label());
        const bool use_ancilla = ancilla && !syms.empty();
        const auto counted = compile_program(g, params, syms, true, cfg.sv_placement, cfg.coupling);
        r.cx_count = counted.total_cx();
        r.overhead = base_cx > 0 ? static_cast<double>(r.cx_count) / base_cx : 1.0;

        const auto prog = use_ancilla ? counted : compile_program(g, params, syms, false, cfg.sv_placement, cfg.coupling);
        const std::optional<NoiseModel> noise = v.noisy ? cfg.noise : std::nullopt;
        const auto outcome = run_program(prog, noise);
        r.fidelity = fidelity_pure(outcome.system, reference);
        r.retention = outcome.retention;
        const auto probs = measurement_probabilities(outcome.system);
        r.expected_C_exact = diag.expectation(probs);

        // shot-level postselection: each stage keeps a shot with its ancilla-0 probability
        const std::uint64_t seed = mix_seed(cfg.seed, detail::variant_salt(p, vi));
        std::uint64_t kept = cfg.shots;
        for (std::size_t s = 0; s < outcome.stage_retentions.size() && kept > 0; ++s) {
          const double keep = std::clamp(outcome.stage_retentions[s], 0.0, 1.0);
          const std::vector<double> coin{keep, 1.0 - keep};
          kept = sample_histogram(coin, kept, mix_seed(seed, 1000 + s))[0];
        }
        if (use_ancilla) r.shot_retention = static_cast<double>(kept) / static_cast<double>(cfg.shots);
        r.shots_kept = kept;
        if (kept == 0) throw SimulationError("shot-level postselection kept no shots");

        const bool readout = v.noisy && cal.has_value();
        const Counts counts = readout ? apply_readout_error(probs, *cal, kept, seed) : sample_counts(probs, kept, seed);
        if (v.meas_em && readout) {
          const auto mitigated = mitigate_counts(counts, *cal);
          const auto st = distribution_statistics(mitigated.quasi, diag);
          r.sample_mean = st.mean;
          r.sample_std = st.stddev;
          r.pr_opt = st.pr_opt;
        } else {
          const auto st = sample_statistics(counts, diag);
          r.sample_mean = st.mean;
          r.sample_std = st.stddev;
          r.pr_opt = st.pr_opt;
        }
      } catch (const SimulationError& ex) {
        r.error = ex.what();
      }
      results.push_back(std::move(r));
    }
  }
  std::stable_sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.p < b.p; });
  return results;
}

// ---------------------------------------------------------------------------
// Reports

inline nlohmann::json result_to_json(const ExperimentResult& r) {
  nlohmann::json j = {{"graph", r.graph},
                      {"p", r.p},
                      {"variant", r.variant},
                      {"symmetries", r.symmetries},
                      {"fidelity", r.fidelity},
                      {"expected_C_exact", r.expected_C_exact},
                      {"sample_mean", r.sample_mean},
                      {"sample_std", r.sample_std},
                      {"pr_opt", r.pr_opt},
                      {"retention", r.retention},
                      {"shots_kept", r.shots_kept},
                      {"cx_count", r.cx_count},
                      {"overhead", r.overhead},
                      {"params_used", {{"betas", r.params_used.betas}, {"gammas", r.params_used.gammas}}}};
  j["shot_retention"] = r.shot_retention ? nlohmann::json(*r.shot_retention) : nlohmann::json(nullptr);
  j["error"] = r.error ? nlohmann::json(*r.error) : nlohmann::json(nullptr);
  return j;
}

inline ExperimentResult result_from_json(const nlohmann::json& j) {
  ExperimentResult r;
  r.graph = j.at("graph").get<std::string>();
  r.p = j.at("p").get<int>();
  r.variant = j.at("variant").get<std::string>();
  r.symmetries = j.at("symmetries").get<std::vector<std::string>>();
  r.fidelity = j.at("fidelity").get<double>();
  r.expected_C_exact = j.at("expected_C_exact").get<double>();
  r.sample_mean = j.at("sample_mean").get<double>();
  r.sample_std = j.at("sample_std").get<double>();
  r.pr_opt = j.at("pr_opt").get<double>();
  r.retention = j.at("retention").get<double>();
  r.shots_kept = j.at("shots_kept").get<std::uint64_t>();
  r.cx_count = j.at("cx_count").get<int>();
  r.overhead = j.at("overhead").get<double>();
  r.params_used = QaoaParams(j.at("params_used").at("betas").get<std::vector<double>>(),
                             j.at("params_used").at("gammas").get<std::vector<double>>());
  if (!j.at("shot_retention").is_null()) r.shot_retention = j.at("shot_retention").get<double>();
  if (!j.at("error").is_null()) r.error = j.at("error").get<std::string>();
  return r;
}

namespace detail {

// "noisy+sv_bitflip+measem" -> "noisy+measem"
inline std::string without_sv(const std::string& variant) {
  const auto pos = variant.find("+sv_");
  if (pos == std::string::npos) return variant;
  const auto end = variant.find('+', pos + 1);
  return variant.substr(0, pos) + (end == std::string::npos ? "" : variant.substr(end));
}

}  // namespace detail

/// (relative CX overhead, fidelity gain over the matching no-SV run) for
/// every noisy SV result.
inline nlohmann::json overhead_scatter(const std::vector<ExperimentResult>& results) {
  std::map<std::tuple<std::string, int, std::string>, const ExperimentResult*> index;
  for (const auto& r : results) index[{r.graph, r.p, r.variant}] = &r;
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : results) {
    if (r.error || r.symmetries.empty() || r.variant.rfind("noisy", 0) != 0) continue;
    const auto it = index.find({r.graph, r.p, detail::without_sv(r.variant)});
    if (it == index.end() || it->second->error) continue;
    out.push_back({{"graph", r.graph},
                   {"p", r.p},
                   {"variant", r.variant},
                   {"overhead", r.overhead},
                   {"fidelity_delta", r.fidelity - it->second->fidelity}});
  }
  return out;
}

inline nlohmann::json report_json(const std::vector<ExperimentResult>& results) {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : results) rs.push_back(result_to_json(r));
  return {{"results", rs}, {"overhead_scatter", overhead_scatter(results)}};
}

inline std::vector<ExperimentResult> results_from_report(const nlohmann::json& report) {
  std::vector<ExperimentResult> out;
  for (const auto& j : report.at("results")) out.push_back(result_from_json(j));
  return out;
}

inline constexpr const char* kCsvHeader =
    "graph,p,variant,symmetries,fidelity,expected_C_exact,sample_mean,sample_std,pr_opt,retention,"
    "shot_retention,shots_kept,cx_count,overhead,betas,gammas,error";

namespace detail {

inline std::string fmt10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt10(v[i]);
  return s;
}

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace detail

/// Header row kCsvHeader, one row per result; floats with 10 significant
/// digits, vectors ';'-separated.
inline std::string report_csv(const std::vector<ExperimentResult>& results) {
  using detail::fmt10;
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : results) {
    std::string syms;
    for (std::size_t i = 0; i < r.symmetries.size(); ++i) syms += (i ? ";" : "") + r.symmetries[i];
    out << detail::csv_quote(r.graph) << ',' << r.p << ',' << r.variant << ',' << detail::csv_quote(syms) << ','
        << fmt10(r.fidelity) << ',' << fmt10(r.expected_C_exact) << ',' << fmt10(r.sample_mean) << ','
        << fmt10(r.sample_std) << ',' << fmt10(r.pr_opt) << ',' << fmt10(r.retention) << ','
        << (r.shot_retention ? fmt10(*r.shot_retention) : "") << ',' << r.shots_kept << ',' << r.cx_count << ','
        << fmt10(r.overhead) << ',' << detail::join(r.params_used.betas) << ','
        << detail::join(r.params_used.gammas) << ',' << detail::csv_quote(r.error.value_or("")) << "\n";
  }
  return out.str();
}

enum class ReportFormat { Json, Csv };

inline std::string render_report(const std::vector<ExperimentResult>& results, ReportFormat format) {
  if (results.empty()) throw UsageError("no results to report");
  return format == ReportFormat::Json ? report_json(results).dump(2) + "\n" : report_csv(results);
}

/// Writes the rendered report to `path`.
inline void emit_report(const std::vector<ExperimentResult>& results, ReportFormat format, const std::string& path) {
  const std::string text = render_report(results, format);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SimulationError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw SimulationError("failed writing report to '" + path + "'");
}

}  // namespace symqaoa
