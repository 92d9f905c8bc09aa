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

// Command-line front end: optimize, simulate, experiment, gatecount,
// symmetries. Exit codes: 0 ok, 2 configuration/usage error, 3 simulation
// error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "symqaoa.hpp"

namespace {

using namespace symqaoa;
using nlohmann::json;

constexpr int kExitConfig = 2;
constexpr int kExitSimulation = 3;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw SimulationError("cannot open '" + out_path + "' for writing");
  out << text;
  if (!out) throw SimulationError("failed writing '" + out_path + "'");
}

ReportFormat parse_format(const std::string& s) {
  if (s == "json") return ReportFormat::Json;
  if (s == "csv") return ReportFormat::Csv;
  throw ConfigError("unknown format '" + s + "'");
}

std::optional<NoiseModel> parse_noise_arg(const std::string& arg) {
  if (arg == "none" || arg == "representative") return noise_from_json(json(arg));
  std::ifstream in(arg);
  if (!in) throw ConfigError("noise must be none, representative or a readable JSON file: '" + arg + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& ex) {
    throw ConfigError(arg + ": " + ex.what());
  }
  return noise_from_json(j);
}

CouplingConfig parse_coupling_arg(const std::string& kind, const std::vector<int>& layout) {
  CouplingConfig c = coupling_from_json(json(kind));
  c.layout = layout;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QAOA MaxCut simulator with symmetry-verification error mitigation"};
  app.require_subcommand(1);

  // optimize
  auto* optimize = app.add_subcommand("optimize", "find optimal QAOA parameters for a graph");
  std::string graph_arg;
  int p = 1;
  OptimizerConfig opt_cfg;
  optimize->add_option("graph", graph_arg, "benchmark name (path3, complete3, star4, kite4) or graph JSON file")
      ->required();
  optimize->add_option("--p", p, "number of QAOA layers")->required();
  optimize->add_option("--grid-points", opt_cfg.grid_points, "grid points per axis (p = 1)");
  optimize->add_option("--n-starts", opt_cfg.n_starts, "random starts (p >= 2)");
  optimize->add_option("--refine-tol", opt_cfg.refine_tol, "simplex tolerance in parameter space");
  optimize->add_option("--seed", opt_cfg.seed, "optimizer seed");

  // simulate
  auto* simulate_cmd = app.add_subcommand("simulate", "run the variant grid for a single depth");
  std::string noise_arg = "representative", sv_arg = "none", realization_arg = "ideal_projection",
              placement_arg = "end", coupling_arg = "all", format_arg = "json", out_path;
  std::vector<int> layout;
  std::uint64_t shots = 10000, seed = 0;
  bool meas_em = false;
  simulate_cmd->add_option("graph", graph_arg, "benchmark name or graph JSON file")->required();
  simulate_cmd->add_option("--p", p, "number of QAOA layers")->required();
  simulate_cmd->add_option("--noise", noise_arg, "none, representative, or a noise JSON file");
  simulate_cmd->add_option("--sv", sv_arg, "none, bitflip, perm or both");
  simulate_cmd->add_option("--realization", realization_arg, "ideal_projection or ancilla_circuit");
  simulate_cmd->add_option("--placement", placement_arg, "end or after_each_layer");
  simulate_cmd->add_option("--coupling", coupling_arg, "all or linear");
  simulate_cmd->add_option("--layout", layout, "logical -> physical placement")->delimiter(',');
  simulate_cmd->add_option("--shots", shots, "shots per variant");
  simulate_cmd->add_option("--seed", seed, "sampling seed");
  simulate_cmd->add_flag("--meas-em", meas_em, "add readout-mitigated variants");
  simulate_cmd->add_option("--format", format_arg, "json or csv");
  simulate_cmd->add_option("--out", out_path, "output file (default stdout)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run an experiment described by a JSON config");
  std::string config_path;
  experiment->add_option("--config", config_path, "experiment config JSON")->required();
  experiment->add_option("--out", out_path, "output file (default stdout)");
  experiment->add_option("--format", format_arg, "json or csv");

  // gatecount
  auto* gatecount = app.add_subcommand("gatecount", "CNOT counts and verification overhead");
  gatecount->add_option("graph", graph_arg, "benchmark name or graph JSON file")->required();
  gatecount->add_option("--p", p, "number of QAOA layers")->required();
  gatecount->add_option("--sv", sv_arg, "none, bitflip, perm or both");
  gatecount->add_option("--coupling", coupling_arg, "all or linear");
  gatecount->add_option("--layout", layout, "logical -> physical placement")->delimiter(',');
  gatecount->add_option("--placement", placement_arg, "end or after_each_layer");

  // symmetries
  auto* symmetries = app.add_subcommand("symmetries", "list objective symmetries of a graph");
  symmetries->add_option("graph", graph_arg, "benchmark name or graph JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*optimize) {
      const NamedGraph ng = load_graph(graph_arg);
      const auto r = optimize_parameters(ng.graph, p, opt_cfg);
      const double cmax = objective_diagonal(ng.graph).max_value;
      const json out = {{"graph", ng.name},
                        {"p", p},
                        {"betas", r.params.betas},
                        {"gammas", r.params.gammas},
                        {"expectation", r.expectation},
                        {"max_value", cmax},
                        {"approximation_ratio", r.expectation / cmax}};
      std::cout << out.dump(2) << "\n";
    } else if (*simulate_cmd) {
      ExperimentConfig cfg;
      cfg.graph = load_graph(graph_arg);
      cfg.p_values = {p};
      cfg.shots = shots;
      cfg.seed = seed;
      cfg.noise = parse_noise_arg(noise_arg);
      cfg.sv_mode = parse_sv_mode(sv_arg);
      cfg.sv_realization = parse_sv_realization(realization_arg);
      cfg.sv_placement = parse_sv_placement(placement_arg);
      cfg.meas_em = meas_em;
      cfg.coupling = parse_coupling_arg(coupling_arg, layout);
      const auto results = run_experiment(cfg);
      write_output(render_report(results, parse_format(format_arg)), out_path);
    } else if (*experiment) {
      const auto cfg = load_config(config_path);
      const auto results = run_experiment(cfg);
      write_output(render_report(results, parse_format(format_arg)), out_path);
    } else if (*gatecount) {
      const NamedGraph ng = load_graph(graph_arg);
      const auto coupling = parse_coupling_arg(coupling_arg, layout);
      const auto placement = parse_sv_placement(placement_arg);
      const auto params = QaoaParams::zeros(p);
      const auto syms = symmetries_for(ng.graph, parse_sv_mode(sv_arg));
      const auto base = compile_program(ng.graph, params, {}, true, placement, coupling);
      const auto with_sv = compile_program(ng.graph, params, syms, true, placement, coupling);
      auto flatten = [](const PhysicalProgram& prog) {
        Circuit c(prog.n_physical);
        for (const auto& s : prog.steps) c.append(s.gates);
        return count_report(c);
      };
      const auto base_report = flatten(base);
      const auto sv_report = flatten(with_sv);
      json labels = json::array();
      for (const auto& s : syms) labels.push_back(s.label());
      json out = {{"graph", ng.name},
                  {"p", p},
                  {"coupling", coupling_kind_name(coupling.kind)},
                  {"layout", initial_layout(coupling, ng.graph, with_sv.width, coupling_for(coupling, with_sv.width))},
                  {"symmetries", labels},
                  {"base", to_json(base_report)},
                  {"with_sv", to_json(sv_report)},
                  {"swaps_inserted", with_sv.swaps_inserted}};
      out["overhead"] = base_report.cx_count > 0 ? json(relative_overhead(sv_report, base_report)) : json(nullptr);
      std::cout << out.dump(2) << "\n";
    } else if (*symmetries) {
      std::cout << symmetries_report(load_graph(graph_arg)).dump(2) << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const SimulationError& e) {
    std::cerr << "simulation error: " << e.what() << "\n";
    return kExitSimulation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSimulation;
  }
  return 0;
}
