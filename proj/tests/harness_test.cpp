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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "symqaoa.hpp"

namespace symqaoa {
namespace {

using nlohmann::json;

// Tree with branches of length 1, 2 and 3 from node 0: no nontrivial automorphism.
Graph asymmetric_tree() { return Graph(7, {{0, 1}, {0, 2}, {2, 3}, {0, 4}, {4, 5}, {5, 6}}); }

ExperimentConfig star4_config() {
  return config_from_json(json{{"graph", "star4"},
                               {"p_values", {1, 2}},
                               {"shots", 2000},
                               {"seed", 7},
                               {"noise", "representative"},
                               {"sv_mode", "both"},
                               {"optimizer", {{"n_starts", 10}}}});
}

const ExperimentResult& find(const std::vector<ExperimentResult>& rs, int p, const std::string& variant) {
  for (const auto& r : rs) {
    if (r.p == p && r.variant == variant) return r;
  }
  throw std::runtime_error("missing result " + variant);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Field count of one CSV row, honouring double-quoted fields.
std::size_t csv_fields(const std::string& line) {
  std::size_t n = 1;
  bool quoted = false;
  for (char c : line) {
    if (c == '"') quoted = !quoted;
    else if (c == ',' && !quoted) ++n;
  }
  return n;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SYMQAOA_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Config, Defaults) {
  const auto cfg = config_from_json(json{{"graph", "kite4"}, {"p_values", {3}}});
  EXPECT_EQ(cfg.graph.name, "kite4");
  EXPECT_EQ(cfg.shots, 10000u);
  EXPECT_FALSE(cfg.noise.has_value());
  EXPECT_EQ(cfg.sv_mode, SvMode::None);
  EXPECT_EQ(cfg.sv_realization, SvRealization::IdealProjection);
  EXPECT_EQ(cfg.coupling.kind, CouplingKind::AllToAll);
}

TEST(Config, NoiseObjectAndInlineGraph) {
  const auto cfg = config_from_json(json{{"graph", {{"n", 2}, {"edges", {{0, 1}}}}},
                                         {"p_values", {1}},
                                         {"noise", {{"p_depol_2q", 0.02}, {"t1_us", 50}, {"t2_us", 40},
                                                    {"readout", {{0.01, 0.02}, {0.03, 0.04}}}}}});
  ASSERT_TRUE(cfg.noise.has_value());
  EXPECT_EQ(cfg.noise->p_depol_2q, 0.02);
  EXPECT_EQ(cfg.noise->p_depol_1q, NoiseModel::representative().p_depol_1q);
  EXPECT_NEAR(cfg.noise->t1, 50e-6, 1e-18);
  EXPECT_EQ(cfg.noise->readout[1], (ReadoutError{0.03, 0.04}));
  EXPECT_EQ(cfg.graph.graph.edges().size(), 1u);
}

TEST(Config, Errors) {
  const json base{{"graph", "star4"}, {"p_values", {1}}};
  auto with = [&](const std::string& k, json v) {
    json j = base;
    j[k] = std::move(v);
    return j;
  };
  EXPECT_THROW(config_from_json(with("bogus", 1)), ConfigError);
  EXPECT_THROW(config_from_json(with("sv_mode", "sideways")), ConfigError);
  EXPECT_THROW(config_from_json(with("p_values", json::array())), ConfigError);
  EXPECT_THROW(config_from_json(with("p_values", {0})), ConfigError);
  EXPECT_THROW(config_from_json(with("shots", 0)), ConfigError);
  EXPECT_THROW(config_from_json(with("graph", "hexagon")), ConfigError);
  EXPECT_THROW(config_from_json(with("noise", {{"t1_us", 10}, {"t2_us", 30}})), ConfigError);
  EXPECT_THROW(config_from_json(with("noise", {{"readout", {{0.01, 0.01}}}})), ConfigError);
  EXPECT_THROW(config_from_json(with("noise", {{"p_depol_1q", 2.0}})), ConfigError);
  EXPECT_THROW(config_from_json(with("coupling", {{"kind", "ring"}})), ConfigError);
  EXPECT_THROW(config_from_json(json{{"p_values", {1}}}), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Variants, Grid) {
  auto cfg = star4_config();
  EXPECT_EQ(variants_for(cfg).size(), 8u);
  cfg.noise->readout.assign(4, {0.01, 0.01});
  cfg.meas_em = true;
  const auto v = variants_for(cfg);
  ASSERT_EQ(v.size(), 12u);
  EXPECT_EQ(v.front().name(), "noiseless");
  EXPECT_EQ(v.back().name(), "noisy+sv_both+measem");
  cfg.noise.reset();
  EXPECT_EQ(variants_for(cfg).size(), 4u);
}

TEST(Variants, MissingPermutationSymmetry) {
  EXPECT_THROW(symmetries_for(asymmetric_tree(), SvMode::Permutation), SimulationError);
  EXPECT_EQ(symmetries_for(asymmetric_tree(), SvMode::BitFlip).size(), 1u);
}

TEST(RunExperiment, NoiselessVariantsAreExact) {
  auto cfg = star4_config();
  cfg.sv_realization = SvRealization::AncillaCircuit;
  cfg.coupling.kind = CouplingKind::LinearChain;
  const auto rs = run_experiment(cfg);
  ASSERT_EQ(rs.size(), 16u);
  for (const auto& r : rs) {
    ASSERT_FALSE(r.error.has_value()) << r.variant;
    if (r.variant.rfind("noiseless", 0) != 0) continue;
    EXPECT_NEAR(r.fidelity, 1.0, 1e-9) << r.variant;
    EXPECT_NEAR(r.retention, 1.0, 1e-9) << r.variant;
    EXPECT_NEAR(r.expected_C_exact, exact_expectation(benchmark_graph("star4").graph, r.params_used), 1e-9);
  }
}

TEST(RunExperiment, BitflipVerificationHelpsUnderNoise) {
  auto cfg = star4_config();
  cfg.p_values = {3};
  cfg.sv_mode = SvMode::BitFlip;
  const auto rs = run_experiment(cfg);
  const auto& plain = find(rs, 3, "noisy");
  const auto& sv = find(rs, 3, "noisy+sv_bitflip");
  EXPECT_GT(sv.fidelity, plain.fidelity);
  EXPECT_LT(sv.retention, 1.0);
  EXPECT_EQ(sv.symmetries, (std::vector<std::string>{"bitflip{0,1,2,3}"}));
  EXPECT_GT(sv.overhead, 1.0);
  EXPECT_EQ(plain.overhead, 1.0);
}

TEST(RunExperiment, ShotRetentionTracksRetention) {
  auto cfg = star4_config();
  cfg.p_values = {2};
  cfg.shots = 20000;
  cfg.sv_realization = SvRealization::AncillaCircuit;
  const auto rs = run_experiment(cfg);
  const auto& r = find(rs, 2, "noisy+sv_both");
  ASSERT_TRUE(r.shot_retention.has_value());
  EXPECT_NEAR(*r.shot_retention, r.retention, 5 * std::sqrt(r.retention * (1 - r.retention) / 20000.0) + 1e-9);
  EXPECT_EQ(r.shots_kept, static_cast<std::uint64_t>(std::llround(*r.shot_retention * 20000)));
  EXPECT_FALSE(find(rs, 2, "noisy").shot_retention.has_value());
}

TEST(RunExperiment, MissingSymmetryRecordedPerVariant) {
  ExperimentConfig cfg;
  cfg.graph = {"tree7", asymmetric_tree(), 0};
  cfg.p_values = {1};
  cfg.shots = 100;
  cfg.sv_mode = SvMode::Permutation;
  cfg.optimizer.grid_points = 4;
  cfg.optimizer.n_starts = 1;
  const auto rs = run_experiment(cfg);
  ASSERT_EQ(rs.size(), 2u);
  EXPECT_FALSE(rs[0].error.has_value());
  EXPECT_TRUE(rs[1].error.has_value());
}

TEST(RunExperiment, Deterministic) {
  const auto cfg = star4_config();
  EXPECT_EQ(render_report(run_experiment(cfg), ReportFormat::Json),
            render_report(run_experiment(cfg), ReportFormat::Json));
}

TEST(Reports, JsonRoundTripIsExact) {
  const auto rs = run_experiment(star4_config());
  const auto back = results_from_report(json::parse(render_report(rs, ReportFormat::Json)));
  ASSERT_EQ(back.size(), rs.size());
  for (std::size_t i = 0; i < rs.size(); ++i) EXPECT_EQ(back[i], rs[i]) << i;
}

TEST(Reports, CsvShape) {
  const auto rs = run_experiment(star4_config());
  std::istringstream csv(render_report(rs, ReportFormat::Csv));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, kCsvHeader);
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    EXPECT_EQ(csv_fields(line), 17u);
  }
  EXPECT_EQ(rows, rs.size());
}

TEST(Reports, OverheadScatter) {
  const auto rs = run_experiment(star4_config());
  const auto scatter = report_json(rs).at("overhead_scatter");
  // noisy SV variants: three per depth
  ASSERT_EQ(scatter.size(), 6u);
  for (const auto& pt : scatter) {
    const auto& r = find(rs, pt.at("p"), pt.at("variant"));
    EXPECT_EQ(pt.at("fidelity_delta").get<double>(), r.fidelity - find(rs, r.p, "noisy").fidelity);
  }
  EXPECT_EQ(detail::without_sv("noisy+sv_both+measem"), "noisy+measem");
}

TEST(Reports, EmitWritesFile) {
  const std::string path = ::testing::TempDir() + "/harness_report.csv";
  const auto rs = run_experiment(star4_config());
  emit_report(rs, ReportFormat::Csv, path);
  EXPECT_EQ(slurp(path), render_report(rs, ReportFormat::Csv));
  EXPECT_THROW(emit_report(rs, ReportFormat::Csv, "/nonexistent/dir/out.csv"), SimulationError);
  EXPECT_THROW(render_report({}, ReportFormat::Json), UsageError);
}

TEST(Cli, ExitCodes) {
  const std::string dir = ::testing::TempDir();
  EXPECT_EQ(run_cli("symmetries star4"), 0);
  EXPECT_EQ(run_cli("gatecount kite4 --p 2 --sv both --coupling linear"), 0);
  EXPECT_EQ(run_cli("optimize hexagon --p 1"), 2);
  EXPECT_EQ(run_cli("optimize star4"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("experiment --config /nonexistent/config.json"), 2);
  EXPECT_EQ(run_cli("simulate star4 --p 1 --sv sideways"), 2);

  const std::string bad = dir + "/bad_config.json";
  std::ofstream(bad) << "{\"graph\": \"star4\", \"p_values\": [1], \"colour\": 3}";
  EXPECT_EQ(run_cli("experiment --config " + bad), 2);

  const std::string good = dir + "/good_config.json";
  std::ofstream(good) << "{\"graph\": \"path3\", \"p_values\": [1], \"shots\": 100, \"noise\": \"representative\"}";
  EXPECT_EQ(run_cli("experiment --config " + good + " --out /nonexistent/dir/out.json"), 3);
  const std::string out = dir + "/good_out.csv";
  EXPECT_EQ(run_cli("experiment --config " + good + " --format csv --out " + out), 0);
  EXPECT_EQ(slurp(out).rfind(kCsvHeader, 0), 0u);
}

}  // namespace
}  // namespace symqaoa
