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

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "symqaoa/errors.hpp"
#include "symqaoa/state.hpp"

namespace symqaoa {

using Edge = std::pair<int, int>;

/// Undirected simple graph. Edges are stored as (j, k) with j < k, sorted.
class Graph {
 public:
  Graph() = default;

  Graph(int n_nodes, std::vector<Edge> edges) : n_nodes_(n_nodes) {
    if (n_nodes < 1 || n_nodes > kMaxQubits) {
      throw ConfigError("graph node count " + std::to_string(n_nodes) + " out of range");
    }
    for (auto [j, k] : edges) {
      if (j == k) throw ConfigError("self-loop on node " + std::to_string(j));
      if (j < 0 || k < 0 || j >= n_nodes || k >= n_nodes) {
        throw ConfigError("edge (" + std::to_string(j) + "," + std::to_string(k) +
                          ") out of range");
      }
      edges_.emplace_back(std::min(j, k), std::max(j, k));
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
      throw ConfigError("duplicate edge");
    }
  }

  int n_nodes() const { return n_nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(int j, int k) const {
    return std::binary_search(edges_.begin(), edges_.end(), Edge{std::min(j, k), std::max(j, k)});
  }

  int degree(int v) const {
    return static_cast<int>(std::count_if(edges_.begin(), edges_.end(),
                                          [v](const Edge& e) { return e.first == v || e.second == v; }));
  }

  bool operator==(const Graph&) const = default;

 private:
  int n_nodes_ = 0;
  std::vector<Edge> edges_;
};

/// Number of edges whose endpoints fall on different sides of the cut
/// encoded by basis index `x` (bit v = side of node v).
inline int cut_value(const Graph& g, std::uint64_t x) {
  int cut = 0;
  for (auto [j, k] : g.edges()) cut += static_cast<int>(((x >> j) ^ (x >> k)) & 1);
  return cut;
}

/// Bitstring form, node 0 first.
inline int cut_value(const Graph& g, std::string_view bits) {
  if (static_cast<int>(bits.size()) != g.n_nodes()) {
    throw UsageError("bitstring length " + std::to_string(bits.size()) + " != node count " +
                     std::to_string(g.n_nodes()));
  }
  std::uint64_t x = 0;
  for (std::size_t v = 0; v < bits.size(); ++v) {
    if (bits[v] == '1') x |= std::uint64_t{1} << v;
    else if (bits[v] != '0') throw UsageError("bitstring may contain only '0' and '1'");
  }
  return cut_value(g, x);
}

/// The diagonal of the MaxCut Hamiltonian in the computational basis.
struct ObjectiveDiagonal {
  std::vector<double> values;
  double max_value = 0.0;
  std::vector<std::size_t> maximizers;

  bool is_maximizer(std::size_t index) const {
    return std::binary_search(maximizers.begin(), maximizers.end(), index);
  }
  /// sum_x p(x) f(x)
  double expectation(std::span<const double> probs) const {
    if (probs.size() != values.size()) throw UsageError("objective/probability size mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) acc += probs[i] * values[i];
    return acc;
  }
};

inline ObjectiveDiagonal objective_diagonal(const Graph& g) {
  ObjectiveDiagonal d;
  const std::size_t dim = dim_of(g.n_nodes());
  d.values.resize(dim);
  for (std::size_t x = 0; x < dim; ++x) d.values[x] = cut_value(g, x);
  d.max_value = *std::max_element(d.values.begin(), d.values.end());
  for (std::size_t x = 0; x < dim; ++x) {
    if (d.values[x] == d.max_value) d.maximizers.push_back(x);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Benchmark instances

enum class BenchmarkGraph { Path3, Complete3, Star4, Kite4 };

inline constexpr BenchmarkGraph kAllBenchmarks[] = {BenchmarkGraph::Path3, BenchmarkGraph::Complete3,
                                                    BenchmarkGraph::Star4, BenchmarkGraph::Kite4};

struct NamedGraph {
  std::string name;
  Graph graph;
  /// Smallest layer count at which noiseless QAOA solves the instance exactly.
  int p_max = 0;
};

inline std::string benchmark_name(BenchmarkGraph b) {
  switch (b) {
    case BenchmarkGraph::Path3: return "path3";
    case BenchmarkGraph::Complete3: return "complete3";
    case BenchmarkGraph::Star4: return "star4";
    case BenchmarkGraph::Kite4: return "kite4";
  }
  return "?";
}

inline NamedGraph benchmark_graph(BenchmarkGraph b) {
  switch (b) {
    case BenchmarkGraph::Path3: return {"path3", Graph(3, {{0, 1}, {1, 2}}), 1};
    case BenchmarkGraph::Complete3: return {"complete3", Graph(3, {{0, 1}, {0, 2}, {1, 2}}), 2};
    // center is node 0
    case BenchmarkGraph::Star4: return {"star4", Graph(4, {{0, 1}, {0, 2}, {0, 3}}), 3};
    // triangle 0-1-2 with node 3 hanging off node 2
    case BenchmarkGraph::Kite4: return {"kite4", Graph(4, {{0, 1}, {0, 2}, {1, 2}, {2, 3}}), 3};
  }
  throw UsageError("unknown benchmark graph");
}

inline NamedGraph benchmark_graph(std::string_view name) {
  for (auto b : kAllBenchmarks) {
    if (benchmark_name(b) == name) return benchmark_graph(b);
  }
  throw UsageError("unknown benchmark graph '" + std::string(name) + "'");
}

inline bool is_benchmark_name(std::string_view name) {
  for (auto b : kAllBenchmarks) {
    if (benchmark_name(b) == name) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// JSON: {"n": int, "edges": [[j, k], ...]}

inline Graph graph_from_json(const nlohmann::json& j) {
  try {
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw ConfigError("edge must be a [j, k] pair");
      edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    }
    return Graph(j.at("n").get<int>(), std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(std::string("malformed graph JSON: ") + ex.what());
  }
}

inline nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [j, k] : g.edges()) edges.push_back({j, k});
  return {{"n", g.n_nodes()}, {"edges", std::move(edges)}};
}

/// Accepts a benchmark name or a path to a graph JSON file. Graphs loaded
/// from files carry p_max = 0 (unknown).
inline NamedGraph load_graph(const std::string& name_or_path) {
  if (is_benchmark_name(name_or_path)) return benchmark_graph(name_or_path);
  std::ifstream in(name_or_path);
  if (!in) {
    throw ConfigError("'" + name_or_path + "' is neither a benchmark graph nor a readable file");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError(name_or_path + ": " + ex.what());
  }
  return {name_or_path, graph_from_json(j), 0};
}

}  // namespace symqaoa
