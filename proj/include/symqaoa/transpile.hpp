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

// Decomposition into the {CX, single-qubit} basis, SWAP-insertion routing on
// restricted coupling maps, and CNOT accounting.

#include <algorithm>
#include <deque>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "symqaoa/circuit.hpp"
#include "symqaoa/maxcut.hpp"

namespace symqaoa {

inline bool is_cx_basis(GateKind kind) {
  switch (kind) {
    case GateKind::CX:
    case GateKind::H:
    case GateKind::RX:
    case GateKind::RZ:
    case GateKind::X:
      return true;
    default:
      return false;
  }
}

namespace detail {

inline void emit_swap(Circuit& out, int a, int b) {
  out.push(GateOp::cx(a, b));
  out.push(GateOp::cx(b, a));
  out.push(GateOp::cx(a, b));
}

// Standard 6-CX Toffoli network with T = RZ(pi/4) up to global phase.
inline void emit_toffoli(Circuit& out, int a, int b, int c) {
  constexpr double t = std::numbers::pi / 4.0;
  out.push(GateOp::h(c));
  out.push(GateOp::cx(b, c));
  out.push(GateOp::rz(c, -t));
  out.push(GateOp::cx(a, c));
  out.push(GateOp::rz(c, t));
  out.push(GateOp::cx(b, c));
  out.push(GateOp::rz(c, -t));
  out.push(GateOp::cx(a, c));
  out.push(GateOp::rz(b, t));
  out.push(GateOp::rz(c, t));
  out.push(GateOp::h(c));
  out.push(GateOp::cx(a, b));
  out.push(GateOp::rz(a, t));
  out.push(GateOp::rz(b, -t));
  out.push(GateOp::cx(a, b));
}

}  // namespace detail

/// Rewrites RZZ (2 CX), SWAP (3 CX) and CSWAP (8 CX) into the CX basis; other
/// gates pass through. Equal to the input up to a global phase.
inline Circuit decompose_to_cx_basis(const Circuit& circ) {
  Circuit out(circ.n_qubits, circ.ancilla);
  for (const auto& op : circ.ops) {
    const auto& t = op.targets;
    switch (op.kind) {
      case GateKind::RZZ:
        out.push(GateOp::cx(t[0], t[1]));
        out.push(GateOp::rz(t[1], op.angle));
        out.push(GateOp::cx(t[0], t[1]));
        break;
      case GateKind::SWAP:
        detail::emit_swap(out, t[0], t[1]);
        break;
      case GateKind::CSWAP:
        out.push(GateOp::cx(t[2], t[1]));
        detail::emit_toffoli(out, t[0], t[1], t[2]);
        out.push(GateOp::cx(t[2], t[1]));
        break;
      default:
        if (!is_cx_basis(op.kind)) throw UsageError("cannot decompose gate " + gate_name(op.kind));
        out.push(op);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Coupling maps

enum class CouplingKind { AllToAll, LinearChain, Explicit };

struct CouplingMap {
  int n_physical = 0;
  std::vector<Edge> edges;
  CouplingKind kind = CouplingKind::AllToAll;

  static CouplingMap all_to_all(int n) {
    CouplingMap m{n, {}, CouplingKind::AllToAll};
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) m.edges.emplace_back(a, b);
    }
    return m;
  }

  static CouplingMap linear_chain(int n) {
    CouplingMap m{n, {}, CouplingKind::LinearChain};
    for (int a = 0; a + 1 < n; ++a) m.edges.emplace_back(a, a + 1);
    return m;
  }

  static CouplingMap explicit_edges(int n, std::vector<Edge> edges) {
    CouplingMap m{n, {}, CouplingKind::Explicit};
    for (auto [a, b] : edges) m.edges.emplace_back(std::min(a, b), std::max(a, b));
    std::sort(m.edges.begin(), m.edges.end());
    m.edges.erase(std::unique(m.edges.begin(), m.edges.end()), m.edges.end());
    if (!m.connected()) throw ConfigError("coupling map is not connected");
    return m;
  }

  bool adjacent(int a, int b) const {
    if (kind == CouplingKind::AllToAll) return a != b;
    return std::binary_search(edges.begin(), edges.end(), Edge{std::min(a, b), std::max(a, b)});
  }

  /// Shortest physical path from a to b (inclusive), BFS with ascending
  /// neighbor order.
  std::vector<int> shortest_path(int a, int b) const {
    std::vector<int> prev(static_cast<std::size_t>(n_physical), -1);
    std::deque<int> queue{a};
    prev[static_cast<std::size_t>(a)] = a;
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      if (u == b) break;
      for (int v = 0; v < n_physical; ++v) {
        if (prev[static_cast<std::size_t>(v)] == -1 && adjacent(u, v)) {
          prev[static_cast<std::size_t>(v)] = u;
          queue.push_back(v);
        }
      }
    }
    if (prev[static_cast<std::size_t>(b)] == -1) throw ConfigError("coupling map is not connected");
    std::vector<int> path{b};
    while (path.back() != a) path.push_back(prev[static_cast<std::size_t>(path.back())]);
    std::reverse(path.begin(), path.end());
    return path;
  }

  bool connected() const {
    if (n_physical <= 1) return true;
    try {
      for (int v = 1; v < n_physical; ++v) shortest_path(0, v);
    } catch (const ConfigError&) {
      return false;
    }
    return true;
  }
};

inline std::string coupling_kind_name(CouplingKind k) {
  switch (k) {
    case CouplingKind::AllToAll: return "all";
    case CouplingKind::LinearChain: return "linear";
    case CouplingKind::Explicit: return "explicit";
  }
  return "?";
}

/// Default chain placement: the highest-degree node (lowest index on ties) at
/// chain position 1, all other nodes in ascending order around it. For the
/// star this puts the center second on the chain, so one layer needs a
/// single SWAP.
inline std::vector<int> default_linear_layout(const Graph& g) {
  const int n = g.n_nodes();
  std::vector<int> layout(static_cast<std::size_t>(n));
  std::iota(layout.begin(), layout.end(), 0);
  if (n < 2) return layout;
  int hub = 0;
  for (int v = 1; v < n; ++v) {
    if (g.degree(v) > g.degree(hub)) hub = v;
  }
  int pos = 0;
  for (int v = 0; v < n; ++v) {
    if (v == hub) continue;
    if (pos == 1) ++pos;
    layout[static_cast<std::size_t>(v)] = pos++;
  }
  layout[static_cast<std::size_t>(hub)] = 1;
  return layout;
}

// ---------------------------------------------------------------------------
// Routing

/// Routed circuit on physical wires. layout[q] is the physical wire holding
/// logical qubit q.
struct RoutedCircuit {
  Circuit circuit;
  std::vector<int> initial_layout;
  std::vector<int> final_layout;
  int swaps_inserted = 0;
};

/// Greedy router: every non-adjacent CX first moves its control along the
/// shortest path towards the target with SWAPs (3 CX each), updating the
/// layout. The output never swaps back; readers relabel with final_layout.
inline RoutedCircuit route(const Circuit& circ, const CouplingMap& coupling, std::vector<int> layout) {
  if (coupling.n_physical < circ.n_qubits) {
    throw ConfigError("coupling map has " + std::to_string(coupling.n_physical) +
                      " qubits, circuit needs " + std::to_string(circ.n_qubits));
  }
  if (layout.empty()) {
    layout.resize(static_cast<std::size_t>(circ.n_qubits));
    std::iota(layout.begin(), layout.end(), 0);
  }
  if (static_cast<int>(layout.size()) != circ.n_qubits) throw ConfigError("layout size mismatch");
  std::vector<int> occupant(static_cast<std::size_t>(coupling.n_physical), -1);
  for (std::size_t q = 0; q < layout.size(); ++q) {
    const int p = layout[q];
    if (p < 0 || p >= coupling.n_physical || occupant[static_cast<std::size_t>(p)] != -1) {
      throw ConfigError("layout is not an injective map onto the coupling map");
    }
    occupant[static_cast<std::size_t>(p)] = static_cast<int>(q);
  }

  const Circuit basis = decompose_to_cx_basis(circ);
  RoutedCircuit out;
  out.initial_layout = layout;
  out.circuit = Circuit(coupling.n_physical);
  if (circ.ancilla) out.circuit.ancilla = layout[static_cast<std::size_t>(*circ.ancilla)];

  auto phys = [&](int q) { return layout[static_cast<std::size_t>(q)]; };
  for (const auto& op : basis.ops) {
    if (op.kind == GateKind::CX && !coupling.adjacent(phys(op.targets[0]), phys(op.targets[1]))) {
      const auto path = coupling.shortest_path(phys(op.targets[0]), phys(op.targets[1]));
      // walk the control until it sits next to the target
      for (std::size_t i = 0; i + 2 < path.size(); ++i) {
        const int from = path[i], to = path[i + 1];
        detail::emit_swap(out.circuit, from, to);
        ++out.swaps_inserted;
        const int qa = occupant[static_cast<std::size_t>(from)];
        const int qb = occupant[static_cast<std::size_t>(to)];
        std::swap(occupant[static_cast<std::size_t>(from)], occupant[static_cast<std::size_t>(to)]);
        if (qa >= 0) layout[static_cast<std::size_t>(qa)] = to;
        if (qb >= 0) layout[static_cast<std::size_t>(qb)] = from;
      }
    }
    GateOp mapped = op;
    for (int& t : mapped.targets) t = phys(t);
    out.circuit.push(std::move(mapped));
  }
  out.final_layout = std::move(layout);
  if (circ.ancilla) out.circuit.ancilla = out.final_layout[static_cast<std::size_t>(*circ.ancilla)];
  return out;
}

/// Routing onto a chain of physical qubits. Wires of the output circuit are
/// chain positions 0..|chain|-1 (chain[i] names the device qubit at
/// position i); `layout` maps logical qubits to chain positions.
inline RoutedCircuit route_linear(const Circuit& circ, std::span<const int> chain,
                                  std::vector<int> layout = {}) {
  if (static_cast<int>(chain.size()) < circ.n_qubits) {
    throw ConfigError("chain of " + std::to_string(chain.size()) + " qubits is too short for " +
                      std::to_string(circ.n_qubits) + " logical qubits");
  }
  return route(circ, CouplingMap::linear_chain(static_cast<int>(chain.size())), std::move(layout));
}

// ---------------------------------------------------------------------------
// Counting

struct GateCountReport {
  int cx_count = 0;
  int single_qubit_count = 0;
  int depth = 0;

  bool operator==(const GateCountReport&) const = default;
};

/// Exact per-kind counts plus greedy-layer depth of a CX-basis circuit.
inline GateCountReport count_report(const Circuit& circ) {
  GateCountReport r;
  std::vector<int> level(static_cast<std::size_t>(circ.n_qubits), 0);
  for (const auto& op : circ.ops) {
    if (!is_cx_basis(op.kind)) {
      throw UsageError("count_report expects a CX-basis circuit, found " + gate_name(op.kind));
    }
    if (op.kind == GateKind::CX) ++r.cx_count;
    else ++r.single_qubit_count;
    int l = 0;
    for (int t : op.targets) l = std::max(l, level[static_cast<std::size_t>(t)]);
    for (int t : op.targets) level[static_cast<std::size_t>(t)] = l + 1;
    r.depth = std::max(r.depth, l + 1);
  }
  return r;
}

inline double relative_overhead(const GateCountReport& with_sv, const GateCountReport& base) {
  if (base.cx_count <= 0) throw UsageError("relative overhead needs a base circuit with CX gates");
  return static_cast<double>(with_sv.cx_count) / static_cast<double>(base.cx_count);
}

inline nlohmann::json to_json(const GateCountReport& r) {
  return {{"cx_count", r.cx_count}, {"single_qubit_count", r.single_qubit_count}, {"depth", r.depth}};
}

}  // namespace symqaoa
