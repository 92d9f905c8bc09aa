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

#include <optional>
#include <string>
#include <vector>

#include "symqaoa/state.hpp"

namespace symqaoa {

/// Ordered gate list on `n_qubits` wires. When present, `ancilla` marks the
/// verification ancilla wire.
struct Circuit {
  int n_qubits = 0;
  std::vector<GateOp> ops;
  std::optional<int> ancilla;

  Circuit() = default;
  explicit Circuit(int n, std::optional<int> anc = std::nullopt) : n_qubits(n), ancilla(anc) {}

  void push(GateOp op) {
    validate_gate(op, n_qubits);
    ops.push_back(std::move(op));
  }

  void append(const Circuit& other) {
    if (other.n_qubits > n_qubits) throw UsageError("appended circuit is wider than target");
    for (const auto& op : other.ops) push(op);
  }

  std::size_t count(GateKind kind) const {
    std::size_t c = 0;
    for (const auto& op : ops) c += op.kind == kind ? 1 : 0;
    return c;
  }

  /// Same ops on a wider register (extra wires appended at the top).
  Circuit widened(int n) const {
    if (n < n_qubits) throw UsageError("cannot narrow a circuit");
    Circuit c = *this;
    c.n_qubits = n;
    return c;
  }
};

inline StateVector simulate(const Circuit& c, StateVector psi) {
  if (psi.n_qubits() != c.n_qubits) throw UsageError("circuit/state width mismatch");
  apply_gates(psi, std::span<const GateOp>(c.ops));
  return psi;
}

inline DensityMatrix simulate(const Circuit& c, DensityMatrix rho) {
  if (rho.n_qubits() != c.n_qubits) throw UsageError("circuit/state width mismatch");
  apply_gates(rho, std::span<const GateOp>(c.ops));
  return rho;
}

/// Unitary of the whole circuit (columns are images of basis states).
inline CMatrix circuit_unitary(const Circuit& c) {
  const auto d = static_cast<Eigen::Index>(dim_of(c.n_qubits));
  CMatrix u = CMatrix::Identity(d, d);
  for (const auto& op : c.ops) detail::apply_local_left(u, gate_matrix(op), op.targets);
  return u;
}

}  // namespace symqaoa
