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

// Objective-function symmetries of MaxCut and their verification.
//
// A symmetry a: {0,1}^n -> {0,1}^n with f(a(x)) = f(x) acts on qubits as
// A|x> = |a(x)>. Bit-flip symmetries flip a node subset L; permutation
// symmetries relabel nodes (graph automorphisms). Involutions have +-1
// spectra, so the +1 eigenspace is selected by M = (I + A) / 2, realized
// either directly (ideal projection) or by an ancilla-controlled A between
// two Hadamards with postselection on ancilla 0.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "symqaoa/circuit.hpp"
#include "symqaoa/maxcut.hpp"
#include "symqaoa/state.hpp"

namespace symqaoa {

/// x -> x XOR mask.
struct BitFlipSymmetry {
  std::uint64_t mask = 0;

  std::vector<int> qubits() const {
    std::vector<int> q;
    for (int v = 0; v < 64; ++v) {
      if ((mask >> v) & 1) q.push_back(v);
    }
    return q;
  }
  bool operator==(const BitFlipSymmetry&) const = default;
};

/// Node relabeling v -> perm[v]. `transpositions` is filled (disjoint pairs,
/// j < k, ascending) exactly when perm is an involution.
struct PermutationSymmetry {
  std::vector<int> perm;
  std::optional<std::vector<std::pair<int, int>>> transpositions;

  bool is_identity() const {
    for (std::size_t v = 0; v < perm.size(); ++v) {
      if (perm[v] != static_cast<int>(v)) return false;
    }
    return true;
  }
  bool is_involution() const {
    for (std::size_t v = 0; v < perm.size(); ++v) {
      if (perm[static_cast<std::size_t>(perm[v])] != static_cast<int>(v)) return false;
    }
    return true;
  }
  bool operator==(const PermutationSymmetry&) const = default;
};

/// Bit-flip mask {L} checked against the objective at construction.
inline BitFlipSymmetry make_bitflip(const Graph& g, std::uint64_t mask) {
  if (mask == 0 || mask >= (std::uint64_t{1} << g.n_nodes())) {
    throw UsageError("bit-flip mask must be a nonempty subset of the nodes");
  }
  const std::size_t dim = dim_of(g.n_nodes());
  for (std::size_t x = 0; x < dim; ++x) {
    if (cut_value(g, x ^ mask) != cut_value(g, x)) {
      throw ConfigError("mask does not preserve the cut objective");
    }
  }
  return {mask};
}

inline std::vector<std::pair<int, int>> involution_transpositions(const std::vector<int>& perm) {
  std::vector<std::pair<int, int>> t;
  for (std::size_t v = 0; v < perm.size(); ++v) {
    const int w = perm[v];
    if (w > static_cast<int>(v)) t.emplace_back(static_cast<int>(v), w);
  }
  return t;
}

/// An involutive symmetry operator S (S^2 = I), the unit that verification
/// works with. Non-involutive automorphisms cannot be represented.
class SymmetryDescriptor {
 public:
  SymmetryDescriptor(BitFlipSymmetry b) : op_(b) {
    if (b.mask == 0) throw UsageError("empty bit-flip mask");
  }

  SymmetryDescriptor(PermutationSymmetry p) {
    std::vector<int> sorted = p.perm;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t v = 0; v < sorted.size(); ++v) {
      if (sorted[v] != static_cast<int>(v)) throw UsageError("not a permutation");
    }
    if (!p.is_involution()) {
      throw UsageError("permutation symmetry is not an involution; no +-1 spectrum");
    }
    if (!p.transpositions) p.transpositions = involution_transpositions(p.perm);
    op_ = std::move(p);
  }

  bool is_bitflip() const { return std::holds_alternative<BitFlipSymmetry>(op_); }
  const BitFlipSymmetry& bitflip() const { return std::get<BitFlipSymmetry>(op_); }
  const PermutationSymmetry& permutation() const { return std::get<PermutationSymmetry>(op_); }

  /// Smallest register width the operator fits in.
  int min_qubits() const {
    if (is_bitflip()) {
      int n = 0;
      while ((bitflip().mask >> n) != 0) ++n;
      return n;
    }
    return static_cast<int>(permutation().perm.size());
  }

  /// a(x) on basis indices; qubits beyond the symmetry's support are fixed.
  std::size_t apply(std::size_t x) const {
    if (is_bitflip()) return x ^ bitflip().mask;
    std::size_t y = x;
    for (auto [j, k] : *permutation().transpositions) {
      const std::size_t bj = (x >> j) & 1, bk = (x >> k) & 1;
      y &= ~((std::size_t{1} << j) | (std::size_t{1} << k));
      y |= (bk << j) | (bj << k);
    }
    return y;
  }

  std::string label() const {
    std::string s;
    if (is_bitflip()) {
      s = "bitflip{";
      const auto q = bitflip().qubits();
      for (std::size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + std::to_string(q[i]);
      return s + "}";
    }
    s = "swap";
    for (auto [j, k] : *permutation().transpositions) {
      s += "(" + std::to_string(j) + "," + std::to_string(k) + ")";
    }
    return s;
  }

  /// Same operator expressed on relabeled qubits (qubit q -> position[q]).
  SymmetryDescriptor relabeled(std::span<const int> position) const {
    if (is_bitflip()) {
      std::uint64_t m = 0;
      for (int q : bitflip().qubits()) m |= std::uint64_t{1} << position[static_cast<std::size_t>(q)];
      return BitFlipSymmetry{m};
    }
    int width = 0;
    for (int p : position) width = std::max(width, p + 1);
    PermutationSymmetry out;
    out.perm.resize(static_cast<std::size_t>(width));
    std::iota(out.perm.begin(), out.perm.end(), 0);
    for (auto [j, k] : *permutation().transpositions) {
      const int pj = position[static_cast<std::size_t>(j)], pk = position[static_cast<std::size_t>(k)];
      out.perm[static_cast<std::size_t>(pj)] = pk;
      out.perm[static_cast<std::size_t>(pk)] = pj;
    }
    return out;
  }

 private:
  std::variant<BitFlipSymmetry, PermutationSymmetry> op_;
};

// ---------------------------------------------------------------------------
// Discovery

/// Every nonempty node subset L whose boundary no edge crosses (unions of
/// connected components), ascending by mask. L and its complement are both
/// listed when both qualify.
inline std::vector<BitFlipSymmetry> find_bitflip_symmetries(const Graph& g) {
  std::vector<BitFlipSymmetry> out;
  const std::uint64_t full = (std::uint64_t{1} << g.n_nodes());
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    bool ok = true;
    for (auto [j, k] : g.edges()) {
      if (((mask >> j) ^ (mask >> k)) & 1) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back({mask});
  }
  return out;
}

/// All edge-preserving node permutations by brute force over S_n, in
/// lexicographic order (identity first).
inline std::vector<PermutationSymmetry> find_automorphisms(const Graph& g) {
  if (g.n_nodes() > 8) throw UsageError("automorphism brute force limited to 8 nodes");
  std::vector<int> perm(static_cast<std::size_t>(g.n_nodes()));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<PermutationSymmetry> out;
  do {
    bool ok = true;
    for (auto [j, k] : g.edges()) {
      if (!g.has_edge(perm[static_cast<std::size_t>(j)], perm[static_cast<std::size_t>(k)])) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back({perm, std::nullopt});
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

/// Keeps non-identity involutions (products of disjoint SWAPs), filling in
/// their transposition lists.
inline std::vector<PermutationSymmetry> filter_swap_representable(
    const std::vector<PermutationSymmetry>& perms) {
  std::vector<PermutationSymmetry> out;
  for (const auto& p : perms) {
    if (p.is_identity() || !p.is_involution()) continue;
    PermutationSymmetry q = p;
    q.transpositions = involution_transpositions(p.perm);
    out.push_back(std::move(q));
  }
  return out;
}

/// Lexicographically smallest non-identity involutive automorphism.
inline std::optional<PermutationSymmetry> default_permutation_symmetry(const Graph& g) {
  auto swaps = filter_swap_representable(find_automorphisms(g));
  if (swaps.empty()) return std::nullopt;
  return *std::min_element(swaps.begin(), swaps.end(),
                           [](const auto& a, const auto& b) { return a.perm < b.perm; });
}

inline BitFlipSymmetry global_bitflip(const Graph& g) {
  return {(std::uint64_t{1} << g.n_nodes()) - 1};
}

// ---------------------------------------------------------------------------
// Operator forms

/// A = sum_x |a(x)><x| on n qubits.
inline CMatrix symmetry_matrix(const SymmetryDescriptor& sym, int n) {
  if (sym.min_qubits() > n) throw UsageError("symmetry acts outside the register");
  const std::size_t dim = dim_of(n);
  CMatrix m = CMatrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t x = 0; x < dim; ++x) {
    m(static_cast<Eigen::Index>(sym.apply(x)), static_cast<Eigen::Index>(x)) = 1.0;
  }
  return m;
}

/// A commutes with the diagonal objective iff f(a(x)) = f(x) for all x.
inline bool check_commutes_with_objective(const SymmetryDescriptor& sym, const ObjectiveDiagonal& diag) {
  if (dim_of(sym.min_qubits()) > diag.values.size()) throw UsageError("symmetry wider than objective");
  for (std::size_t x = 0; x < diag.values.size(); ++x) {
    if (diag.values[sym.apply(x)] != diag.values[x]) return false;
  }
  return true;
}

/// H(anc), controlled-A, H(anc) on n + 1 qubits with the ancilla at index n.
/// Bit flips use one CX(anc -> j) per flipped qubit, permutations one
/// CSWAP(anc; j, k) per transposition.
inline Circuit build_verification_circuit(const SymmetryDescriptor& sym, int n) {
  if (sym.min_qubits() > n) throw UsageError("symmetry acts outside the register");
  Circuit c(n + 1, n);
  c.push(GateOp::h(n));
  if (sym.is_bitflip()) {
    for (int q : sym.bitflip().qubits()) c.push(GateOp::cx(n, q));
  } else {
    const auto& t = sym.permutation().transpositions;
    if (!t) throw UsageError("permutation symmetry has no transposition form");
    for (auto [j, k] : *t) c.push(GateOp::cswap(n, j, k));
  }
  c.push(GateOp::h(n));
  return c;
}

// ---------------------------------------------------------------------------
// Projection

/// M = (I + S) / 2 applied to rho, renormalized.
inline Projection ideal_project(const DensityMatrix& rho, const SymmetryDescriptor& sym) {
  const CMatrix s = symmetry_matrix(sym, rho.n_qubits());
  const auto d = s.rows();
  const CMatrix m = 0.5 * (CMatrix::Identity(d, d) + s);
  return project_and_renormalize(rho, m);
}

/// Keeps the ancilla (last qubit) = 0 branch and traces the ancilla out.
inline Projection circuit_postselect(const DensityMatrix& rho_with_ancilla) {
  if (rho_with_ancilla.n_qubits() < 2) throw UsageError("no ancilla qubit to postselect on");
  const auto half = static_cast<Eigen::Index>(rho_with_ancilla.dim() / 2);
  CMatrix kept = rho_with_ancilla.matrix().topLeftCorner(half, half);
  const double retention = kept.trace().real();
  if (!(retention > kMinRetention)) throw EmptyPostselection(retention);
  kept /= retention;
  return {DensityMatrix(std::move(kept)), retention};
}

/// Noiseless ancilla-circuit realization of the projection: append |0>,
/// run the verification fragment, postselect.
inline Projection verify_with_ancilla(const DensityMatrix& rho, const SymmetryDescriptor& sym) {
  const int n = rho.n_qubits();
  DensityMatrix ext = rho.tensor(DensityMatrix(StateVector(1, 0)));
  ext = simulate(build_verification_circuit(sym, n), std::move(ext));
  return circuit_postselect(ext);
}

/// Projects on the +1 eigenspaces of mutually commuting symmetries in list
/// order. Total retention is the product of the stage retentions.
inline Projection sequential_verify(const DensityMatrix& rho, const std::vector<SymmetryDescriptor>& syms) {
  const int n = rho.n_qubits();
  std::vector<CMatrix> mats;
  for (const auto& s : syms) mats.push_back(symmetry_matrix(s, n));
  for (std::size_t a = 0; a < mats.size(); ++a) {
    for (std::size_t b = a + 1; b < mats.size(); ++b) {
      if ((mats[a] * mats[b] - mats[b] * mats[a]).cwiseAbs().maxCoeff() > 1e-12) {
        throw ConfigError("symmetries " + syms[a].label() + " and " + syms[b].label() +
                          " do not commute");
      }
    }
  }
  Projection acc{rho, 1.0};
  for (const auto& s : syms) {
    auto stage = ideal_project(acc.state, s);
    acc.state = std::move(stage.state);
    acc.retention *= stage.retention;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Reporting

inline nlohmann::json symmetries_report(const NamedGraph& ng) {
  using nlohmann::json;
  const Graph& g = ng.graph;
  json masks = json::array();
  for (const auto& b : find_bitflip_symmetries(g)) masks.push_back(b.qubits());
  const auto autos = find_automorphisms(g);
  json swaps = json::array();
  for (const auto& p : filter_swap_representable(autos)) {
    json t = json::array();
    for (auto [j, k] : *p.transpositions) t.push_back({j, k});
    swaps.push_back({{"perm", p.perm}, {"transpositions", t}});
  }
  json out = {{"graph", ng.name},
              {"n", g.n_nodes()},
              {"bitflip_masks", masks},
              {"automorphism_count", autos.size()},
              {"swap_representable", swaps}};
  if (auto d = default_permutation_symmetry(g)) {
    out["default_permutation"] = SymmetryDescriptor(*d).label();
  } else {
    out["default_permutation"] = nullptr;
  }
  return out;
}

}  // namespace symqaoa
