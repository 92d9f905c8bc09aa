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

// Dense statevector / density-matrix simulation primitives.
//
// Qubit i is bit i of the basis-state index (little-endian). Gates act on an
// ordered target list; local gate matrices use the same convention, so bit b
// of a local index refers to targets[b].

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symqaoa/errors.hpp"

namespace symqaoa {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr int kMaxQubits = 12;

inline std::size_t dim_of(int n_qubits) { return std::size_t{1} << n_qubits; }

inline int qubits_of_dim(std::size_t dim) {
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim) {
    throw UsageError("dimension " + std::to_string(dim) + " is not a power of two");
  }
  return n;
}

// ---------------------------------------------------------------------------
// Gates

enum class GateKind { H, RX, RZ, RZZ, CX, SWAP, CSWAP, X };

inline int arity(GateKind kind) {
  switch (kind) {
    case GateKind::H:
    case GateKind::RX:
    case GateKind::RZ:
    case GateKind::X:
      return 1;
    case GateKind::RZZ:
    case GateKind::CX:
    case GateKind::SWAP:
      return 2;
    case GateKind::CSWAP:
      return 3;
  }
  return 0;
}

inline bool has_angle(GateKind kind) {
  return kind == GateKind::RX || kind == GateKind::RZ || kind == GateKind::RZZ;
}

inline std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::H: return "h";
    case GateKind::RX: return "rx";
    case GateKind::RZ: return "rz";
    case GateKind::RZZ: return "rzz";
    case GateKind::CX: return "cx";
    case GateKind::SWAP: return "swap";
    case GateKind::CSWAP: return "cswap";
    case GateKind::X: return "x";
  }
  return "?";
}

/// One gate application. For CX the targets are {control, target}; for CSWAP
/// {control, a, b}.
struct GateOp {
  GateKind kind = GateKind::H;
  std::vector<int> targets;
  double angle = 0.0;

  static GateOp h(int q) { return {GateKind::H, {q}, 0.0}; }
  static GateOp x(int q) { return {GateKind::X, {q}, 0.0}; }
  static GateOp rx(int q, double theta) { return {GateKind::RX, {q}, theta}; }
  static GateOp rz(int q, double theta) { return {GateKind::RZ, {q}, theta}; }
  static GateOp rzz(int a, int b, double theta) { return {GateKind::RZZ, {a, b}, theta}; }
  static GateOp cx(int control, int target) { return {GateKind::CX, {control, target}, 0.0}; }
  static GateOp swap(int a, int b) { return {GateKind::SWAP, {a, b}, 0.0}; }
  static GateOp cswap(int control, int a, int b) {
    return {GateKind::CSWAP, {control, a, b}, 0.0};
  }

  bool operator==(const GateOp&) const = default;
};

/// Throws UsageError unless the target list fits the gate's arity, is
/// duplicate-free, and stays below `n_qubits`.
inline void validate_gate(const GateOp& gate, int n_qubits) {
  if (static_cast<int>(gate.targets.size()) != arity(gate.kind)) {
    throw UsageError("gate " + gate_name(gate.kind) + " expects " +
                     std::to_string(arity(gate.kind)) + " targets");
  }
  for (std::size_t i = 0; i < gate.targets.size(); ++i) {
    const int t = gate.targets[i];
    if (t < 0 || t >= n_qubits) {
      throw UsageError("gate " + gate_name(gate.kind) + " target " + std::to_string(t) +
                       " out of range for " + std::to_string(n_qubits) + " qubits");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (gate.targets[j] == t) throw UsageError("gate targets must be distinct");
    }
  }
}

namespace detail {

template <typename F>
CMatrix permutation_matrix(std::size_t dim, F&& image) {
  CMatrix m = CMatrix::Zero(dim, dim);
  for (std::size_t col = 0; col < dim; ++col) m(image(col), col) = 1.0;
  return m;
}

}  // namespace detail

/// Local unitary of a gate in the targets-ordered basis.
inline CMatrix gate_matrix(const GateOp& gate) {
  using namespace std::complex_literals;
  const double half = gate.angle / 2.0;
  switch (gate.kind) {
    case GateKind::H: {
      const double s = 1.0 / std::numbers::sqrt2;
      CMatrix m(2, 2);
      m << s, s, s, -s;
      return m;
    }
    case GateKind::X: {
      CMatrix m(2, 2);
      m << 0.0, 1.0, 1.0, 0.0;
      return m;
    }
    case GateKind::RX: {
      CMatrix m(2, 2);
      m << std::cos(half), -1i * std::sin(half), -1i * std::sin(half), std::cos(half);
      return m;
    }
    case GateKind::RZ: {
      CMatrix m = CMatrix::Zero(2, 2);
      m(0, 0) = std::exp(-1i * half);
      m(1, 1) = std::exp(1i * half);
      return m;
    }
    case GateKind::RZZ: {
      CMatrix m = CMatrix::Zero(4, 4);
      for (int l = 0; l < 4; ++l) {
        const bool odd = ((l & 1) ^ (l >> 1)) != 0;
        m(l, l) = std::exp((odd ? 1i : -1i) * half);
      }
      return m;
    }
    case GateKind::CX:
      return detail::permutation_matrix(4, [](std::size_t l) { return (l & 1) ? l ^ 2 : l; });
    case GateKind::SWAP:
      return detail::permutation_matrix(
          4, [](std::size_t l) { return ((l & 1) << 1) | ((l >> 1) & 1); });
    case GateKind::CSWAP:
      return detail::permutation_matrix(8, [](std::size_t l) {
        if (!(l & 1)) return l;
        const std::size_t a = (l >> 1) & 1, b = (l >> 2) & 1;
        return std::size_t{1} | (b << 1) | (a << 2);
      });
  }
  throw UsageError("unknown gate kind");
}

namespace detail {

// m <- U m, where U acts on `targets` of every column of m.
template <typename Derived>
void apply_local_left(Eigen::MatrixBase<Derived>& m, const CMatrix& u,
                      std::span<const int> targets) {
  const std::size_t local_dim = std::size_t{1} << targets.size();
  const auto dim = static_cast<std::size_t>(m.rows());
  std::size_t target_mask = 0;
  for (int t : targets) target_mask |= std::size_t{1} << t;
  std::vector<std::size_t> offsets(local_dim, 0);
  for (std::size_t l = 0; l < local_dim; ++l) {
    for (std::size_t b = 0; b < targets.size(); ++b) {
      if ((l >> b) & 1) offsets[l] |= std::size_t{1} << targets[b];
    }
  }
  std::vector<Complex> in(local_dim), out(local_dim);
  for (Eigen::Index col = 0; col < m.cols(); ++col) {
    for (std::size_t base = 0; base < dim; ++base) {
      if (base & target_mask) continue;
      for (std::size_t l = 0; l < local_dim; ++l) in[l] = m(base | offsets[l], col);
      for (std::size_t r = 0; r < local_dim; ++r) {
        Complex acc = 0.0;
        for (std::size_t l = 0; l < local_dim; ++l) acc += u(r, l) * in[l];
        out[r] = acc;
      }
      for (std::size_t l = 0; l < local_dim; ++l) m(base | offsets[l], col) = out[l];
    }
  }
}

// Returns U rho U^dagger with U local on `targets`.
inline CMatrix conjugate_local(const CMatrix& rho, const CMatrix& u, std::span<const int> targets) {
  CMatrix left = rho;
  apply_local_left(left, u, targets);
  CMatrix adj = left.adjoint();
  apply_local_left(adj, u, targets);
  return adj.adjoint();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// States

class StateVector {
 public:
  StateVector() = default;

  /// Basis state |index>.
  StateVector(int n_qubits, std::size_t index) : n_qubits_(n_qubits) {
    check_qubits(n_qubits);
    amplitudes_ = CVector::Zero(static_cast<Eigen::Index>(dim_of(n_qubits)));
    if (index >= dim_of(n_qubits)) throw UsageError("basis index out of range");
    amplitudes_(static_cast<Eigen::Index>(index)) = 1.0;
  }

  explicit StateVector(CVector amplitudes)
      : n_qubits_(qubits_of_dim(static_cast<std::size_t>(amplitudes.size()))),
        amplitudes_(std::move(amplitudes)) {
    check_qubits(n_qubits_);
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }
  CVector& amplitudes() { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }
  double norm() const { return amplitudes_.norm(); }

  static void check_qubits(int n) {
    if (n < 1 || n > kMaxQubits) {
      throw ConfigError("qubit count " + std::to_string(n) + " outside [1, " +
                        std::to_string(kMaxQubits) + "]");
    }
  }

 private:
  int n_qubits_ = 0;
  CVector amplitudes_;
};

class DensityMatrix {
 public:
  DensityMatrix() = default;

  explicit DensityMatrix(CMatrix elements)
      : n_qubits_(qubits_of_dim(static_cast<std::size_t>(elements.rows()))),
        elements_(std::move(elements)) {
    if (elements_.rows() != elements_.cols()) throw UsageError("density matrix must be square");
    StateVector::check_qubits(n_qubits_);
  }

  explicit DensityMatrix(const StateVector& psi)
      : n_qubits_(psi.n_qubits()), elements_(psi.amplitudes() * psi.amplitudes().adjoint()) {}

  static DensityMatrix maximally_mixed(int n_qubits) {
    StateVector::check_qubits(n_qubits);
    const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
    return DensityMatrix(CMatrix::Identity(d, d) / static_cast<double>(d));
  }

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(elements_.rows()); }
  const CMatrix& matrix() const { return elements_; }
  CMatrix& matrix() { return elements_; }
  Complex operator()(std::size_t r, std::size_t c) const {
    return elements_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  double trace() const { return elements_.trace().real(); }

  /// this (x) other, with `other` occupying the higher-index qubits.
  DensityMatrix tensor(const DensityMatrix& other) const {
    const Eigen::Index d = elements_.rows();
    const Eigen::Index e = other.elements_.rows();
    CMatrix out(d * e, d * e);
    for (Eigen::Index i = 0; i < e; ++i) {
      for (Eigen::Index j = 0; j < e; ++j) {
        out.block(i * d, j * d, d, d) = other.elements_(i, j) * elements_;
      }
    }
    return DensityMatrix(std::move(out));
  }

 private:
  int n_qubits_ = 0;
  CMatrix elements_;
};

/// |+>^n.
inline StateVector init_plus_state(int n_qubits) {
  StateVector::check_qubits(n_qubits);
  const auto d = static_cast<Eigen::Index>(dim_of(n_qubits));
  return StateVector(CVector::Constant(d, Complex(std::pow(2.0, -0.5 * n_qubits), 0.0)));
}

inline void apply_gate(StateVector& psi, const GateOp& gate) {
  validate_gate(gate, psi.n_qubits());
  detail::apply_local_left(psi.amplitudes(), gate_matrix(gate), gate.targets);
}

inline void apply_gate(DensityMatrix& rho, const GateOp& gate) {
  validate_gate(gate, rho.n_qubits());
  rho.matrix() = detail::conjugate_local(rho.matrix(), gate_matrix(gate), gate.targets);
}

template <typename State>
void apply_gates(State& state, std::span<const GateOp> gates) {
  for (const auto& g : gates) apply_gate(state, g);
}

// ---------------------------------------------------------------------------
// Channels

/// Completely positive trace-preserving map in Kraus form on 1 or 2 qubits.
class KrausChannel {
 public:
  static constexpr double kCompletenessTol = 1e-9;

  explicit KrausChannel(std::vector<CMatrix> operators) : operators_(std::move(operators)) {
    if (operators_.empty()) throw ConfigError("Kraus channel needs at least one operator");
    const Eigen::Index d = operators_.front().rows();
    if (d != 2 && d != 4) throw ConfigError("Kraus operators must act on 1 or 2 qubits");
    CMatrix sum = CMatrix::Zero(d, d);
    for (const auto& k : operators_) {
      if (k.rows() != d || k.cols() != d) {
        throw ConfigError("Kraus operators must share one square dimension");
      }
      sum += k.adjoint() * k;
    }
    const double err = (sum - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (err > kCompletenessTol) {
      throw ConfigError("Kraus operators are not trace preserving (deviation " +
                        std::to_string(err) + ")");
    }
    arity_ = d == 2 ? 1 : 2;
  }

  static KrausChannel identity(int arity) {
    const Eigen::Index d = arity == 1 ? 2 : 4;
    return KrausChannel({CMatrix::Identity(d, d)});
  }

  int arity() const { return arity_; }
  const std::vector<CMatrix>& operators() const { return operators_; }

 private:
  std::vector<CMatrix> operators_;
  int arity_ = 1;
};

inline void apply_channel(DensityMatrix& rho, const KrausChannel& channel,
                          std::span<const int> targets) {
  if (static_cast<int>(targets.size()) != channel.arity()) {
    throw UsageError("channel arity does not match target count");
  }
  GateOp probe{channel.arity() == 1 ? GateKind::H : GateKind::CX,
               {targets.begin(), targets.end()}, 0.0};
  validate_gate(probe, rho.n_qubits());
  if (channel.operators().size() == 1) {
    rho.matrix() = detail::conjugate_local(rho.matrix(), channel.operators().front(), targets);
    return;
  }
  CMatrix acc = CMatrix::Zero(rho.matrix().rows(), rho.matrix().cols());
  for (const auto& k : channel.operators()) {
    acc += detail::conjugate_local(rho.matrix(), k, targets);
  }
  rho.matrix() = std::move(acc);
}

// ---------------------------------------------------------------------------
// Measurement, projection, reduction

/// <psi|rho|psi>, clamped to [0, 1].
inline double fidelity_pure(const DensityMatrix& rho, const StateVector& psi) {
  if (rho.dim() != psi.dim()) throw UsageError("fidelity: dimension mismatch");
  const Complex f = psi.amplitudes().dot(rho.matrix() * psi.amplitudes());
  return std::clamp(f.real(), 0.0, 1.0);
}

struct Projection {
  DensityMatrix state;
  double retention = 0.0;
};

inline constexpr double kMinRetention = 1e-12;

/// Applies a projective measurement outcome M and renormalizes:
/// rho -> M rho M / Tr[M rho M].
inline Projection project_and_renormalize(const DensityMatrix& rho, const CMatrix& projector) {
  if (projector.rows() != static_cast<Eigen::Index>(rho.dim()) ||
      projector.cols() != projector.rows()) {
    throw UsageError("projector dimension mismatch");
  }
  if ((projector * projector - projector).cwiseAbs().maxCoeff() > 1e-9 ||
      (projector - projector.adjoint()).cwiseAbs().maxCoeff() > 1e-9) {
    throw UsageError("projector must be Hermitian and idempotent");
  }
  CMatrix kept = projector * rho.matrix() * projector;
  const double retention = kept.trace().real();
  if (!(retention > kMinRetention)) throw EmptyPostselection(retention);
  kept /= retention;
  return {DensityMatrix(std::move(kept)), retention};
}

/// Born-rule outcome distribution.
inline std::vector<double> measurement_probabilities(const StateVector& psi) {
  std::vector<double> p(psi.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(psi[i]);
  return p;
}

inline std::vector<double> measurement_probabilities(const DensityMatrix& rho) {
  std::vector<double> p(rho.dim());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::max(0.0, rho(i, i).real());
  return p;
}

inline DensityMatrix partial_trace_last_qubit(const DensityMatrix& rho) {
  if (rho.n_qubits() < 2) throw UsageError("partial trace needs at least 2 qubits");
  const auto half = static_cast<Eigen::Index>(rho.dim() / 2);
  CMatrix out = rho.matrix().topLeftCorner(half, half) + rho.matrix().bottomRightCorner(half, half);
  return DensityMatrix(std::move(out));
}

/// Projects qubit `q` onto |0> and renormalizes; the qubit stays in the
/// register (now exactly |0><0|).
inline Projection postselect_qubit_zero(const DensityMatrix& rho, int q) {
  if (q < 0 || q >= rho.n_qubits()) throw UsageError("postselect qubit out of range");
  const std::size_t bit = std::size_t{1} << q;
  CMatrix kept = rho.matrix();
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      if ((r & bit) || (c & bit)) kept(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = 0.0;
    }
  }
  const double retention = kept.trace().real();
  if (!(retention > kMinRetention)) throw EmptyPostselection(retention);
  kept /= retention;
  return {DensityMatrix(std::move(kept)), retention};
}

/// Relabels qubits: qubit q of the input becomes qubit new_position[q].
inline DensityMatrix permute_qubits(const DensityMatrix& rho, std::span<const int> new_position) {
  const int n = rho.n_qubits();
  if (static_cast<int>(new_position.size()) != n) throw UsageError("permutation size mismatch");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int p : new_position) {
    if (p < 0 || p >= n || seen[static_cast<std::size_t>(p)]) {
      throw UsageError("not a permutation of qubit indices");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
  std::vector<Eigen::Index> image(rho.dim());
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    std::size_t j = 0;
    for (int q = 0; q < n; ++q) {
      if ((i >> q) & 1) j |= std::size_t{1} << new_position[static_cast<std::size_t>(q)];
    }
    image[i] = static_cast<Eigen::Index>(j);
  }
  CMatrix out(rho.matrix().rows(), rho.matrix().cols());
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      out(image[r], image[c]) = rho.matrix()(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  return DensityMatrix(std::move(out));
}

}  // namespace symqaoa
