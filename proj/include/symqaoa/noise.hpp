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

// Gate-attached error channels and readout-error mitigation.
//
// Depolarizing convention: rho -> (1 - p) rho + p I / 2^k ("replace with the
// maximally mixed state with probability p"). Rates quoted in other
// conventions (e.g. Pauli error probability) are not interchangeable.

#include <Eigen/SVD>

#include <array>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "symqaoa/circuit.hpp"
#include "symqaoa/sampling.hpp"
#include "symqaoa/state.hpp"
#include "symqaoa/transpile.hpp"

namespace symqaoa {

/// Per-qubit assignment errors: p01 = Pr(read 1 | prepared 0),
/// p10 = Pr(read 0 | prepared 1).
struct ReadoutError {
  double p01 = 0.0;
  double p10 = 0.0;
  bool operator==(const ReadoutError&) const = default;
};

/// Uniform gate-noise parameters. Times in seconds.
struct NoiseModel {
  double p_depol_1q = 0.0;
  double p_depol_2q = 0.0;
  double t1 = std::numeric_limits<double>::infinity();
  double t2 = std::numeric_limits<double>::infinity();
  double dur_1q = 35e-9;
  double dur_2q = 300e-9;
  std::vector<ReadoutError> readout;

  /// Representative superconducting-transmon values; not a device snapshot.
  static NoiseModel representative() {
    NoiseModel nm;
    nm.p_depol_1q = 3e-4;
    nm.p_depol_2q = 8e-3;
    nm.t1 = 120e-6;
    nm.t2 = 80e-6;
    nm.dur_1q = 35e-9;
    nm.dur_2q = 300e-9;
    return nm;
  }

  void validate() const {
    auto prob = [](double p, const char* what) {
      if (!(p >= 0.0 && p <= 1.0)) throw ConfigError(std::string(what) + " must lie in [0, 1]");
    };
    prob(p_depol_1q, "p_depol_1q");
    prob(p_depol_2q, "p_depol_2q");
    if (!(t1 > 0.0) || !(t2 > 0.0)) throw ConfigError("t1 and t2 must be positive");
    if (t2 > 2.0 * t1) throw ConfigError("t2 must not exceed 2 * t1");
    if (!(dur_1q > 0.0) || !(dur_2q > 0.0)) throw ConfigError("gate durations must be positive");
    for (const auto& r : readout) {
      prob(r.p01, "readout p01");
      prob(r.p10, "readout p10");
    }
  }

  bool has_readout_error() const {
    for (const auto& r : readout) {
      if (r.p01 > 0.0 || r.p10 > 0.0) return true;
    }
    return false;
  }

  bool operator==(const NoiseModel&) const = default;
};

namespace detail {

inline std::array<CMatrix, 4> paulis() {
  using namespace std::complex_literals;
  CMatrix i = CMatrix::Identity(2, 2), x(2, 2), y(2, 2), z(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  y << 0.0, -1i, 1i, 0.0;
  z << 1.0, 0.0, 0.0, -1.0;
  return {i, x, y, z};
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

}  // namespace detail

/// rho -> (1 - p) rho + p I / 2^arity, as sqrt(1 - (d^2 - 1) p / d^2) I plus
/// the d^2 - 1 non-identity Paulis weighted sqrt(p / d^2).
inline KrausChannel depolarizing_channel(double p, int arity) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("depolarizing probability must lie in [0, 1]");
  if (arity != 1 && arity != 2) throw UsageError("depolarizing channel arity must be 1 or 2");
  const Eigen::Index d = arity == 1 ? 2 : 4;
  if (p == 0.0) return KrausChannel::identity(arity);
  const double d2 = static_cast<double>(d * d);
  const auto pauli = detail::paulis();
  std::vector<CMatrix> ops;
  ops.push_back(std::sqrt(1.0 - (d2 - 1.0) * p / d2) * CMatrix::Identity(d, d));
  const double w = std::sqrt(p / d2);
  if (arity == 1) {
    for (int a = 1; a < 4; ++a) ops.push_back(w * pauli[static_cast<std::size_t>(a)]);
  } else {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        if (a == 0 && b == 0) continue;
        ops.push_back(w * detail::kron(pauli[static_cast<std::size_t>(b)], pauli[static_cast<std::size_t>(a)]));
      }
    }
  }
  return KrausChannel(std::move(ops));
}

/// Amplitude damping with gamma = 1 - exp(-duration / t1) followed by pure
/// dephasing sized so that coherences decay by exactly exp(-duration / t2).
inline KrausChannel thermal_relaxation_channel(double t1, double t2, double duration) {
  if (!(t1 > 0.0) || !(t2 > 0.0)) throw ConfigError("t1 and t2 must be positive");
  if (t2 > 2.0 * t1) throw ConfigError("t2 must not exceed 2 * t1");
  if (!(duration >= 0.0)) throw ConfigError("duration must be nonnegative");
  const double keep_pop = std::exp(-duration / t1);              // 1 - gamma
  const double coherence = std::exp(-duration / t2);             // total off-diagonal factor
  const double dephase = std::min(1.0, coherence / std::sqrt(keep_pop));  // sqrt(1 - lambda)
  const double gamma = 1.0 - keep_pop;
  const double lambda = 1.0 - dephase * dephase;

  std::vector<CMatrix> ops;
  CMatrix k0 = CMatrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(keep_pop) * dephase;
  ops.push_back(k0);
  if (gamma > 0.0) {
    CMatrix k1 = CMatrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(gamma);
    ops.push_back(k1);
  }
  if (lambda > 0.0) {
    CMatrix k2 = CMatrix::Zero(2, 2);
    k2(1, 1) = std::sqrt(lambda * keep_pop);
    ops.push_back(k2);
  }
  return KrausChannel(std::move(ops));
}

/// Runs the CX-basis form of `circ`. After every single-qubit gate the target
/// gets depolarizing(p_depol_1q) then thermal relaxation over dur_1q; after
/// every CX the pair gets two-qubit depolarizing(p_depol_2q). Idle qubits are
/// noiseless and readout error is not applied here.
inline DensityMatrix apply_noisy_circuit(const Circuit& circ, const NoiseModel& nm, DensityMatrix rho) {
  nm.validate();
  if (rho.n_qubits() != circ.n_qubits) throw UsageError("circuit/state width mismatch");
  const Circuit basis = decompose_to_cx_basis(circ);
  const KrausChannel depol1 = depolarizing_channel(nm.p_depol_1q, 1);
  const KrausChannel depol2 = depolarizing_channel(nm.p_depol_2q, 2);
  const KrausChannel relax = thermal_relaxation_channel(nm.t1, nm.t2, nm.dur_1q);
  const bool noisy1 = nm.p_depol_1q > 0.0, noisy2 = nm.p_depol_2q > 0.0;
  const bool relaxing = relax.operators().size() > 1;
  for (const auto& op : basis.ops) {
    apply_gate(rho, op);
    if (op.targets.size() == 1) {
      if (noisy1) apply_channel(rho, depol1, op.targets);
      if (relaxing) apply_channel(rho, relax, op.targets);
    } else if (noisy2) {
      apply_channel(rho, depol2, op.targets);
    }
  }
  return rho;
}

// ---------------------------------------------------------------------------
// Readout

/// Column-stochastic assignment matrix, m(j, i) = Pr(read j | true i).
struct CalibrationMatrix {
  Eigen::MatrixXd m;

  int n_qubits() const { return qubits_of_dim(static_cast<std::size_t>(m.rows())); }
};

/// Tensor product of the per-qubit 2x2 assignment matrices (qubit q is bit q).
/// An empty `readout` means error-free readout.
inline CalibrationMatrix build_calibration_matrix(std::span<const ReadoutError> readout, int n) {
  if (n < 1 || n > kMaxQubits) throw ConfigError("calibration qubit count out of range");
  if (!readout.empty() && static_cast<int>(readout.size()) != n) {
    throw ConfigError("readout list has " + std::to_string(readout.size()) + " entries, expected " +
                      std::to_string(n));
  }
  const std::size_t dim = dim_of(n);
  CalibrationMatrix cal{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim))};
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      double p = 1.0;
      for (int q = 0; q < n; ++q) {
        const ReadoutError e = readout.empty() ? ReadoutError{} : readout[static_cast<std::size_t>(q)];
        const bool ti = (i >> q) & 1, rj = (j >> q) & 1;
        if (!ti) p *= rj ? e.p01 : 1.0 - e.p01;
        else p *= rj ? 1.0 - e.p10 : e.p10;
      }
      cal.m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = p;
    }
  }
  return cal;
}

/// Samples outcomes of a readout with assignment matrix `cal` applied to the
/// true distribution `probs`.
inline Counts apply_readout_error(std::span<const double> probs, const CalibrationMatrix& cal,
                                  std::uint64_t shots, std::uint64_t seed) {
  if (static_cast<Eigen::Index>(probs.size()) != cal.m.cols()) {
    throw UsageError("calibration/probability dimension mismatch");
  }
  const Eigen::VectorXd p = Eigen::Map<const Eigen::VectorXd>(probs.data(), static_cast<Eigen::Index>(probs.size()));
  const Eigen::VectorXd observed = cal.m * p;
  std::vector<double> obs(observed.data(), observed.data() + observed.size());
  return sample_counts(obs, shots, seed);
}

struct MitigationResult {
  std::vector<double> quasi;  // nonnegative, sums to 1
  double condition_number = 0.0;
  bool ill_conditioned = false;  // condition number above 1e6
};

/// Least-squares solve of cal * q = frequencies, negatives clipped to 0,
/// renormalized.
inline MitigationResult mitigate_distribution(std::span<const double> frequencies, const CalibrationMatrix& cal) {
  if (static_cast<Eigen::Index>(frequencies.size()) != cal.m.rows()) {
    throw UsageError("calibration/frequency dimension mismatch");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cal.m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double smax = sv(0), smin = sv(sv.size() - 1);
  if (!(smin > 1e-12 * smax)) throw ConfigError("calibration matrix is singular");
  MitigationResult out;
  out.condition_number = smax / smin;
  out.ill_conditioned = out.condition_number > 1e6;
  const Eigen::VectorXd f = Eigen::Map<const Eigen::VectorXd>(frequencies.data(), static_cast<Eigen::Index>(frequencies.size()));
  const Eigen::VectorXd q = svd.solve(f);
  out.quasi.resize(static_cast<std::size_t>(q.size()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    out.quasi[static_cast<std::size_t>(i)] = std::max(0.0, q(i));
    total += out.quasi[static_cast<std::size_t>(i)];
  }
  if (!(total > 0.0)) throw SimulationError("mitigated distribution vanished after clipping");
  for (double& v : out.quasi) v /= total;
  return out;
}

inline MitigationResult mitigate_counts(const Counts& counts, const CalibrationMatrix& cal) {
  const std::uint64_t shots = total_shots(counts);
  if (shots == 0) throw UsageError("cannot mitigate empty counts");
  std::vector<double> freq(static_cast<std::size_t>(cal.m.rows()), 0.0);
  const int n = cal.n_qubits();
  for (const auto& [bits, c] : counts) {
    if (static_cast<int>(bits.size()) != n) throw UsageError("bitstring width does not match calibration");
    freq[bitstring_to_index(bits)] += static_cast<double>(c) / static_cast<double>(shots);
  }
  auto out = mitigate_distribution(freq, cal);
  if (out.ill_conditioned) {
    std::cerr << "warning: calibration matrix condition number " << out.condition_number << "\n";
  }
  return out;
}

}  // namespace symqaoa
