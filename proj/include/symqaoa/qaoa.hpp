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

// QAOA for MaxCut: circuit construction, exact and sampled objective
// evaluation, and a multistart derivative-free parameter search.
//
// Phase separator U_C(gamma) = exp(-i gamma C) is realized per edge as
// RZZ(-gamma) (the identity part of C only contributes a global phase);
// mixer U_B(beta) = exp(-i beta sum X) as RX(2 beta) on every qubit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "symqaoa/circuit.hpp"
#include "symqaoa/maxcut.hpp"
#include "symqaoa/sampling.hpp"
#include "symqaoa/state.hpp"

namespace symqaoa {

struct QaoaParams {
  std::vector<double> betas;
  std::vector<double> gammas;

  QaoaParams() = default;
  QaoaParams(std::vector<double> b, std::vector<double> g) : betas(std::move(b)), gammas(std::move(g)) {
    validate();
  }

  static QaoaParams zeros(int p) {
    return {std::vector<double>(static_cast<std::size_t>(p), 0.0),
            std::vector<double>(static_cast<std::size_t>(p), 0.0)};
  }

  int p() const { return static_cast<int>(betas.size()); }

  void validate() const {
    if (betas.empty()) throw UsageError("QAOA needs at least one layer");
    if (betas.size() != gammas.size()) throw UsageError("beta/gamma length mismatch");
  }

  bool operator==(const QaoaParams&) const = default;
};

/// One layer: RZZ(-gamma) on every edge (sorted order), then RX(2 beta) on
/// every qubit.
inline Circuit build_qaoa_layer(const Graph& g, double gamma, double beta, int width = 0) {
  Circuit c(std::max(width, g.n_nodes()));
  for (auto [j, k] : g.edges()) c.push(GateOp::rzz(j, k, -gamma));
  for (int q = 0; q < g.n_nodes(); ++q) c.push(GateOp::rx(q, 2.0 * beta));
  return c;
}

inline Circuit build_initial_layer(const Graph& g, int width = 0) {
  Circuit c(std::max(width, g.n_nodes()));
  for (int q = 0; q < g.n_nodes(); ++q) c.push(GateOp::h(q));
  return c;
}

/// Full ansatz acting on |0...0>: Hadamards, then p alternating layers.
inline Circuit build_qaoa_circuit(const Graph& g, const QaoaParams& params) {
  params.validate();
  Circuit c = build_initial_layer(g);
  for (int k = 0; k < params.p(); ++k) {
    c.append(build_qaoa_layer(g, params.gammas[static_cast<std::size_t>(k)],
                              params.betas[static_cast<std::size_t>(k)]));
  }
  return c;
}

inline StateVector qaoa_state(const Graph& g, const QaoaParams& params) {
  return simulate(build_qaoa_circuit(g, params), StateVector(g.n_nodes(), 0));
}

/// Noiseless <C> from statevector simulation of the ansatz circuit.
inline double exact_expectation(const Graph& g, const QaoaParams& params) {
  const auto probs = measurement_probabilities(qaoa_state(g, params));
  return objective_diagonal(g).expectation(probs);
}

// ---------------------------------------------------------------------------
// Sampled statistics

struct SampleStats {
  double mean = 0.0;
  double stddev = 0.0;
  double pr_opt = 0.0;
};

/// Mean, sample standard deviation (n - 1 normalization) and fraction of
/// optimal strings over the shots in `counts`.
inline SampleStats sample_statistics(const Counts& counts, const ObjectiveDiagonal& diag) {
  const std::uint64_t shots = total_shots(counts);
  if (shots == 0) throw UsageError("sample statistics need at least one shot");
  double sum = 0.0;
  std::uint64_t opt = 0;
  for (const auto& [bits, c] : counts) {
    const std::size_t x = bitstring_to_index(bits);
    if (x >= diag.values.size()) throw UsageError("bitstring wider than objective");
    sum += static_cast<double>(c) * diag.values[x];
    if (diag.is_maximizer(x)) opt += c;
  }
  const double mean = sum / static_cast<double>(shots);
  double ss = 0.0;
  for (const auto& [bits, c] : counts) {
    const double dev = diag.values[bitstring_to_index(bits)] - mean;
    ss += static_cast<double>(c) * dev * dev;
  }
  const double var = shots > 1 ? ss / static_cast<double>(shots - 1) : 0.0;
  return {mean, std::sqrt(var), static_cast<double>(opt) / static_cast<double>(shots)};
}

/// Same figures for a (quasi-)probability vector, e.g. after readout
/// mitigation; stddev is the population value.
inline SampleStats distribution_statistics(std::span<const double> probs,
                                           const ObjectiveDiagonal& diag) {
  const double mean = diag.expectation(probs);
  double var = 0.0, opt = 0.0;
  for (std::size_t x = 0; x < probs.size(); ++x) {
    var += probs[x] * (diag.values[x] - mean) * (diag.values[x] - mean);
    if (diag.is_maximizer(x)) opt += probs[x];
  }
  return {mean, std::sqrt(std::max(0.0, var)), std::clamp(opt, 0.0, 1.0)};
}

// ---------------------------------------------------------------------------
// Parameter search

struct OptimizerConfig {
  int grid_points = 16;
  int n_starts = 50;
  double refine_tol = 1e-6;
  std::uint64_t seed = 0;
  int max_evals_per_start = 20000;
};

struct OptimizationResult {
  QaoaParams params;
  double expectation = 0.0;
};

namespace detail {

// Fast <C> evaluator working directly on the objective diagonal. Used only by
// the search loop; exact_expectation() goes through the gate-level circuit.
class ExpectationEvaluator {
 public:
  explicit ExpectationEvaluator(const Graph& g)
      : n_(g.n_nodes()), diag_(objective_diagonal(g)), psi_(dim_of(n_)) {}

  double operator()(std::span<const double> gammas, std::span<const double> betas) {
    const std::size_t dim = psi_.size();
    const Complex amp0(std::pow(2.0, -0.5 * n_), 0.0);
    std::fill(psi_.begin(), psi_.end(), amp0);
    for (std::size_t k = 0; k < gammas.size(); ++k) {
      for (std::size_t x = 0; x < dim; ++x) {
        psi_[x] *= std::polar(1.0, -gammas[k] * diag_.values[x]);
      }
      const double c = std::cos(betas[k]), s = std::sin(betas[k]);
      const Complex mis(0.0, -s);
      for (int q = 0; q < n_; ++q) {
        const std::size_t bit = std::size_t{1} << q;
        for (std::size_t x = 0; x < dim; ++x) {
          if (x & bit) continue;
          const Complex a = psi_[x], b = psi_[x | bit];
          psi_[x] = c * a + mis * b;
          psi_[x | bit] = mis * a + c * b;
        }
      }
    }
    double e = 0.0;
    for (std::size_t x = 0; x < dim; ++x) e += std::norm(psi_[x]) * diag_.values[x];
    return e;
  }

  double max_value() const { return diag_.max_value; }

 private:
  int n_;
  ObjectiveDiagonal diag_;
  std::vector<Complex> psi_;
};

// Vector layout used by the search: (gamma_1..gamma_p, beta_1..beta_p).
inline std::vector<double> to_vector(const QaoaParams& params) {
  std::vector<double> v(params.gammas);
  v.insert(v.end(), params.betas.begin(), params.betas.end());
  return v;
}

inline QaoaParams from_vector(std::span<const double> v) {
  const std::size_t p = v.size() / 2;
  return {std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(p), v.end()),
          std::vector<double>(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(p))};
}

// gamma -> [0, 2 pi), beta -> [0, pi); <C> is periodic with these periods.
inline void canonicalize(std::vector<double>& v) {
  const std::size_t p = v.size() / 2;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double period = i < p ? 2.0 * std::numbers::pi : std::numbers::pi;
    double r = std::fmod(v[i], period);
    if (r < 0) r += period;
    if (r >= period) r = 0.0;
    v[i] = r;
  }
}

struct SimplexResult {
  std::vector<double> x;
  double value = 0.0;  // maximized objective
};

// Nelder-Mead maximization.
template <typename F>
SimplexResult nelder_mead_maximize(F&& f, std::vector<double> start, double step, double tol,
                                   int max_evals) {
  const std::size_t dim = start.size();
  std::vector<std::vector<double>> pts(dim + 1, start);
  for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += step;
  std::vector<double> vals(dim + 1);
  int evals = 0;
  auto eval = [&](const std::vector<double>& x) {
    ++evals;
    return -f(x);
  };
  for (std::size_t i = 0; i <= dim; ++i) vals[i] = eval(pts[i]);

  std::vector<std::size_t> order(dim + 1);
  while (evals < max_evals) {
    for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return vals[a] < vals[b] || (vals[a] == vals[b] && a < b);
    });
    const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];

    double spread = 0.0;
    for (std::size_t i = 0; i <= dim; ++i) {
      for (std::size_t d = 0; d < dim; ++d) {
        spread = std::max(spread, std::abs(pts[i][d] - pts[best][d]));
      }
    }
    if (spread < tol && vals[worst] - vals[best] < 1e-12) break;

    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == worst) continue;
      for (std::size_t d = 0; d < dim; ++d) centroid[d] += pts[i][d] / static_cast<double>(dim);
    }
    auto along = [&](double t) {
      std::vector<double> x(dim);
      for (std::size_t d = 0; d < dim; ++d) x[d] = centroid[d] + t * (pts[worst][d] - centroid[d]);
      return x;
    };

    auto reflected = along(-1.0);
    const double fr = eval(reflected);
    if (fr < vals[best]) {
      auto expanded = along(-2.0);
      const double fe = eval(expanded);
      if (fe < fr) {
        pts[worst] = std::move(expanded);
        vals[worst] = fe;
      } else {
        pts[worst] = std::move(reflected);
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second]) {
      pts[worst] = std::move(reflected);
      vals[worst] = fr;
      continue;
    }
    const bool outside = fr < vals[worst];
    auto contracted = along(outside ? -0.5 : 0.5);
    const double fc = eval(contracted);
    if (fc < (outside ? fr : vals[worst])) {
      pts[worst] = std::move(contracted);
      vals[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= dim; ++i) {
      if (i == best) continue;
      for (std::size_t d = 0; d < dim; ++d) pts[i][d] = pts[best][d] + 0.5 * (pts[i][d] - pts[best][d]);
      vals[i] = eval(pts[i]);
    }
  }
  const auto best = static_cast<std::size_t>(std::min_element(vals.begin(), vals.end()) - vals.begin());
  return {pts[best], -vals[best]};
}

// Lexicographic comparison used to break ties between equal optima.
inline bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace detail

/// Multistart search for parameters maximizing <C> at depth p.
///
/// p = 1 starts from the best points of a grid_points^2 grid over
/// gamma in [0, 2 pi), beta in [0, pi). p >= 2 uses the depth p - 1 optimum
/// extended by an identity layer plus n_starts uniformly random starts.
/// Every start is refined by Nelder-Mead; among results within 1e-9 of the
/// best value the lexicographically smallest canonical parameter vector wins.
inline OptimizationResult optimize_parameters(const Graph& g, int p, const OptimizerConfig& cfg) {
  if (p < 1) throw UsageError("layer count must be >= 1");
  if (cfg.grid_points < 1 || cfg.n_starts < 1 || !(cfg.refine_tol > 0)) {
    throw ConfigError("optimizer needs grid_points >= 1, n_starts >= 1, refine_tol > 0");
  }
  detail::ExpectationEvaluator evaluate(g);
  auto objective = [&](const std::vector<double>& v) {
    const std::size_t half = v.size() / 2;
    return evaluate(std::span<const double>(v.data(), half),
                    std::span<const double>(v.data() + half, half));
  };

  std::vector<std::vector<double>> starts;
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (p == 1) {
    std::vector<std::pair<double, std::vector<double>>> grid;
    for (int i = 0; i < cfg.grid_points; ++i) {
      for (int j = 0; j < cfg.grid_points; ++j) {
        std::vector<double> v{kTwoPi * i / cfg.grid_points, std::numbers::pi * j / cfg.grid_points};
        grid.emplace_back(objective(v), std::move(v));
      }
    }
    std::stable_sort(grid.begin(), grid.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    const std::size_t keep = std::min(grid.size(), static_cast<std::size_t>(cfg.n_starts));
    for (std::size_t i = 0; i < keep; ++i) starts.push_back(grid[i].second);
  } else {
    const auto prev = optimize_parameters(g, p - 1, cfg);
    QaoaParams warm = prev.params;
    warm.gammas.push_back(0.0);
    warm.betas.push_back(0.0);
    starts.push_back(detail::to_vector(warm));
    std::mt19937_64 rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(p)));
    for (int s = 0; s < cfg.n_starts; ++s) {
      std::vector<double> v(2 * static_cast<std::size_t>(p));
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double period = i < static_cast<std::size_t>(p) ? kTwoPi : std::numbers::pi;
        v[i] = period * uniform_unit(rng);
      }
      starts.push_back(std::move(v));
    }
  }

  std::vector<double> best_x;
  double best_val = -std::numeric_limits<double>::infinity();
  std::vector<detail::SimplexResult> refined;
  refined.reserve(starts.size());
  for (const auto& s : starts) {
    auto r = detail::nelder_mead_maximize(objective, s, 0.2, cfg.refine_tol, cfg.max_evals_per_start);
    // polish: restart once from the converged point with a smaller simplex
    r = detail::nelder_mead_maximize(objective, r.x, 0.02, cfg.refine_tol, cfg.max_evals_per_start);
    detail::canonicalize(r.x);
    best_val = std::max(best_val, r.value);
    refined.push_back(std::move(r));
  }
  for (const auto& r : refined) {
    if (r.value < best_val - 1e-9) continue;
    if (best_x.empty() || detail::lex_less(r.x, best_x)) best_x = r.x;
  }
  OptimizationResult out;
  out.params = detail::from_vector(best_x);
  out.expectation = objective(best_x);
  return out;
}

}  // namespace symqaoa
