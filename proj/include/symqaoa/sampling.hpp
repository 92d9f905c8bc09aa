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
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "symqaoa/errors.hpp"

namespace symqaoa {

/// Measured bitstring (qubit 0 first) -> number of shots.
using Counts = std::map<std::string, std::uint64_t>;

inline std::string index_to_bitstring(std::uint64_t index, int n_bits) {
  std::string s(static_cast<std::size_t>(n_bits), '0');
  for (int q = 0; q < n_bits; ++q) {
    if ((index >> q) & 1) s[static_cast<std::size_t>(q)] = '1';
  }
  return s;
}

inline std::uint64_t bitstring_to_index(std::string_view bits) {
  std::uint64_t index = 0;
  for (std::size_t q = 0; q < bits.size(); ++q) {
    if (bits[q] == '1') {
      index |= std::uint64_t{1} << q;
    } else if (bits[q] != '0') {
      throw UsageError("bitstring may contain only '0' and '1'");
    }
  }
  return index;
}

/// splitmix64 step; derives independent stream seeds from a root seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Per-index shot histogram drawn by inverse-CDF sampling.
inline std::vector<std::uint64_t> sample_histogram(std::span<const double> probs,
                                                   std::uint64_t shots, std::uint64_t seed) {
  if (probs.empty()) throw UsageError("empty probability vector");
  if (shots < 1) throw UsageError("shots must be >= 1");
  std::vector<double> cdf(probs.size());
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] < -1e-12) throw UsageError("negative probability");
    total += std::max(0.0, probs[i]);
    cdf[i] = total;
  }
  if (std::abs(total - 1.0) > 1e-6) throw UsageError("probabilities must sum to 1");

  std::mt19937_64 rng(seed);
  std::vector<std::uint64_t> hist(probs.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = uniform_unit(rng) * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) {
      // roundoff at the top end: fall back to the last nonzero bin
      do --it; while (it != cdf.begin() && *it == *(it - 1));
    }
    ++hist[static_cast<std::size_t>(it - cdf.begin())];
  }
  return hist;
}

inline Counts histogram_to_counts(std::span<const std::uint64_t> hist, int n_bits) {
  Counts counts;
  for (std::size_t i = 0; i < hist.size(); ++i) {
    if (hist[i] > 0) counts[index_to_bitstring(i, n_bits)] = hist[i];
  }
  return counts;
}

/// Draws `shots` outcomes from `probs` (length 2^n) with a seeded stream.
inline Counts sample_counts(std::span<const double> probs, std::uint64_t shots,
                            std::uint64_t seed) {
  int n = 0;
  while ((std::size_t{1} << n) < probs.size()) ++n;
  if ((std::size_t{1} << n) != probs.size()) {
    throw UsageError("probability vector length must be a power of two");
  }
  const auto hist = sample_histogram(probs, shots, seed);
  return histogram_to_counts(hist, n);
}

inline std::uint64_t total_shots(const Counts& counts) {
  std::uint64_t total = 0;
  for (const auto& [_, c] : counts) total += c;
  return total;
}

}  // namespace symqaoa
