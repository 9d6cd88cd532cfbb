// Copyright 2026 The qwalk developers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "qwalk/chain.hpp"

namespace qwalk {

/// Random reversible test-chain generator.
///
/// Chains are built from a symmetric integer conductance matrix whose row
/// sums are forced to powers of two by self-loop padding. Every probability
/// is then an exact t-bit dyadic and detailed balance holds exactly
/// (pi_x ~ 2^{t_x}), so spectral claims can be tested without rounding
/// slack. With `lazy`, self-loops carry at least half of each row, keeping
/// the classical spectrum nonnegative.
struct RandChainOptions {
  int m = 3;
  int d = 4;
  int t = 8;
  std::uint64_t seed = 0;
  bool lazy = true;  // d >= 4 only; a d = 2 path has no room for self-loops
};

namespace detail {

inline std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = rng();
    if (r >= threshold) {
      return r % bound;
    }
  }
}

inline std::uint64_t uniform_in(std::mt19937_64& rng, std::uint64_t lo,
                                std::uint64_t hi) {
  return lo + uniform_below(rng, hi - lo + 1);
}

inline int ceil_log2(std::uint64_t v) {
  int k = 0;
  while ((std::uint64_t{1} << k) < v) {
    ++k;
  }
  return k;
}

inline std::vector<std::uint64_t> shuffled_states(std::mt19937_64& rng,
                                                  std::uint64_t n) {
  std::vector<std::uint64_t> order(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    order[i] = i;
  }
  for (std::uint64_t i = n - 1; i > 0; --i) {
    std::swap(order[i], order[uniform_below(rng, i + 1)]);
  }
  return order;
}

// Path chain: consecutive states of a random ordering share an edge and the
// two endpoints carry self-loops. Interior row sums are steered to powers of
// two by the choice of the next edge weight.
inline MarkovChain random_path_chain(const RandChainOptions& opt,
                                     std::mt19937_64& rng) {
  const std::uint64_t n = std::uint64_t{1} << opt.m;
  const auto order = shuffled_states(rng, n);
  std::vector<std::uint64_t> w(n - 1);
  w[0] = uniform_in(rng, 1, std::uint64_t{1} << (opt.t - 2));
  std::vector<int> row_bits(n, 0);
  for (std::uint64_t i = 1; i + 1 < n; ++i) {
    const int lo = ceil_log2(w[i - 1] + 1);
    const int hi = std::min(opt.t, lo + 2);
    row_bits[i] = static_cast<int>(uniform_in(rng, lo, hi));
    w[i] = (std::uint64_t{1} << row_bits[i]) - w[i - 1];
  }
  row_bits[0] = static_cast<int>(
      uniform_in(rng, ceil_log2(w[0] + 1), opt.t));
  row_bits[n - 1] = static_cast<int>(
      uniform_in(rng, ceil_log2(w[n - 2] + 1), opt.t));

  MarkovChain chain;
  chain.m = opt.m;
  chain.d = opt.d;
  chain.t = opt.t;
  chain.rows.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t x = order[i];
    const std::uint64_t scale = std::uint64_t{1} << (opt.t - row_bits[i]);
    std::vector<ChainEntry>& row = chain.rows[x];
    if (i == 0 || i == n - 1) {
      const std::uint64_t edge = i == 0 ? w[0] : w[n - 2];
      const std::uint64_t other = i == 0 ? order[1] : order[n - 2];
      const std::uint64_t self =
          (std::uint64_t{1} << row_bits[i]) - edge;
      row.push_back({other, edge * scale});
      row.push_back({x, self * scale});
    } else {
      row.push_back({order[i - 1], w[i - 1] * scale});
      row.push_back({order[i + 1], w[i] * scale});
    }
  }
  return chain;
}

// General chain: a random spanning path plus extra edges under the degree
// cap, symmetric weights, and a self-loop absorbing each row up to the next
// power of two.
inline MarkovChain random_graph_chain(const RandChainOptions& opt,
                                      std::mt19937_64& rng) {
  const std::uint64_t n = std::uint64_t{1} << opt.m;
  const int max_degree = opt.d - 1;
  const auto order = shuffled_states(rng, n);

  std::vector<std::vector<std::pair<std::uint64_t, std::uint64_t>>> adj(n);
  const auto adjacent = [&](std::uint64_t a, std::uint64_t b) {
    for (const auto& [y, weight] : adj[a]) {
      if (y == b) {
        return true;
      }
    }
    return false;
  };
  const std::uint64_t weight_cap = std::max<std::uint64_t>(
      1, (std::uint64_t{1} << opt.t) / (4 * static_cast<std::uint64_t>(
                                                max_degree)));
  const auto add_edge = [&](std::uint64_t a, std::uint64_t b) {
    const std::uint64_t weight = uniform_in(rng, 1, weight_cap);
    adj[a].emplace_back(b, weight);
    adj[b].emplace_back(a, weight);
  };
  for (std::uint64_t i = 0; i + 1 < n; ++i) {
    add_edge(order[i], order[i + 1]);
  }
  const std::uint64_t attempts = n * static_cast<std::uint64_t>(max_degree);
  for (std::uint64_t k = 0; k < attempts; ++k) {
    const std::uint64_t a = uniform_below(rng, n);
    const std::uint64_t b = uniform_below(rng, n);
    if (a == b || adjacent(a, b) ||
        adj[a].size() >= static_cast<std::size_t>(max_degree) ||
        adj[b].size() >= static_cast<std::size_t>(max_degree)) {
      continue;
    }
    add_edge(a, b);
  }

  MarkovChain chain;
  chain.m = opt.m;
  chain.d = opt.d;
  chain.t = opt.t;
  chain.rows.resize(n);
  for (std::uint64_t x = 0; x < n; ++x) {
    std::uint64_t sum = 0;
    for (const auto& [y, weight] : adj[x]) {
      sum += weight;
    }
    const int row_bits =
        opt.lazy ? ceil_log2(2 * sum) : ceil_log2(sum + 1);
    const std::uint64_t scale = std::uint64_t{1} << (opt.t - row_bits);
    const std::uint64_t self = (std::uint64_t{1} << row_bits) - sum;
    for (const auto& [y, weight] : adj[x]) {
      chain.rows[x].push_back({y, weight * scale});
    }
    chain.rows[x].push_back({x, self * scale});
  }
  return chain;
}

}  // namespace detail

inline MarkovChain random_reversible_chain(const RandChainOptions& opt) {
  if (opt.m < 1 || opt.m > 24) {
    throw std::invalid_argument("random_reversible_chain: m out of range");
  }
  if (opt.d < 2 || !is_power_of_two(static_cast<std::uint64_t>(opt.d))) {
    throw std::invalid_argument(
        "random_reversible_chain: d must be a power of two >= 2");
  }
  if (static_cast<std::uint64_t>(opt.d) > (std::uint64_t{1} << opt.m)) {
    throw std::invalid_argument("random_reversible_chain: d exceeds 2^m");
  }
  if (opt.t < 2 || opt.t > 32 ||
      (std::uint64_t{1} << opt.t) < 2 * static_cast<std::uint64_t>(opt.d)) {
    throw std::invalid_argument(
        "random_reversible_chain: need 2^t >= 2d and t in [2, 32]");
  }
  std::mt19937_64 rng(opt.seed);
  MarkovChain chain = opt.d == 2 ? detail::random_path_chain(opt, rng)
                                 : detail::random_graph_chain(opt, rng);
  detail::validate_chain(chain, "randchain");
  return chain;
}

}  // namespace qwalk
