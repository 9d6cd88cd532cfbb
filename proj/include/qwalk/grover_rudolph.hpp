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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qwalk/fixedpoint.hpp"

namespace qwalk {

/// Binary tree of partial probability sums over 2^t.
///
/// levels[k] holds the 2^k sums of round k; leaves (level log d) are the
/// padded numerator list and every parent is the exact integer sum of its
/// two children, so the root is always 2^t.
struct SumTree {
  int t = 0;
  std::vector<std::vector<std::uint64_t>> levels;

  int rounds() const { return static_cast<int>(levels.size()) - 1; }
  std::uint64_t node(int level, int index) const {
    return levels[level][index];
  }
};

enum class AngleCase { Normal, ZeroAngle, HalfPi };

/// Per-round rotation plan: one entry per internal tree node, tagged with
/// the special-case classification and, for Normal entries, the fixed-point
/// angle the determine-angle circuit would hold.
struct AngleSchedule {
  struct Entry {
    AngleCase tag = AngleCase::ZeroAngle;
    FixedPoint angle;
  };

  int n = 0;
  std::vector<std::vector<Entry>> rounds;  // rounds[j - 1][i]
};

inline SumTree build_sum_tree(const std::vector<std::uint64_t>& numerators,
                              int t) {
  const std::size_t d = numerators.size();
  if (!is_power_of_two(d)) {
    throw std::invalid_argument("build_sum_tree: d must be a power of two");
  }
  std::uint64_t sum = 0;
  for (std::uint64_t num : numerators) {
    sum += num;
  }
  if (t < 1 || t > 62 || sum != (std::uint64_t{1} << t)) {
    throw std::invalid_argument(
        "build_sum_tree: numerators must sum to exactly 2^t");
  }
  SumTree tree;
  tree.t = t;
  int rounds = 0;
  while ((std::size_t{1} << rounds) < d) {
    ++rounds;
  }
  tree.levels.assign(rounds + 1, {});
  tree.levels[rounds] = numerators;
  for (int k = rounds - 1; k >= 0; --k) {
    tree.levels[k].resize(std::size_t{1} << k);
    for (std::size_t i = 0; i < tree.levels[k].size(); ++i) {
      tree.levels[k][i] =
          tree.levels[k + 1][2 * i] + tree.levels[k + 1][2 * i + 1];
    }
  }
  return tree;
}

/// SC flag logic for a parent sum b and left-child sum c.
/// Flags (flg1 = [c = 0], flg2 = [c = b]) map as 00 -> Normal,
/// 01 and 11 -> ZeroAngle, 10 -> HalfPi; the 11 row covers dead subtrees.
inline AngleCase classify_special_case(std::uint64_t b, std::uint64_t c) {
  if (c > b) {
    throw std::invalid_argument(
        "classify_special_case: child sum exceeds parent sum");
  }
  if (c == b) {
    return AngleCase::ZeroAngle;
  }
  if (c == 0) {
    return AngleCase::HalfPi;
  }
  return AngleCase::Normal;
}

/// theta = arccos(sqrt(c / b)) on the 2^-n grid, Normal cases only.
inline FixedPoint rotation_angle(std::uint64_t b, std::uint64_t c, int n) {
  if (classify_special_case(b, c) != AngleCase::Normal) {
    throw std::invalid_argument(
        "rotation_angle: special cases are handled by the flag logic");
  }
  return fp_arccos(fp_amplitude_ratio(c, b, n), n);
}

inline AngleSchedule build_angle_schedule(const SumTree& tree, int n) {
  AngleSchedule schedule;
  schedule.n = n;
  schedule.rounds.resize(tree.rounds());
  for (int j = 1; j <= tree.rounds(); ++j) {
    auto& round = schedule.rounds[j - 1];
    round.resize(std::size_t{1} << (j - 1));
    for (std::size_t i = 0; i < round.size(); ++i) {
      const std::uint64_t b = tree.node(j - 1, static_cast<int>(i));
      const std::uint64_t c = tree.node(j, static_cast<int>(2 * i));
      round[i].tag = classify_special_case(b, c);
      if (round[i].tag == AngleCase::Normal) {
        round[i].angle = rotation_angle(b, c, n);
      }
    }
  }
  return schedule;
}

/// Reference amplitudes sqrt(numerator / 2^t); the verification oracle for
/// every prepared superposition.
inline std::vector<double> ideal_superposition(
    const std::vector<std::uint64_t>& numerators, int t) {
  std::vector<double> amps(numerators.size());
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    amps[i] = std::sqrt(std::ldexp(static_cast<double>(numerators[i]), -t));
  }
  return amps;
}

}  // namespace qwalk
