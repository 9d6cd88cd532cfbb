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

#include <cstdint>
#include <vector>

#include "qwalk/chain.hpp"

namespace qwalk {

/// Padded oracle row for one state: d slots in ascending neighbor-id order,
/// unused slots hold id 0 / numerator 0 with the presence flag cleared.
struct NeighborRow {
  std::uint64_t x = 0;
  std::vector<std::uint64_t> neighbors;
  std::vector<std::uint64_t> numerators;
  std::vector<std::uint8_t> flags;

  std::uint64_t flag_mask() const {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < flags.size(); ++i) {
      if (flags[i]) {
        mask |= std::uint64_t{1} << i;
      }
    }
    return mask;
  }
};

/// Neighbor circuit N: deterministic padded table read.
inline NeighborRow neighbor_oracle(const MarkovChain& chain, std::uint64_t x) {
  const auto& row = chain.row(x);  // throws on out-of-range x
  NeighborRow out;
  out.x = x;
  out.neighbors.assign(chain.d, 0);
  out.numerators.assign(chain.d, 0);
  out.flags.assign(chain.d, 0);
  for (std::size_t i = 0; i < row.size(); ++i) {
    out.neighbors[i] = row[i].y;
    out.numerators[i] = row[i].num;
    out.flags[i] = 1;
  }
  return out;
}

/// Probability circuit T: numerators aligned slot-for-slot with N's output.
inline std::vector<std::uint64_t> probability_oracle(const MarkovChain& chain,
                                                     std::uint64_t x) {
  return neighbor_oracle(chain, x).numerators;
}

}  // namespace qwalk
