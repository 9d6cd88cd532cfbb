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

#include "qwalk/oracles.hpp"

#include <gtest/gtest.h>

#include "qwalk/randchain.hpp"

namespace qwalk {
namespace {

TEST(Oracles, PaddedRowWithTwoNeighbors) {
  const char* text =
      "m=3 d=4 t=4\n"
      "0: (2,8) (5,8)\n"
      "1: (1,16)\n2: (0,8) (2,8)\n3: (3,16)\n4: (4,16)\n"
      "5: (0,8) (5,8)\n6: (6,16)\n7: (7,16)\n";
  const MarkovChain chain = load_chain(text);
  const NeighborRow row = neighbor_oracle(chain, 0);
  EXPECT_EQ(row.neighbors, (std::vector<std::uint64_t>{2, 5, 0, 0}));
  EXPECT_EQ(row.numerators, (std::vector<std::uint64_t>{8, 8, 0, 0}));
  EXPECT_EQ(row.flags, (std::vector<std::uint8_t>{1, 1, 0, 0}));
  EXPECT_EQ(row.flag_mask(), 0b0011u);
  EXPECT_EQ(probability_oracle(chain, 0),
            (std::vector<std::uint64_t>{8, 8, 0, 0}));
}

TEST(Oracles, IdentityChainPadsWithZeroSlots) {
  const char* text =
      "m=1 d=2 t=2\n"
      "0: (0,4)\n1: (1,4)\n";
  const MarkovChain chain = load_chain(text);
  for (std::uint64_t x = 0; x < 2; ++x) {
    const NeighborRow row = neighbor_oracle(chain, x);
    EXPECT_EQ(row.neighbors, (std::vector<std::uint64_t>{x, 0}));
    EXPECT_EQ(row.flags, (std::vector<std::uint8_t>{1, 0}));
  }
}

TEST(Oracles, CompleteUniformRowAscendingOrder) {
  const char* text =
      "m=2 d=4 t=4\n"
      "0: (0,4) (1,4) (2,4) (3,4)\n"
      "1: (0,4) (1,4) (2,4) (3,4)\n"
      "2: (0,4) (1,4) (2,4) (3,4)\n"
      "3: (3,4) (2,4) (1,4) (0,4)\n";  // listed out of order on purpose
  const MarkovChain chain = load_chain(text);
  const NeighborRow row = neighbor_oracle(chain, 3);
  EXPECT_EQ(row.neighbors, (std::vector<std::uint64_t>{0, 1, 2, 3}));
  EXPECT_EQ(row.flags, (std::vector<std::uint8_t>{1, 1, 1, 1}));
  EXPECT_EQ(probability_oracle(chain, 3),
            (std::vector<std::uint64_t>{4, 4, 4, 4}));
}

TEST(Oracles, DyadicReadOff) {
  const char* text =
      "m=2 d=4 t=4\n"
      "0: (0,8) (1,4) (2,2) (3,2)\n"
      "1: (0,4) (1,4) (2,4) (3,4)\n"
      "2: (0,4) (1,4) (2,4) (3,4)\n"
      "3: (0,4) (1,4) (2,4) (3,4)\n";
  EXPECT_EQ(probability_oracle(load_chain(text), 0),
            (std::vector<std::uint64_t>{8, 4, 2, 2}));
}

TEST(Oracles, OutOfRangeState) {
  const MarkovChain chain = load_chain("m=1 d=2 t=2\n0: (0,4)\n1: (1,4)\n");
  EXPECT_THROW(neighbor_oracle(chain, 2), ChainError);
  EXPECT_THROW(probability_oracle(chain, 5), ChainError);
}

TEST(Oracles, DeterministicAndAligned) {
  const MarkovChain chain = random_reversible_chain({4, 8, 10, 77, true});
  for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
    const NeighborRow first = neighbor_oracle(chain, x);
    const NeighborRow second = neighbor_oracle(chain, x);
    EXPECT_EQ(first.neighbors, second.neighbors);
    EXPECT_EQ(first.numerators, second.numerators);
    EXPECT_EQ(first.flags, second.flags);

    // Flagged slots reconstruct the chain row exactly.
    std::vector<ChainEntry> rebuilt;
    for (int i = 0; i < chain.d; ++i) {
      EXPECT_EQ(first.flags[i] == 1, first.numerators[i] > 0);
      if (first.flags[i]) {
        rebuilt.push_back({first.neighbors[i], first.numerators[i]});
      }
    }
    EXPECT_EQ(rebuilt, chain.row(x));
  }
}

}  // namespace
}  // namespace qwalk
