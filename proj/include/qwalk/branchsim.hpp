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
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qwalk/circuit.hpp"

namespace qwalk {

struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One classical register valuation with a complex amplitude. Everything in
/// the update circuit except the S-register rotations is
/// classical-deterministic, so a basis input never fans out beyond d
/// branches.
struct Branch {
  std::vector<std::uint64_t> regs;
  std::complex<double> amp;
};

struct BranchState {
  std::vector<Branch> branches;

  double norm_sq() const {
    double total = 0.0;
    for (const Branch& b : branches) {
      total += std::norm(b.amp);
    }
    return total;
  }
};

struct SimulateOptions {
  std::ostream* trace = nullptr;
};

namespace detail {

inline void merge_branches(std::vector<Branch>& branches) {
  std::sort(branches.begin(), branches.end(),
            [](const Branch& a, const Branch& b) { return a.regs < b.regs; });
  std::vector<Branch> merged;
  for (Branch& b : branches) {
    if (!merged.empty() && merged.back().regs == b.regs) {
      merged.back().amp += b.amp;
    } else {
      merged.push_back(std::move(b));
    }
  }
  std::erase_if(merged,
                [](const Branch& b) { return std::norm(b.amp) == 0.0; });
  branches = std::move(merged);
}

}  // namespace detail

/// Exact sparse simulation of the update circuit on |x>|0>.
///
/// Fails hard if any work register is nonzero at the end, if amplitude ever
/// reaches an unflagged slot, or if the norm drifts beyond 1e-12.
inline BranchState simulate_update(const UpdateCircuit& circuit,
                                   std::uint64_t x,
                                   const SimulateOptions& options = {}) {
  const RegisterLayout& lay = circuit.layout;
  const MarkovChain& chain = circuit.chain;
  const NeighborRow row = neighbor_oracle(chain, x);
  const int r = lay.rounds();

  BranchState state;
  {
    Branch init;
    init.regs.assign(lay.num_registers(), 0);
    init.regs[lay.reg_L()] = x;
    init.amp = 1.0;
    state.branches.push_back(std::move(init));
  }

  for (const CircuitOp& op : circuit.ops) {
    switch (op.kind) {
      case OpKind::OracleN:
        for (Branch& b : state.branches) {
          for (int slot = 0; slot < lay.d; ++slot) {
            b.regs[lay.reg_neighbor(slot)] ^= row.neighbors[slot];
          }
          b.regs[lay.reg_presence_flags()] ^= row.flag_mask();
        }
        break;
      case OpKind::OracleT:
        for (Branch& b : state.branches) {
          for (int slot = 0; slot < lay.d; ++slot) {
            b.regs[lay.reg_tree(r, slot)] ^= row.numerators[slot];
          }
        }
        break;
      case OpKind::Add: {
        const int target = lay.reg_tree(op.level, op.index);
        const int left = lay.reg_tree(op.level + 1, 2 * op.index);
        const int right = lay.reg_tree(op.level + 1, 2 * op.index + 1);
        for (Branch& b : state.branches) {
          if (op.inverse) {
            b.regs[target] -= b.regs[left] + b.regs[right];
          } else {
            b.regs[target] += b.regs[left] + b.regs[right];
          }
        }
        break;
      }
      case OpKind::SpecialCase:
        for (Branch& b : state.branches) {
          const std::uint64_t parent =
              op.level == 1 ? chain.one()
                            : b.regs[lay.reg_tree(op.level - 1, op.index)];
          const std::uint64_t child =
              b.regs[lay.reg_tree(op.level, 2 * op.index)];
          if (child > parent) {
            throw SimulationError("child sum exceeds parent sum");
          }
          const std::uint64_t bits = (child == 0 ? 1u : 0u) |
                                     (child == parent ? 2u : 0u);
          b.regs[lay.reg_case_flags()] ^= bits;
        }
        break;
      case OpKind::Rotation: {
        const int target_bit = r - op.level;
        const int prefix_shift = r - op.level + 1;
        // The partial sums do not depend on S, so (b, c) and hence the angle
        // agree across branches; cache the trig for the op.
        std::uint64_t cached_b = 0, cached_c = 0;
        double cos_theta = 0.0, sin_theta = 0.0;
        bool cached = false;
        std::vector<Branch> next;
        next.reserve(state.branches.size() + 1);
        for (Branch& b : state.branches) {
          const std::uint64_t s = b.regs[lay.reg_S()];
          if ((s >> prefix_shift) != static_cast<std::uint64_t>(op.index)) {
            next.push_back(std::move(b));
            continue;
          }
          const std::uint64_t flags = b.regs[lay.reg_case_flags()];
          if (flags & 2u) {  // c == b, including the dead-subtree 11 row
            next.push_back(std::move(b));
            continue;
          }
          if ((s >> target_bit) & 1u) {
            throw SimulationError("rotation target qubit is not fresh");
          }
          if (flags & 1u) {  // c == 0: exact bit flip, no rounding
            b.regs[lay.reg_S()] |= std::uint64_t{1} << target_bit;
            next.push_back(std::move(b));
            continue;
          }
          const std::uint64_t parent =
              op.level == 1 ? chain.one()
                            : b.regs[lay.reg_tree(op.level - 1, op.index)];
          const std::uint64_t child =
              b.regs[lay.reg_tree(op.level, 2 * op.index)];
          if (!cached || cached_b != parent || cached_c != child) {
            const FixedPoint theta = rotation_angle(parent, child, lay.n);
            cos_theta = std::cos(theta.to_double());
            sin_theta = std::sin(theta.to_double());
            cached_b = parent;
            cached_c = child;
            cached = true;
          }
          Branch flipped = b;
          flipped.regs[lay.reg_S()] |= std::uint64_t{1} << target_bit;
          flipped.amp *= sin_theta;
          b.amp *= cos_theta;
          next.push_back(std::move(b));
          next.push_back(std::move(flipped));
        }
        state.branches = std::move(next);
        break;
      }
      case OpKind::Map:
        for (Branch& b : state.branches) {
          const std::uint64_t s = b.regs[lay.reg_S()];
          if (!((b.regs[lay.reg_presence_flags()] >> s) & 1u)) {
            throw SimulationError("amplitude reached an unflagged slot");
          }
          b.regs[lay.reg_R()] ^= b.regs[lay.reg_neighbor(
              static_cast<int>(s))];
        }
        break;
      case OpKind::Clean:
        for (Branch& b : state.branches) {
          const std::uint64_t y = b.regs[lay.reg_R()];
          bool found = false;
          for (int slot = 0; slot < lay.d; ++slot) {
            if (((b.regs[lay.reg_presence_flags()] >> slot) & 1u) &&
                b.regs[lay.reg_neighbor(slot)] == y) {
              if (static_cast<std::uint64_t>(slot) != b.regs[lay.reg_S()]) {
                throw SimulationError(
                    "clean slot does not match the superposition label");
              }
              b.regs[lay.reg_S()] ^= static_cast<std::uint64_t>(slot);
              found = true;
              break;
            }
          }
          if (!found) {
            throw SimulationError("clean found no matching neighbor slot");
          }
        }
        break;
    }
    if (std::abs(state.norm_sq() - 1.0) > 1e-12) {
      throw SimulationError("norm drifted beyond 1e-12");
    }
    if (options.trace != nullptr) {
      *options.trace << op_kind_name(op.kind) << (op.inverse ? "~" : "")
                     << " branches=" << state.branches.size()
                     << " norm=" << state.norm_sq() << "\n";
    }
  }

  detail::merge_branches(state.branches);
  for (const Branch& b : state.branches) {
    if (b.regs[lay.reg_L()] != x) {
      throw SimulationError("input register was modified");
    }
    for (int reg = 0; reg < lay.num_registers(); ++reg) {
      if (reg == lay.reg_L() || reg == lay.reg_R()) {
        continue;
      }
      if (b.regs[reg] != 0) {
        throw SimulationError("work register " + std::to_string(reg) +
                              " not restored to zero");
      }
    }
  }
  return state;
}

/// l2 distance between the simulated column and the ideal update column
/// sum_y sqrt(p_xy) |x, y>.
inline double verify_update(const MarkovChain& chain,
                            const UpdateCircuit& circuit, std::uint64_t x) {
  const BranchState state = simulate_update(circuit, x);
  std::map<std::uint64_t, std::complex<double>> amps;
  for (const Branch& b : state.branches) {
    amps[b.regs[circuit.layout.reg_R()]] += b.amp;
  }
  double res_sq = 0.0;
  for (const ChainEntry& e : chain.row(x)) {
    const double ideal =
        std::sqrt(std::ldexp(static_cast<double>(e.num), -chain.t));
    const auto it = amps.find(e.y);
    const std::complex<double> got =
        it == amps.end() ? std::complex<double>{0.0} : it->second;
    res_sq += std::norm(got - ideal);
    if (it != amps.end()) {
      amps.erase(it);
    }
  }
  for (const auto& [y, amp] : amps) {
    res_sq += std::norm(amp);  // amplitude on a non-neighbor
  }
  return std::sqrt(res_sq);
}

/// Max Gram-matrix deviation |<col_x, col_x'> - delta_xx'| over all columns
/// of the simulated update.
inline double unitarity_check(const MarkovChain& chain,
                              const UpdateCircuit& circuit) {
  if (chain.num_states() > 64) {
    throw SimulationError("unitarity_check is limited to 2^m <= 64");
  }
  std::vector<std::vector<std::pair<std::uint64_t, std::complex<double>>>>
      columns;
  for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
    const BranchState state = simulate_update(circuit, x);
    std::vector<std::pair<std::uint64_t, std::complex<double>>> col;
    for (const Branch& b : state.branches) {
      const std::uint64_t key = (x << chain.m) | b.regs[circuit.layout.reg_R()];
      col.emplace_back(key, b.amp);
    }
    std::sort(col.begin(), col.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    columns.push_back(std::move(col));
  }
  double max_dev = 0.0;
  for (std::uint64_t a = 0; a < chain.num_states(); ++a) {
    for (std::uint64_t b = a; b < chain.num_states(); ++b) {
      std::complex<double> dot = 0.0;
      std::size_t i = 0, j = 0;
      while (i < columns[a].size() && j < columns[b].size()) {
        if (columns[a][i].first < columns[b][j].first) {
          ++i;
        } else if (columns[a][i].first > columns[b][j].first) {
          ++j;
        } else {
          dot += std::conj(columns[a][i].second) * columns[b][j].second;
          ++i;
          ++j;
        }
      }
      const double expect = a == b ? 1.0 : 0.0;
      max_dev = std::max(max_dev, std::abs(dot - expect));
    }
  }
  return max_dev;
}

}  // namespace qwalk
