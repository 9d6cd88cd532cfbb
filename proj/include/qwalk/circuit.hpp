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
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwalk/chain.hpp"
#include "qwalk/grover_rudolph.hpp"
#include "qwalk/oracles.hpp"

namespace qwalk {

/// Register plan of the update circuit. Widths follow the resource table of
/// the construction: input L and output R (m qubits each), d neighbor slots
/// (m qubits), 2d-2 partial-sum registers (t qubits, the root is the known
/// constant 2^t and is not stored), two case-flag qubits, an n-qubit angle
/// register with poly(n) arithmetic ancillae, the log d superposition
/// register S, and d presence flags for the nonuniform case.
struct RegisterLayout {
  int m = 0;
  int d = 0;
  int t = 0;
  int n = 0;
  std::uint64_t theta_ancilla = 0;  // a_theta qubits, poly(n)

  int rounds() const {
    int r = 0;
    while ((1 << r) < d) {
      ++r;
    }
    return r;
  }

  // Simulator register ids. The angle register and its ancillae are scoped
  // inside a single rotation op (computed and uncomputed there), so they do
  // not appear as tracked registers.
  int reg_L() const { return 0; }
  int reg_R() const { return 1; }
  int reg_neighbor(int slot) const { return 2 + slot; }
  int reg_tree(int level, int index) const {
    return 2 + d + ((1 << level) - 2) + index;  // level in [1, rounds()]
  }
  int reg_presence_flags() const { return 2 + d + (2 * d - 2); }
  int reg_case_flags() const { return reg_presence_flags() + 1; }
  int reg_S() const { return reg_presence_flags() + 2; }
  int num_registers() const { return reg_presence_flags() + 3; }

  std::uint64_t qubit_total() const {
    return static_cast<std::uint64_t>(2 * m) +
           static_cast<std::uint64_t>(d) * m +
           static_cast<std::uint64_t>(2 * d - 2) * t + 2 + n + theta_ancilla +
           rounds() + d;
  }
};

enum class OpKind { OracleN, OracleT, Add, SpecialCase, Rotation, Map, Clean };

/// One register-level operation. Add targets tree node (level, index);
/// SpecialCase and Rotation belong to rotation site (round j = level,
/// site index) whose parent is node (j-1, index) and left child (j, 2*index).
struct CircuitOp {
  OpKind kind = OpKind::OracleN;
  bool inverse = false;
  int level = 0;
  int index = 0;

  friend bool operator==(const CircuitOp&, const CircuitOp&) = default;
};

/// The synthesized update circuit for one chain: register layout plus the
/// ordered op list. The op list is input-independent; rotation angles are
/// determined at run time from the partial-sum registers, exactly as the
/// determine-angle circuit would.
struct UpdateCircuit {
  RegisterLayout layout;
  MarkovChain chain;
  std::vector<CircuitOp> ops;

  int rotation_site_count() const {
    int count = 0;
    for (const CircuitOp& op : ops) {
      if (op.kind == OpKind::Rotation) {
        ++count;
      }
    }
    return count;
  }
};

/// Angle precision n = ceil(3t/2) + margin.
inline int default_angle_bits(int t, int margin = 4) {
  if (margin < 0) {
    throw std::invalid_argument("default_angle_bits: margin must be >= 0");
  }
  return (3 * t + 1) / 2 + margin;
}

/// Probability precision from a target update error: t scales with
/// log(1/eps) + log(d).
inline int probability_bits_for_epsilon(double epsilon, int d) {
  if (!(epsilon > 0.0) || !(epsilon < 1.0)) {
    throw std::invalid_argument(
        "probability_bits_for_epsilon: eps must be in (0, 1)");
  }
  int r = 0;
  while ((1 << r) < d) {
    ++r;
  }
  return static_cast<int>(std::ceil(std::log2(1.0 / epsilon))) + r + 2;
}

inline UpdateCircuit synthesize_update(const MarkovChain& chain, int n) {
  if (n < default_angle_bits(chain.t, 0)) {
    throw std::invalid_argument(
        "synthesize_update: n must be at least ceil(3t/2)");
  }
  if (n > 54) {
    throw std::invalid_argument(
        "synthesize_update: n beyond the supported fixed-point range");
  }
  UpdateCircuit circuit;
  circuit.chain = chain;
  circuit.layout =
      RegisterLayout{chain.m, chain.d, chain.t, n,
                     static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n)};
  const int r = circuit.layout.rounds();
  auto& ops = circuit.ops;

  ops.push_back({OpKind::OracleN, false, 0, 0});
  std::vector<CircuitOp> classical_prefix = {ops.back()};
  if (chain.d >= 2) {
    ops.push_back({OpKind::OracleT, false, 0, 0});
    classical_prefix.push_back(ops.back());
  }
  for (int level = r - 1; level >= 1; --level) {
    for (int i = 0; i < (1 << level); ++i) {
      ops.push_back({OpKind::Add, false, level, i});
      classical_prefix.push_back(ops.back());
    }
  }
  for (int j = 1; j <= r; ++j) {
    for (int i = 0; i < (1 << (j - 1)); ++i) {
      ops.push_back({OpKind::SpecialCase, false, j, i});
      ops.push_back({OpKind::Rotation, false, j, i});
      ops.push_back({OpKind::SpecialCase, true, j, i});
    }
  }
  ops.push_back({OpKind::Map, false, 0, 0});
  ops.push_back({OpKind::Clean, false, 0, 0});
  for (auto it = classical_prefix.rbegin(); it != classical_prefix.rend();
       ++it) {
    CircuitOp inverse = *it;
    inverse.inverse = true;
    ops.push_back(inverse);
  }
  return circuit;
}

inline UpdateCircuit synthesize_update(const MarkovChain& chain) {
  return synthesize_update(chain, default_angle_bits(chain.t));
}

/// Syntactic uncompute check: the classical ops before the rotation block
/// must reappear after MAP/CLEAN inverted and in exact reverse order, and
/// every SC sits in a compute/uncompute pair around its rotation.
inline bool check_uncompute_discipline(const UpdateCircuit& circuit) {
  const auto& ops = circuit.ops;
  std::size_t k = 0;
  std::vector<CircuitOp> prefix;
  while (k < ops.size() &&
         (ops[k].kind == OpKind::OracleN || ops[k].kind == OpKind::OracleT ||
          ops[k].kind == OpKind::Add) &&
         !ops[k].inverse) {
    prefix.push_back(ops[k]);
    ++k;
  }
  while (k < ops.size() && ops[k].kind == OpKind::SpecialCase) {
    if (k + 2 >= ops.size() || ops[k].inverse ||
        ops[k + 1].kind != OpKind::Rotation || ops[k + 1].inverse ||
        ops[k + 2].kind != OpKind::SpecialCase || !ops[k + 2].inverse ||
        ops[k].level != ops[k + 2].level || ops[k].index != ops[k + 2].index ||
        ops[k].level != ops[k + 1].level || ops[k].index != ops[k + 1].index) {
      return false;
    }
    k += 3;
  }
  if (k + 1 >= ops.size() || ops[k].kind != OpKind::Map ||
      ops[k + 1].kind != OpKind::Clean) {
    return false;
  }
  k += 2;
  if (ops.size() - k != prefix.size()) {
    return false;
  }
  for (std::size_t q = 0; q < prefix.size(); ++q) {
    const CircuitOp& expect = prefix[prefix.size() - 1 - q];
    const CircuitOp& got = ops[k + q];
    if (!got.inverse || got.kind != expect.kind ||
        got.level != expect.level || got.index != expect.index) {
      return false;
    }
  }
  return true;
}

/// Qubit budget and elementary-operation estimate for a synthesized circuit.
/// The angle subcircuit is charged as a_theta = K * n^3 per invocation
/// (computed and uncomputed once per rotation site); MAP and CLEAN are
/// charged as d controlled m-bit copies / comparisons.
struct CostReport {
  int m = 0;
  int d = 0;
  int t = 0;
  int n = 0;
  double epsilon = 0.0;
  double a_theta = 0.0;

  std::map<std::string, std::uint64_t> qubits;
  std::uint64_t qubit_total = 0;
  std::map<std::string, std::uint64_t> op_counts;
  double total_operations = 0.0;
};

inline const char* op_kind_name(OpKind kind) {
  switch (kind) {
    case OpKind::OracleN:
      return "ORACLE_N";
    case OpKind::OracleT:
      return "ORACLE_T";
    case OpKind::Add:
      return "ADD";
    case OpKind::SpecialCase:
      return "SC";
    case OpKind::Rotation:
      return "CROT";
    case OpKind::Map:
      return "MAP";
    case OpKind::Clean:
      return "CLEAN";
  }
  return "?";
}

inline CostReport gate_count(const UpdateCircuit& circuit,
                             double a_theta_scale = 1.0) {
  const RegisterLayout& lay = circuit.layout;
  CostReport report;
  report.m = lay.m;
  report.d = lay.d;
  report.t = lay.t;
  report.n = lay.n;
  report.epsilon =
      std::min(1.0, std::ldexp(1.0, -(lay.t - lay.rounds() - 2)));
  report.a_theta = a_theta_scale * static_cast<double>(lay.n) * lay.n * lay.n;

  report.qubits["L"] = lay.m;
  report.qubits["R"] = lay.m;
  report.qubits["neighbors"] = static_cast<std::uint64_t>(lay.d) * lay.m;
  report.qubits["probabilities"] =
      static_cast<std::uint64_t>(2 * lay.d - 2) * lay.t;
  report.qubits["case_flags"] = 2;
  report.qubits["angle"] = lay.n;
  report.qubits["theta_ancilla"] = lay.theta_ancilla;
  report.qubits["superposition"] = lay.rounds();
  report.qubits["presence_flags"] = lay.d;
  report.qubit_total = lay.qubit_total();

  double total = 0.0;
  for (const CircuitOp& op : circuit.ops) {
    report.op_counts[op_kind_name(op.kind)] += 1;
    switch (op.kind) {
      case OpKind::OracleN:
        total += static_cast<double>(lay.d) * lay.m + lay.d;
        break;
      case OpKind::OracleT:
        total += static_cast<double>(lay.d) * lay.t;
        break;
      case OpKind::Add:
        total += lay.t;
        break;
      case OpKind::SpecialCase:
        total += 2.0 * lay.t;
        break;
      case OpKind::Rotation:
        total += 2.0 * report.a_theta + op.level;
        break;
      case OpKind::Map:
      case OpKind::Clean:
        total += static_cast<double>(lay.d) * lay.m;
        break;
    }
  }
  report.total_operations = total;
  return report;
}

inline nlohmann::json cost_report_json(const CostReport& report) {
  nlohmann::json qubits;
  for (const auto& [name, count] : report.qubits) {
    qubits[name] = count;
  }
  nlohmann::json ops;
  for (const auto& [name, count] : report.op_counts) {
    ops[name] = count;
  }
  return {{"m", report.m},
          {"d", report.d},
          {"t", report.t},
          {"n", report.n},
          {"epsilon", report.epsilon},
          {"a_theta", report.a_theta},
          {"qubits", qubits},
          {"qubit_total", report.qubit_total},
          {"op_counts", ops},
          {"total_operations", report.total_operations}};
}

namespace detail {

inline std::string rotation_controls(const RegisterLayout& lay, int j, int i) {
  std::ostringstream out;
  if (j > 1) {
    out << "S[" << lay.rounds() - 1 << ".." << lay.rounds() - j + 1 << "]=";
    for (int bit = j - 2; bit >= 0; --bit) {
      out << ((i >> bit) & 1);
    }
    out << ",";
  }
  out << "flg";
  return out.str();
}

}  // namespace detail

/// Line-oriented circuit text. Angles are symbolic by default (the circuit
/// is input-independent); pass a state id to resolve the partial sums and
/// emit concrete fixed-point angles for that input.
inline std::string serialize_circuit(const UpdateCircuit& circuit,
                                     std::optional<std::uint64_t> x =
                                         std::nullopt) {
  const RegisterLayout& lay = circuit.layout;
  std::ostringstream out;
  out << "# update circuit m=" << lay.m << " d=" << lay.d << " t=" << lay.t
      << " n=" << lay.n;
  std::optional<SumTree> tree;
  if (x) {
    out << " x=" << *x;
    tree = build_sum_tree(neighbor_oracle(circuit.chain, *x).numerators,
                          lay.t);
  }
  out << "\n";
  for (const CircuitOp& op : circuit.ops) {
    out << op_kind_name(op.kind) << (op.inverse ? "~" : "");
    switch (op.kind) {
      case OpKind::OracleN:
        out << " target=nbr[0.." << lay.d - 1 << "],F controls=L";
        break;
      case OpKind::OracleT:
        out << " target=q[" << lay.rounds() << "][0.." << lay.d - 1
            << "] controls=L";
        break;
      case OpKind::Add:
        out << " target=q[" << op.level << "," << op.index << "] controls=q["
            << op.level + 1 << "," << 2 * op.index << "]+q[" << op.level + 1
            << "," << 2 * op.index + 1 << "]";
        break;
      case OpKind::SpecialCase:
        out << " target=flg controls=q[" << op.level - 1 << "," << op.index
            << "],q[" << op.level << "," << 2 * op.index << "]";
        break;
      case OpKind::Rotation: {
        out << " target=S:" << lay.rounds() - op.level
            << " controls=" << detail::rotation_controls(lay, op.level,
                                                         op.index);
        if (tree) {
          const std::uint64_t b = tree->node(op.level - 1, op.index);
          const std::uint64_t c = tree->node(op.level, 2 * op.index);
          switch (classify_special_case(b, c)) {
            case AngleCase::Normal:
              out << " angle=" << rotation_angle(b, c, lay.n).value << "/2^"
                  << lay.n << " case=normal";
              break;
            case AngleCase::ZeroAngle:
              out << " angle=0/2^" << lay.n << " case=zero";
              break;
            case AngleCase::HalfPi:
              out << " angle="
                  << fp_arccos(FixedPoint{0, lay.n}, lay.n).value << "/2^"
                  << lay.n << " case=half_pi";
              break;
          }
        } else {
          out << " angle=@arccos(sqrt(q[" << op.level << ","
              << 2 * op.index << "]/q[" << op.level - 1 << "," << op.index
              << "]))/2^" << lay.n;
        }
        break;
      }
      case OpKind::Map:
        out << " target=R controls=nbr[S],F";
        break;
      case OpKind::Clean:
        out << " target=S controls=R,nbr[0.." << lay.d - 1 << "],F";
        break;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace qwalk
