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

// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qwalk/qwalk.hpp"

namespace {

using qwalk::MarkovChain;

int failures = 0;

void report(int id, const std::string& label, bool pass,
            const std::string& detail) {
  std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << id << ": "
            << label << " — " << detail << "\n";
  if (!pass) {
    ++failures;
  }
}

MarkovChain uniform_chain(int m, int d, int t) {
  MarkovChain chain;
  chain.m = m;
  chain.d = d;
  chain.t = t;
  const std::uint64_t num = (std::uint64_t{1} << t) / d;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
    std::vector<qwalk::ChainEntry> row;
    for (int i = 0; i < d; ++i) {
      row.push_back({static_cast<std::uint64_t>(i), num});
    }
    chain.rows.push_back(std::move(row));
  }
  return chain;
}

MarkovChain identity_chain(int m, int t) {
  MarkovChain chain;
  chain.m = m;
  chain.d = 1;
  chain.t = t;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x) {
    chain.rows.push_back({{x, std::uint64_t{1} << t}});
  }
  return chain;
}

double residual_bound(const qwalk::RegisterLayout& lay) {
  return 4.0 * std::sqrt(static_cast<double>(lay.d)) * lay.rounds() *
         std::ldexp(1.0, -lay.n + lay.t / 2);
}

double loglog_slope(const std::vector<double>& xs,
                    const std::vector<double>& ys) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(ys.size());
  double cov = 0.0, var = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx;
    cov += dx * (std::log(ys[i]) - my);
    var += dx * dx;
  }
  return cov / var;
}

std::vector<MarkovChain> precision_grid_chains() {
  std::vector<MarkovChain> chains;
  std::uint64_t seed = 1;
  for (int m = 3; m <= 6; ++m) {
    for (int d : {2, 4, 8}) {
      for (int t : {8, 12, 16}) {
        for (int rep = 0; rep < 3 && chains.size() < 100; ++rep) {
          chains.push_back(
              qwalk::random_reversible_chain({m, d, t, seed++, true}));
        }
      }
    }
  }
  return chains;
}

// Criterion 1: residual <= 4 sqrt(d) log2(d) 2^(t/2 - n) for every state of
// 100 random reversible chains, with n = ceil(3t/2) + 4, within 60 s.
void criterion_1(const std::vector<MarkovChain>& chains) {
  const auto start = std::chrono::steady_clock::now();
  double worst_margin = 0.0;  // max residual / bound
  bool pass = true;
  for (const MarkovChain& chain : chains) {
    const qwalk::UpdateCircuit circuit = qwalk::synthesize_update(chain);
    const double bound = residual_bound(circuit.layout);
    for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
      const double residual = qwalk::verify_update(chain, circuit, x);
      if (chain.d > 1) {
        worst_margin = std::max(worst_margin, residual / bound);
      }
      if (residual > bound) {
        pass = false;
      }
    }
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::ostringstream detail;
  detail << chains.size() << " chains, worst residual/bound = "
         << worst_margin << ", " << elapsed << " s (limit 60)";
  report(1, "update precision (analytic residual bound)",
         pass && elapsed <= 60.0 && chains.size() == 100, detail.str());
}

// Criterion 2: identity chains and point-mass rows are exact; padded slots
// never receive amplitude.
void criterion_2() {
  bool pass = true;
  std::ostringstream detail;

  for (int m : {2, 3}) {
    const MarkovChain id = identity_chain(m, 8);
    const qwalk::UpdateCircuit circuit = qwalk::synthesize_update(id);
    for (std::uint64_t x = 0; x < id.num_states(); ++x) {
      if (qwalk::verify_update(id, circuit, x) != 0.0) {
        pass = false;
      }
    }
  }

  // Pair-swap permutation embedded in a d = 4 circuit: point-mass rows.
  const MarkovChain swap_chain = qwalk::load_chain(
      "m=2 d=4 t=8\n0: (1,256)\n1: (0,256)\n2: (3,256)\n3: (2,256)\n");
  const qwalk::UpdateCircuit swap_circuit =
      qwalk::synthesize_update(swap_chain);
  for (std::uint64_t x = 0; x < 4; ++x) {
    if (qwalk::verify_update(swap_chain, swap_circuit, x) != 0.0) {
      pass = false;
    }
  }

  // Rows with fewer than d neighbors: branch set must equal the flagged set.
  const MarkovChain sparse = qwalk::load_chain(
      "m=2 d=4 t=8\n"
      "0: (1,128) (2,128)\n"
      "1: (0,128) (1,128)\n"
      "2: (0,128) (2,64) (3,64)\n"
      "3: (2,128) (3,128)\n");
  const qwalk::UpdateCircuit sparse_circuit =
      qwalk::synthesize_update(sparse);
  for (std::uint64_t x = 0; x < 4; ++x) {
    const qwalk::BranchState state =
        qwalk::simulate_update(sparse_circuit, x);
    if (state.branches.size() != sparse.row(x).size()) {
      pass = false;
    }
    for (const qwalk::Branch& b : state.branches) {
      const std::uint64_t y = b.regs[sparse_circuit.layout.reg_R()];
      if (!sparse.numerator(x, y).has_value()) {
        pass = false;  // amplitude reached a padded slot
      }
    }
  }
  detail << "identity + point-mass residuals exactly 0; padded slots dark";
  report(2, "exactness of degenerate paths", pass, detail.str());
}

// Criterion 3: work registers integer-zero in every final branch and Gram
// deviation <= 1e-10 for every chain at 2^m <= 64.
void criterion_3(const std::vector<MarkovChain>& chains) {
  bool pass = true;
  double worst_gram = 0.0;
  for (const MarkovChain& chain : chains) {
    const qwalk::UpdateCircuit circuit = qwalk::synthesize_update(chain);
    try {
      // simulate_update hard-fails unless all work registers end at zero.
      for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
        (void)qwalk::simulate_update(circuit, x);
      }
      worst_gram = std::max(worst_gram, qwalk::unitarity_check(chain, circuit));
    } catch (const std::exception& e) {
      pass = false;
    }
  }
  pass = pass && worst_gram <= 1e-10;
  std::ostringstream detail;
  detail << "max Gram deviation = " << worst_gram << " (tol 1e-10)";
  report(3, "ancilla cleanliness and unitarity", pass, detail.str());
}

// Criterion 4: phase gap >= sqrt(delta) - 1e-9 and the stationary vector is
// fixed, on 20 random reversible ergodic chains at 2^m <= 32; plus the
// 2-state anchor with delta = 0.5 and gap arccos(1/2).
void criterion_4() {
  bool pass = true;
  std::ostringstream detail;

  struct ChainShape {
    int m, d, t;
    std::uint64_t seed;
  };
  std::vector<ChainShape> specs;
  std::uint64_t seed = 100;
  for (int rep = 0; rep < 6; ++rep) {
    specs.push_back({2, 4, 8, seed++});
  }
  for (int rep = 0; rep < 6; ++rep) {
    specs.push_back({3, rep % 2 == 0 ? 4 : 8, 10, seed++});
  }
  for (int rep = 0; rep < 6; ++rep) {
    specs.push_back({4, rep % 2 == 0 ? 4 : 8, 8, seed++});
  }
  specs.push_back({5, 4, 8, seed++});
  specs.push_back({5, 8, 8, seed++});

  double worst_gap_margin = 1e300;
  double worst_ideal_residual = 0.0;
  double worst_circuit_residual_ratio = 0.0;
  for (const ChainShape& spec : specs) {
    const MarkovChain chain = qwalk::random_reversible_chain(
        {spec.m, spec.d, spec.t, spec.seed, true});
    const qwalk::ChainSpectrum classical = qwalk::spectral_gap(chain);
    const Eigen::MatrixXd walk = qwalk::build_walk(qwalk::ideal_columns(chain));
    const qwalk::WalkSpectrum spectrum = qwalk::phase_gap(walk);
    if (!spectrum.has_gap) {
      pass = false;
      continue;
    }
    worst_gap_margin = std::min(
        worst_gap_margin, spectrum.phase_gap - std::sqrt(classical.delta));
    if (spectrum.phase_gap < std::sqrt(classical.delta) - 1e-9) {
      pass = false;
    }
    const double ideal_residual =
        qwalk::check_stationary_eigenvector(walk, chain);
    worst_ideal_residual = std::max(worst_ideal_residual, ideal_residual);
    if (ideal_residual > 1e-9) {
      pass = false;
    }

    const qwalk::UpdateCircuit circuit = qwalk::synthesize_update(chain);
    const double slack = 1e-9 + 2.0 * residual_bound(circuit.layout);
    const Eigen::MatrixXd circuit_walk =
        qwalk::build_walk(qwalk::circuit_columns(circuit));
    const double circuit_residual =
        qwalk::check_stationary_eigenvector(circuit_walk, chain);
    worst_circuit_residual_ratio =
        std::max(worst_circuit_residual_ratio, circuit_residual / slack);
    if (circuit_residual > slack) {
      pass = false;
    }
  }

  // Sanity anchor.
  const MarkovChain lazy2 = qwalk::load_chain(
      "m=1 d=2 t=2\n0: (0,3) (1,1)\n1: (0,1) (1,3)\n");
  const qwalk::ChainSpectrum anchor_classical = qwalk::spectral_gap(lazy2);
  const qwalk::WalkSpectrum anchor =
      qwalk::phase_gap(qwalk::build_walk(qwalk::ideal_columns(lazy2)));
  const bool anchor_ok =
      std::abs(anchor_classical.delta - 0.5) <= 1e-12 && anchor.has_gap &&
      std::abs(anchor.phase_gap - 1.0471975511965976) <= 1e-9 &&
      anchor.phase_gap >= 0.70711;
  pass = pass && anchor_ok;

  detail << specs.size() << " chains; min(gap - sqrt(delta)) = "
         << worst_gap_margin
         << ", max ideal residual = " << worst_ideal_residual
         << ", anchor gap = " << anchor.phase_gap;
  report(4, "Szegedy spectral claims", pass, detail.str());
}

// Criterion 5: measured totals scale linearly in d (slope in [0.9, 1.3]),
// polynomially in t, and the block-diagonal model scales quadratically.
void criterion_5() {
  std::vector<double> ds, totals;
  for (int d : {2, 4, 8, 16}) {
    const auto report_d =
        qwalk::gate_count(qwalk::synthesize_update(uniform_chain(6, d, 8)));
    ds.push_back(d);
    totals.push_back(report_d.total_operations);
  }
  const double slope_d = loglog_slope(ds, totals);

  std::vector<double> ts, t_totals;
  for (int t : {8, 16, 32}) {
    const auto report_t =
        qwalk::gate_count(qwalk::synthesize_update(uniform_chain(4, 4, t)));
    ts.push_back(t);
    t_totals.push_back(report_t.total_operations);
  }
  const double growth = t_totals.back() / t_totals.front();
  const double poly_cap = std::pow(ts.back() / ts.front(), 4.0);
  const double slope_t = loglog_slope(ts, t_totals);

  std::vector<double> bd;
  for (int d : {2, 4, 8, 16}) {
    qwalk::CostParams params;
    params.method = qwalk::CostMethod::BlockDiagonal;
    params.m = 6;
    params.d = d;
    params.epsilon = 1e-4;
    bd.push_back(qwalk::estimate_cost(params).value);
  }
  const double slope_bd = loglog_slope(ds, bd);

  const bool pass = slope_d >= 0.9 && slope_d <= 1.3 && growth <= poly_cap &&
                    slope_t <= 4.0 && slope_bd >= 1.9 && slope_bd <= 2.1;
  std::ostringstream detail;
  detail << "d-slope = " << slope_d << " in [0.9, 1.3]; t-growth x" << growth
         << " <= " << poly_cap << " (t-slope " << slope_t
         << "); block-diagonal slope = " << slope_bd << " in [1.9, 2.1]";
  report(5, "gate-count scaling", pass, detail.str());
}

// Criterion 6: the cost CLI emits the permanent-scenario exponent table
// classical 7 / hamsim 7 / sparse-unitary 7 / block-diagonal 7 / ours 6.
void criterion_6() {
  bool pass = true;
  std::ostringstream detail;
  const std::string command =
      std::string(QWALK_CLI_PATH) + " cost --scenario permanent --n 100 --json";
  std::string output;
  FILE* pipe = popen(command.c_str(), "r");
  if (pipe == nullptr) {
    report(6, "permanent-scenario exponent table", false, "cannot run CLI");
    return;
  }
  char buffer[4096];
  while (std::fgets(buffer, sizeof(buffer), pipe) != nullptr) {
    output += buffer;
  }
  if (WEXITSTATUS(pclose(pipe)) != 0) {
    pass = false;
  }
  try {
    const auto doc = nlohmann::json::parse(output);
    const auto& rows = doc.at("rows");
    const std::vector<std::pair<std::string, int>> expected = {
        {"classical", 7},
        {"quantum+hamsim", 7},
        {"quantum+sparse_unitary", 7},
        {"quantum+block_diagonal", 7},
        {"quantum+ours", 6}};
    if (rows.size() != expected.size()) {
      pass = false;
    } else {
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (rows[i].at("method").get<std::string>() != expected[i].first ||
            rows[i].at("total_exponent").get<int>() != expected[i].second) {
          pass = false;
        }
      }
    }
    detail << "cost --scenario permanent exponents = [";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      detail << (i ? "," : "") << rows[i].at("total_exponent").get<int>();
    }
    detail << "]";
  } catch (const std::exception& e) {
    pass = false;
    detail << "bad CLI output: " << e.what();
  }
  report(6, "permanent-scenario exponent table", pass, detail.str());
}

// Criterion 7: d = 4 rotation structure, the d - 1 site law, and the exact
// qubit budget.
void criterion_7() {
  bool pass = true;
  std::ostringstream detail;

  const qwalk::UpdateCircuit four =
      qwalk::synthesize_update(uniform_chain(2, 4, 8));
  std::vector<std::pair<int, int>> sites;
  for (const qwalk::CircuitOp& op : four.ops) {
    if (op.kind == qwalk::OpKind::Rotation) {
      sites.emplace_back(op.level, op.index);
    }
  }
  if (sites != std::vector<std::pair<int, int>>{{1, 0}, {2, 0}, {2, 1}}) {
    pass = false;
  }
  if (!qwalk::check_uncompute_discipline(four)) {
    pass = false;
  }

  std::ostringstream law;
  for (int d : {1, 2, 4, 8, 16}) {
    const qwalk::UpdateCircuit circuit =
        qwalk::synthesize_update(uniform_chain(4, d, 8));
    law << " d=" << d << ":" << circuit.rotation_site_count();
    if (circuit.rotation_site_count() != d - 1) {
      pass = false;
    }
  }

  for (const auto& [m, d, t] : std::vector<std::tuple<int, int, int>>{
           {4, 4, 8}, {3, 8, 12}, {6, 16, 8}}) {
    const qwalk::UpdateCircuit circuit =
        qwalk::synthesize_update(uniform_chain(m, d, t));
    const auto& lay = circuit.layout;
    int r = 0;
    while ((1 << r) < d) {
      ++r;
    }
    const std::uint64_t expected =
        static_cast<std::uint64_t>(2 * m) + static_cast<std::uint64_t>(d) * m +
        static_cast<std::uint64_t>(2 * d - 2) * t + 2 + lay.n +
        lay.theta_ancilla + r + d;
    if (qwalk::gate_count(circuit).qubit_total != expected) {
      pass = false;
    }
  }

  detail << "figure-4 pattern ok; rotation sites" << law.str()
         << "; qubit budgets match the register table";
  report(7, "structural circuit checks", pass, detail.str());
}

}  // namespace

int main() {
  std::cout.precision(6);
  const auto chains = precision_grid_chains();
  criterion_1(chains);
  criterion_2();
  criterion_3(chains);
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  if (failures != 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all acceptance criteria passed\n";
  return 0;
}
