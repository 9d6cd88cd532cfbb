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

#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qwalk/qwalk.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailure = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path);
  }
  std::ostringstream body;
  body << in.rdbuf();
  return body.str();
}

void write_output(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write file: " + path);
  }
  out << body;
}

// Rescale dyadic probabilities to a different precision. Raising t is exact;
// lowering it requires every numerator to stay integral.
qwalk::MarkovChain apply_t_override(const qwalk::MarkovChain& chain,
                                    int t_new) {
  if (t_new == chain.t) {
    return chain;
  }
  qwalk::MarkovChain out = chain;
  out.t = t_new;
  for (auto& row : out.rows) {
    for (auto& entry : row) {
      if (t_new > chain.t) {
        entry.num <<= (t_new - chain.t);
      } else {
        const int shift = chain.t - t_new;
        if (entry.num & ((std::uint64_t{1} << shift) - 1)) {
          throw std::runtime_error(
              "--t override would lose precision (numerator " +
              std::to_string(entry.num) + " is not divisible by 2^" +
              std::to_string(shift) + ")");
        }
        entry.num >>= shift;
      }
    }
  }
  qwalk::detail::validate_chain(out, "t override");
  return out;
}

struct ChainArgs {
  std::string path;
  int t_override = 0;
  double epsilon = 0.0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--chain", path, "chain file (text or JSON)")
        ->required();
    cmd->add_option("--t", t_override,
                    "override probability precision bits (exact rescale)");
    cmd->add_option("--eps", epsilon,
                    "target update error; picks t = ceil(log2(1/eps)) + "
                    "ceil(log2 d) + 2");
  }

  qwalk::MarkovChain load() const {
    qwalk::MarkovChain chain = qwalk::load_chain(read_file(path));
    if (t_override > 0 && epsilon > 0.0) {
      throw std::runtime_error("--t and --eps are mutually exclusive");
    }
    if (t_override > 0) {
      chain = apply_t_override(chain, t_override);
    } else if (epsilon > 0.0) {
      chain = apply_t_override(
          chain, qwalk::probability_bits_for_epsilon(epsilon, chain.d));
    }
    return chain;
  }
};

double update_precision_bound(const qwalk::UpdateCircuit& circuit) {
  const auto& lay = circuit.layout;
  return 4.0 * std::sqrt(static_cast<double>(lay.d)) * lay.rounds() *
         std::ldexp(1.0, -lay.n + lay.t / 2);
}

int run_analyze(const ChainArgs& chain_args, double rev_tol, bool as_json) {
  const qwalk::MarkovChain chain = chain_args.load();
  const double stat_tol = 1e-12;
  const auto pi = qwalk::stationary_distribution(chain, stat_tol);
  const bool reversible = qwalk::check_reversibility(chain, pi, rev_tol);
  std::optional<qwalk::ChainSpectrum> spectrum;
  if (reversible && chain.num_states() <= 64) {
    spectrum = qwalk::spectral_gap(chain, rev_tol);
  }

  if (as_json) {
    ordered_json doc;
    doc["m"] = chain.m;
    doc["d"] = chain.d;
    doc["t"] = chain.t;
    doc["states"] = chain.num_states();
    doc["pi"] = pi;
    doc["reversible"] = reversible;
    if (spectrum) {
      doc["eigenvalues"] = spectrum->eigenvalues;
      doc["lambda1"] = spectrum->eigenvalues[1];
      doc["delta"] = spectrum->delta;
    }
    doc["tolerances"] = {{"stationary", stat_tol},
                         {"reversibility", rev_tol}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "chain: m=" << chain.m << " d=" << chain.d
              << " t=" << chain.t << " states=" << chain.num_states() << "\n";
    std::cout << "reversible: " << (reversible ? "yes" : "no")
              << " (tol " << rev_tol << ")\n";
    if (spectrum) {
      std::cout << std::setprecision(12) << "lambda1: "
                << spectrum->eigenvalues[1] << "\ndelta: " << spectrum->delta
                << "\n";
    }
    std::cout << "pi:";
    for (double p : pi) {
      std::cout << " " << std::setprecision(10) << p;
    }
    std::cout << "\n";
  }
  return reversible ? kExitPass : kExitVerificationFailure;
}

int run_synth(const ChainArgs& chain_args, int n, std::int64_t resolve_x,
              const std::string& out_path, double a_theta_k, bool as_json) {
  const qwalk::MarkovChain chain = chain_args.load();
  const qwalk::UpdateCircuit circuit =
      n > 0 ? qwalk::synthesize_update(chain, n)
            : qwalk::synthesize_update(chain);
  std::optional<std::uint64_t> x;
  if (resolve_x >= 0) {
    x = static_cast<std::uint64_t>(resolve_x);
  }
  const std::string text = qwalk::serialize_circuit(circuit, x);
  const qwalk::CostReport report = qwalk::gate_count(circuit, a_theta_k);

  if (as_json) {
    ordered_json doc;
    doc["cost"] = qwalk::cost_report_json(report);
    doc["rotation_sites"] = circuit.rotation_site_count();
    doc["uncompute_ok"] = qwalk::check_uncompute_discipline(circuit);
    ordered_json lines = ordered_json::array();
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      lines.push_back(line);
    }
    doc["circuit"] = lines;
    write_output(out_path, doc.dump(2) + "\n");
  } else {
    write_output(out_path, text);
    std::cout << "# rotation sites: " << circuit.rotation_site_count()
              << "\n# qubits: " << report.qubit_total
              << "\n# operations: " << report.total_operations << "\n";
  }
  return kExitPass;
}

// CSV sweep of all four methods over d for crossover plots.
int run_cost_crossover(int m, int d_max, double eps, double kappa,
                       double polylog_power, double prefactor) {
  std::cout << "d,ours,hamsim,sparse_unitary,block_diagonal\n";
  for (int d = 2; d <= d_max; d *= 2) {
    qwalk::CostParams params;
    params.m = m;
    params.d = d;
    params.epsilon = eps > 0.0 ? eps : 1e-4;
    params.kappa = kappa;
    params.polylog_power = polylog_power;
    params.prefactor = prefactor;
    std::cout << d;
    for (auto method :
         {qwalk::CostMethod::Ours, qwalk::CostMethod::HamSimReflection,
          qwalk::CostMethod::SparseUnitary,
          qwalk::CostMethod::BlockDiagonal}) {
      params.method = method;
      std::cout << "," << std::setprecision(12)
                << qwalk::estimate_cost(params).value;
    }
    std::cout << "\n";
  }
  return kExitPass;
}

int run_simulate(const ChainArgs& chain_args, std::int64_t x_arg, int n,
                 bool trace, bool as_json) {
  const qwalk::MarkovChain chain = chain_args.load();
  const qwalk::UpdateCircuit circuit =
      n > 0 ? qwalk::synthesize_update(chain, n)
            : qwalk::synthesize_update(chain);
  const auto x = static_cast<std::uint64_t>(x_arg);
  qwalk::SimulateOptions options;
  std::ostringstream trace_body;
  if (trace) {
    options.trace = &trace_body;
  }
  const qwalk::BranchState state = qwalk::simulate_update(circuit, x, options);
  const double residual = qwalk::verify_update(chain, circuit, x);
  const double bound = update_precision_bound(circuit);
  const bool pass = residual <= bound;

  if (as_json) {
    ordered_json branches = ordered_json::array();
    for (const auto& b : state.branches) {
      branches.push_back({{"y", b.regs[circuit.layout.reg_R()]},
                          {"amplitude", b.amp.real()}});
    }
    ordered_json doc;
    doc["x"] = x;
    doc["n"] = circuit.layout.n;
    doc["branches"] = branches;
    doc["norm"] = state.norm_sq();
    doc["residual"] = residual;
    doc["bound"] = bound;
    doc["pass"] = pass;
    if (trace) {
      doc["trace"] = trace_body.str();
    }
    std::cout << doc.dump(2) << "\n";
  } else {
    if (trace) {
      std::cout << trace_body.str();
    }
    std::cout << "x=" << x << " branches=" << state.branches.size()
              << " norm=" << std::setprecision(15) << state.norm_sq() << "\n";
    for (const auto& b : state.branches) {
      std::cout << "  y=" << b.regs[circuit.layout.reg_R()]
                << " amplitude=" << std::setprecision(15) << b.amp.real()
                << "\n";
    }
    std::cout << "residual=" << residual << " bound=" << bound
              << (pass ? " PASS" : " FAIL") << "\n";
  }
  return pass ? kExitPass : kExitVerificationFailure;
}

int run_verify(const ChainArgs& chain_args, int n, bool as_json) {
  const qwalk::MarkovChain chain = chain_args.load();
  const qwalk::UpdateCircuit circuit =
      n > 0 ? qwalk::synthesize_update(chain, n)
            : qwalk::synthesize_update(chain);
  const double bound = update_precision_bound(circuit);
  std::vector<double> residuals;
  double max_residual = 0.0;
  for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
    residuals.push_back(qwalk::verify_update(chain, circuit, x));
    max_residual = std::max(max_residual, residuals.back());
  }
  double gram = 0.0;
  bool gram_checked = false;
  if (chain.num_states() <= 64) {
    gram = qwalk::unitarity_check(chain, circuit);
    gram_checked = true;
  }
  const bool pass =
      max_residual <= bound && (!gram_checked || gram <= 1e-10);

  if (as_json) {
    ordered_json doc;
    doc["m"] = chain.m;
    doc["d"] = chain.d;
    doc["t"] = chain.t;
    doc["n"] = circuit.layout.n;
    doc["residuals"] = residuals;
    doc["max_residual"] = max_residual;
    doc["bound"] = bound;
    if (gram_checked) {
      doc["gram_deviation"] = gram;
    }
    doc["tolerances"] = {{"residual_bound", bound},
                         {"gram_deviation", 1e-10}};
    doc["pass"] = pass;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << "states=" << chain.num_states() << " n=" << circuit.layout.n
              << "\nmax residual=" << std::setprecision(12) << max_residual
              << " bound=" << bound << "\n";
    if (gram_checked) {
      std::cout << "gram deviation=" << gram << " (tol 1e-10)\n";
    }
    std::cout << (pass ? "PASS" : "FAIL") << "\n";
  }
  return pass ? kExitPass : kExitVerificationFailure;
}

int run_spectrum(const ChainArgs& chain_args, bool ideal, int n,
                 bool as_json) {
  const qwalk::MarkovChain chain = chain_args.load();
  const qwalk::ChainSpectrum classical = qwalk::spectral_gap(chain);

  double zero_tol = 1e-9;
  double residual_tol = 1e-9;
  double gap_slack = 1e-9;
  std::vector<Eigen::VectorXd> columns;
  if (ideal) {
    columns = qwalk::ideal_columns(chain);
  } else {
    const qwalk::UpdateCircuit circuit =
        n > 0 ? qwalk::synthesize_update(chain, n)
              : qwalk::synthesize_update(chain);
    const double bound = update_precision_bound(circuit);
    zero_tol = std::max(zero_tol, 4.0 * bound);
    residual_tol += 2.0 * bound;
    gap_slack = 2.0 * bound;
    columns = qwalk::circuit_columns(circuit);
  }
  const Eigen::MatrixXd walk = qwalk::build_walk(columns);
  qwalk::WalkSpectrum spectrum = qwalk::phase_gap(walk, zero_tol);
  spectrum.delta = classical.delta;
  spectrum.stationary_residual =
      qwalk::check_stationary_eigenvector(walk, chain);

  const double sqrt_delta = std::sqrt(classical.delta);
  const bool gap_ok =
      !spectrum.has_gap || spectrum.phase_gap >= sqrt_delta - gap_slack;
  const bool residual_ok = spectrum.stationary_residual <= residual_tol;
  const bool pass = gap_ok && residual_ok;

  if (as_json) {
    ordered_json doc;
    doc["mode"] = ideal ? "ideal" : "circuit";
    doc["delta"] = spectrum.delta;
    doc["sqrt_delta"] = sqrt_delta;
    if (spectrum.has_gap) {
      doc["phase_gap"] = spectrum.phase_gap;
    } else {
      doc["phase_gap"] = nullptr;  // identity-like walk: no nonzero phase
    }
    doc["stationary_residual"] = spectrum.stationary_residual;
    doc["pass"] = pass;
    doc["eigenphases"] = spectrum.eigenphases;
    doc["tolerances"] = {{"zero_phase", zero_tol},
                         {"stationary_residual", residual_tol},
                         {"gap_slack", gap_slack}};
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << std::setprecision(12) << "delta=" << spectrum.delta
              << " sqrt_delta=" << sqrt_delta << "\n";
    if (spectrum.has_gap) {
      std::cout << "phase_gap=" << spectrum.phase_gap << "\n";
    } else {
      std::cout << "phase_gap=inf (walk acts as identity)\n";
    }
    std::cout << "stationary_residual=" << spectrum.stationary_residual
              << "\n"
              << (pass ? "PASS" : "FAIL") << "\n";
  }
  return pass ? kExitPass : kExitVerificationFailure;
}

int run_cost_method(const std::string& method_name, int m, int d, int t,
                    double eps, double kappa, double polylog_power,
                    double prefactor, bool as_json) {
  qwalk::CostParams params;
  if (method_name == "ours") {
    params.method = qwalk::CostMethod::Ours;
  } else if (method_name == "hamsim") {
    params.method = qwalk::CostMethod::HamSimReflection;
  } else if (method_name == "sparse_unitary") {
    params.method = qwalk::CostMethod::SparseUnitary;
  } else if (method_name == "block_diagonal") {
    params.method = qwalk::CostMethod::BlockDiagonal;
  } else {
    throw std::runtime_error("unknown method: " + method_name);
  }
  params.m = m;
  params.d = d;
  params.kappa = kappa;
  params.polylog_power = polylog_power;
  params.prefactor = prefactor;
  if (eps > 0.0) {
    params.epsilon = eps;
  } else {
    int r = 0;
    while ((1 << r) < d) {
      ++r;
    }
    params.epsilon = std::ldexp(1.0, -(t - r - 2));
  }
  const qwalk::CostEstimate est = qwalk::estimate_cost(params);
  if (as_json) {
    ordered_json doc;
    doc["method"] = method_name;
    doc["m"] = m;
    doc["d"] = d;
    doc["epsilon"] = params.epsilon;
    doc["kappa"] = kappa;
    doc["polylog_power"] = polylog_power;
    doc["estimate"] = est.value;
    doc["scaling"] = est.scaling;
    std::cout << doc.dump(2) << "\n";
  } else {
    std::cout << method_name << ": " << std::setprecision(12) << est.value
              << "  [" << est.scaling << "]\n";
  }
  return kExitPass;
}

int run_cost_scenario(int n, bool as_json, bool as_csv) {
  const auto rows = qwalk::permanent_scenario(n);
  if (as_json) {
    ordered_json doc = ordered_json::array();
    for (const auto& row : rows) {
      doc.push_back({{"method", row.method},
                     {"steps_exponent", row.steps_exponent},
                     {"per_step_exponent", row.per_step_exponent},
                     {"total_exponent", row.total_exponent},
                     {"polylog_suppressed", row.polylog_suppressed}});
    }
    std::cout << ordered_json{{"n", n}, {"rows", doc}}.dump(2) << "\n";
  } else if (as_csv) {
    std::cout << "method,steps_exponent,per_step_exponent,total_exponent\n";
    for (const auto& row : rows) {
      std::cout << row.method << "," << row.steps_exponent << ","
                << row.per_step_exponent << "," << row.total_exponent << "\n";
    }
  } else {
    std::cout << std::left << std::setw(26) << "method" << std::setw(8)
              << "steps" << std::setw(10) << "per-step" << "total  (O*, n=" << n
              << ")\n";
    for (const auto& row : rows) {
      std::cout << std::left << std::setw(26) << row.method << "n^"
                << std::setw(6) << row.steps_exponent << "n^" << std::setw(8)
                << row.per_step_exponent << "n^" << row.total_exponent << "\n";
    }
  }
  return kExitPass;
}

int run_randchain(int m, int d, int t, std::uint64_t seed, bool lazy,
                  const std::string& out_path, bool as_json) {
  const qwalk::MarkovChain chain =
      qwalk::random_reversible_chain({m, d, t, seed, lazy});
  if (as_json) {
    write_output(out_path, qwalk::chain_to_json(chain).dump(2) + "\n");
  } else {
    write_output(out_path, "# seed=" + std::to_string(seed) +
                               (lazy ? " lazy\n" : "\n") +
                               qwalk::chain_to_text(chain));
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-update circuits for sparse reversible Markov chains"};
  app.require_subcommand(1);

  // analyze
  auto* analyze = app.add_subcommand(
      "analyze", "stationary distribution, reversibility, spectral gap");
  ChainArgs analyze_chain;
  analyze_chain.attach(analyze);
  double analyze_tol = 1e-10;
  bool analyze_json = false;
  analyze->add_option("--tol", analyze_tol, "reversibility tolerance");
  analyze->add_flag("--json", analyze_json, "JSON report");

  // synth
  auto* synth =
      app.add_subcommand("synth", "synthesize the update circuit + costs");
  ChainArgs synth_chain;
  synth_chain.attach(synth);
  int synth_n = 0;
  std::int64_t synth_x = -1;
  std::string synth_out;
  double synth_k = 1.0;
  bool synth_json = false;
  synth->add_option("--n", synth_n, "angle bits (default ceil(3t/2) + 4)");
  synth->add_option("--x", synth_x, "resolve angles for this input state");
  synth->add_option("--out", synth_out, "write circuit text to this file");
  synth->add_option("--a-theta-k", synth_k,
                    "prefactor K in a_theta = K * n^3");
  synth->add_flag("--json", synth_json, "JSON report");

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "branch-simulate the update on |x>|0>");
  ChainArgs sim_chain;
  sim_chain.attach(simulate);
  std::int64_t sim_x = 0;
  int sim_n = 0;
  bool sim_trace = false;
  bool sim_json = false;
  simulate->add_option("--x", sim_x, "input state")->required();
  simulate->add_option("--n", sim_n, "angle bits");
  simulate->add_flag("--trace", sim_trace, "per-op branch/norm trace");
  simulate->add_flag("--json", sim_json, "JSON report");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "update-precision residuals over all inputs");
  ChainArgs verify_chain;
  verify_chain.attach(verify);
  int verify_n = 0;
  bool verify_json = false;
  verify->add_option("--n", verify_n, "angle bits");
  verify->add_flag("--json", verify_json, "JSON report");

  // spectrum
  auto* spectrum = app.add_subcommand(
      "spectrum", "walk operator spectrum vs classical gap");
  ChainArgs spectrum_chain;
  spectrum_chain.attach(spectrum);
  bool spectrum_ideal = false;
  int spectrum_n = 0;
  bool spectrum_json = false;
  spectrum->add_flag("--ideal", spectrum_ideal,
                     "use exact sqrt(p) columns instead of the circuit");
  spectrum->add_option("--n", spectrum_n, "angle bits (circuit mode)");
  spectrum->add_flag("--json", spectrum_json, "JSON report");

  // cost
  auto* cost = app.add_subcommand("cost", "analytic method comparison");
  std::string cost_scenario;
  int cost_n = 100;
  std::string cost_method = "ours";
  int cost_m = 8;
  int cost_d = 8;
  int cost_t = 0;
  double cost_eps = 0.0;
  double cost_kappa = 1.0;
  double cost_plog = 1.0;
  double cost_prefactor = 1.0;
  bool cost_json = false;
  bool cost_csv = false;
  cost->add_option("--scenario", cost_scenario,
                   "named scenario (permanent)");
  cost->add_option("--n", cost_n, "problem size for the scenario");
  cost->add_option("--method", cost_method,
                   "ours | hamsim | sparse_unitary | block_diagonal");
  cost->add_option("--m", cost_m, "log2 state-space size");
  cost->add_option("--d", cost_d, "sparsity parameter");
  cost->add_option("--t", cost_t, "probability bits (sets eps)");
  cost->add_option("--eps", cost_eps, "target update error");
  cost->add_option("--kappa", cost_kappa, "1/eps exponent for ham-sim");
  cost->add_option("--polylog-power", cost_plog, "polylog multiplier power");
  cost->add_option("--prefactor", cost_prefactor, "constant factor");
  cost->add_flag("--json", cost_json, "JSON report");
  cost->add_flag("--csv", cost_csv,
                 "CSV table (scenario) or method sweep over d (crossovers)");

  // randchain
  auto* randchain = app.add_subcommand(
      "randchain", "generate a random reversible test chain");
  int rand_m = 3;
  int rand_d = 4;
  int rand_t = 8;
  std::uint64_t rand_seed = 0;
  bool rand_no_lazy = false;
  std::string rand_out;
  bool rand_json = false;
  randchain->add_option("--m", rand_m, "log2 state-space size")->required();
  randchain->add_option("--d", rand_d, "max out-degree (power of two >= 2)")
      ->required();
  randchain->add_option("--t", rand_t, "probability bits")->required();
  randchain->add_option("--seed", rand_seed, "RNG seed")
      ->envname("QWALK_SEED");
  randchain->add_flag("--no-lazy", rand_no_lazy,
                      "drop the >= 1/2 self-loop mass (d >= 4)");
  randchain->add_option("--out", rand_out, "output file (default stdout)");
  randchain->add_flag("--json", rand_json, "emit the JSON chain format");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*analyze) {
      return run_analyze(analyze_chain, analyze_tol, analyze_json);
    }
    if (*synth) {
      return run_synth(synth_chain, synth_n, synth_x, synth_out, synth_k,
                       synth_json);
    }
    if (*simulate) {
      return run_simulate(sim_chain, sim_x, sim_n, sim_trace, sim_json);
    }
    if (*verify) {
      return run_verify(verify_chain, verify_n, verify_json);
    }
    if (*spectrum) {
      return run_spectrum(spectrum_chain, spectrum_ideal, spectrum_n,
                          spectrum_json);
    }
    if (*cost) {
      if (!cost_scenario.empty()) {
        if (cost_scenario != "permanent") {
          throw std::runtime_error("unknown scenario: " + cost_scenario);
        }
        return run_cost_scenario(cost_n, cost_json, cost_csv);
      }
      if (cost_csv) {
        return run_cost_crossover(cost_m, cost_d, cost_eps, cost_kappa,
                                  cost_plog, cost_prefactor);
      }
      return run_cost_method(cost_method, cost_m, cost_d, cost_t, cost_eps,
                             cost_kappa, cost_plog, cost_prefactor,
                             cost_json);
    }
    if (*randchain) {
      return run_randchain(rand_m, rand_d, rand_t, rand_seed, !rand_no_lazy,
                           rand_out, rand_json);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
