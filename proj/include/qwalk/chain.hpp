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
#include <cstdint>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "qwalk/fixedpoint.hpp"

namespace qwalk {

struct ChainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One listed transition: probability numerator / 2^t towards state y.
struct ChainEntry {
  std::uint64_t y = 0;
  std::uint64_t num = 0;

  friend bool operator==(const ChainEntry&, const ChainEntry&) = default;
};

/// Sparse row-stochastic matrix with t-bit dyadic probabilities.
///
/// State space is {0, ..., 2^m - 1}; each row lists at most d transitions
/// whose numerators sum to exactly 2^t. Entries are kept sorted by neighbor
/// id, which fixes the oracle slot order.
struct MarkovChain {
  int m = 0;
  int d = 0;
  int t = 0;
  std::vector<std::vector<ChainEntry>> rows;

  std::uint64_t num_states() const { return std::uint64_t{1} << m; }
  std::uint64_t one() const { return std::uint64_t{1} << t; }

  const std::vector<ChainEntry>& row(std::uint64_t x) const {
    if (x >= num_states()) {
      throw ChainError("state id out of range: " + std::to_string(x));
    }
    return rows[x];
  }

  std::optional<std::uint64_t> numerator(std::uint64_t x,
                                         std::uint64_t y) const {
    for (const ChainEntry& e : row(x)) {
      if (e.y == y) {
        return e.num;
      }
    }
    return std::nullopt;
  }

  double prob(std::uint64_t x, std::uint64_t y) const {
    const auto num = numerator(x, y);
    return num ? std::ldexp(static_cast<double>(*num), -t) : 0.0;
  }
};

/// Dense spectrum of a reversible chain at desk scale.
struct ChainSpectrum {
  std::vector<double> eigenvalues;  // sorted descending, real
  std::vector<double> pi;
  double delta = 0.0;  // 1 - lambda_1
};

namespace detail {

inline void validate_chain(MarkovChain& chain, const char* origin) {
  const auto fail = [&](std::uint64_t x, const std::string& what) {
    throw ChainError(std::string(origin) + ": state " + std::to_string(x) +
                     ": " + what);
  };
  if (chain.m < 1 || chain.m > 24) {
    throw ChainError(std::string(origin) + ": m must be in [1, 24]");
  }
  if (chain.d < 1 || !is_power_of_two(static_cast<std::uint64_t>(chain.d))) {
    throw ChainError(std::string(origin) + ": d must be a power of two >= 1");
  }
  if (chain.t < 1 || chain.t > 32) {
    throw ChainError(std::string(origin) + ": t must be in [1, 32]");
  }
  if (chain.rows.size() != chain.num_states()) {
    throw ChainError(std::string(origin) + ": expected " +
                     std::to_string(chain.num_states()) + " rows, found " +
                     std::to_string(chain.rows.size()));
  }
  for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
    auto& row = chain.rows[x];
    if (row.empty()) {
      fail(x, "row has no transitions");
    }
    if (row.size() > static_cast<std::size_t>(chain.d)) {
      fail(x, "row has " + std::to_string(row.size()) +
                  " entries, more than d = " + std::to_string(chain.d));
    }
    std::sort(row.begin(), row.end(),
              [](const ChainEntry& a, const ChainEntry& b) { return a.y < b.y; });
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].y >= chain.num_states()) {
        fail(x, "neighbor id " + std::to_string(row[i].y) + " out of range");
      }
      if (row[i].num == 0) {
        fail(x, "zero numerator listed for neighbor " +
                    std::to_string(row[i].y));
      }
      if (i > 0 && row[i].y == row[i - 1].y) {
        fail(x, "duplicate neighbor id " + std::to_string(row[i].y));
      }
      sum += row[i].num;
    }
    if (sum != chain.one()) {
      fail(x, "numerators sum to " + std::to_string(sum) + ", expected 2^" +
                  std::to_string(chain.t) + " = " +
                  std::to_string(chain.one()));
    }
  }
}

inline MarkovChain parse_chain_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ChainError(std::string("chain json: ") + e.what());
  }
  MarkovChain chain;
  try {
    chain.m = doc.at("m").get<int>();
    chain.d = doc.at("d").get<int>();
    chain.t = doc.at("t").get<int>();
    for (const auto& row : doc.at("rows")) {
      std::vector<ChainEntry> entries;
      for (const auto& pair : row) {
        if (!pair.is_array() || pair.size() != 2) {
          throw ChainError("chain json: row entries must be [y, num] pairs");
        }
        entries.push_back(ChainEntry{pair[0].get<std::uint64_t>(),
                                     pair[1].get<std::uint64_t>()});
      }
      chain.rows.push_back(std::move(entries));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ChainError(std::string("chain json: ") + e.what());
  }
  validate_chain(chain, "chain json");
  return chain;
}

inline bool parse_u64_strict(const std::string& raw, std::uint64_t& out) {
  std::size_t begin = raw.find_first_not_of(" \t");
  std::size_t end = raw.find_last_not_of(" \t\r");
  if (begin == std::string::npos || end < begin) {
    return false;
  }
  const std::string body = raw.substr(begin, end - begin + 1);
  if (body.empty() ||
      body.find_first_not_of("0123456789") != std::string::npos) {
    return false;
  }
  try {
    out = std::stoull(body);
  } catch (const std::exception&) {
    return false;
  }
  return true;
}

inline MarkovChain parse_chain_text(const std::string& text) {
  MarkovChain chain;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool have_header = false;
  std::vector<bool> seen;

  const auto fail = [&](const std::string& what) {
    throw ChainError("chain file line " + std::to_string(line_no) + ": " +
                     what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') {
      continue;
    }
    if (!have_header) {
      std::istringstream hs(line);
      std::string token;
      bool got_m = false, got_d = false, got_t = false;
      while (hs >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
          fail("malformed header token '" + token + "'");
        }
        const std::string key = token.substr(0, eq);
        std::uint64_t parsed = 0;
        if (!parse_u64_strict(token.substr(eq + 1), parsed) ||
            parsed > 1000000) {
          fail("malformed header value in '" + token + "'");
        }
        const long long value = static_cast<long long>(parsed);
        if (key == "m") {
          chain.m = static_cast<int>(value);
          got_m = true;
        } else if (key == "d") {
          chain.d = static_cast<int>(value);
          got_d = true;
        } else if (key == "t") {
          chain.t = static_cast<int>(value);
          got_t = true;
        } else {
          fail("unknown header key '" + key + "'");
        }
      }
      if (!got_m || !got_d || !got_t) {
        fail("header must provide m=<int> d=<int> t=<int>");
      }
      if (chain.m < 1 || chain.m > 24) {
        fail("m out of range [1, 24]");
      }
      chain.rows.resize(std::size_t{1} << chain.m);
      seen.assign(std::size_t{1} << chain.m, false);
      have_header = true;
      continue;
    }

    const auto colon = line.find(':');
    if (colon == std::string::npos) {
      fail("expected '<state>: (y,num) ...'");
    }
    std::uint64_t x = 0;
    if (!parse_u64_strict(line.substr(0, colon), x)) {
      fail("malformed state id '" + line.substr(0, colon) + "'");
    }
    if (x >= chain.num_states()) {
      fail("state id " + std::to_string(x) + " out of range");
    }
    if (seen[x]) {
      fail("duplicate row for state " + std::to_string(x));
    }
    seen[x] = true;

    std::vector<ChainEntry> entries;
    std::size_t pos = colon + 1;
    while (pos < line.size()) {
      while (pos < line.size() &&
             (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
        ++pos;
      }
      if (pos >= line.size()) {
        break;
      }
      if (line[pos] != '(') {
        fail("state " + std::to_string(x) + ": expected '(' in entry list");
      }
      const auto close = line.find(')', pos);
      if (close == std::string::npos) {
        fail("state " + std::to_string(x) + ": unterminated entry");
      }
      const std::string body = line.substr(pos + 1, close - pos - 1);
      const auto comma = body.find(',');
      if (comma == std::string::npos) {
        fail("state " + std::to_string(x) + ": entry '" + body +
             "' must be (y,num)");
      }
      ChainEntry entry;
      if (!parse_u64_strict(body.substr(0, comma), entry.y) ||
          !parse_u64_strict(body.substr(comma + 1), entry.num)) {
        fail("state " + std::to_string(x) + ": malformed entry '" + body +
             "'");
      }
      entries.push_back(entry);
      pos = close + 1;
    }
    if (entries.empty()) {
      fail("state " + std::to_string(x) + ": row has no transitions");
    }
    chain.rows[x] = std::move(entries);
  }

  if (!have_header) {
    throw ChainError("chain file: missing header line");
  }
  for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
    if (!seen[x]) {
      throw ChainError("chain file: no row for state " + std::to_string(x));
    }
  }
  validate_chain(chain, "chain file");
  return chain;
}

}  // namespace detail

/// Parse a chain from text or JSON (detected by a leading '{').
inline MarkovChain load_chain(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    return detail::parse_chain_json(text);
  }
  return detail::parse_chain_text(text);
}

/// Render a chain in the text file format (canonical form, sorted rows).
inline std::string chain_to_text(const MarkovChain& chain) {
  std::ostringstream out;
  out << "m=" << chain.m << " d=" << chain.d << " t=" << chain.t << "\n";
  for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
    out << x << ":";
    for (const ChainEntry& e : chain.rows[x]) {
      out << " (" << e.y << "," << e.num << ")";
    }
    out << "\n";
  }
  return out.str();
}

inline nlohmann::json chain_to_json(const MarkovChain& chain) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : chain.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const ChainEntry& e : row) {
      r.push_back({e.y, e.num});
    }
    rows.push_back(std::move(r));
  }
  return {{"m", chain.m}, {"d", chain.d}, {"t", chain.t}, {"rows", rows}};
}

/// Power iteration for the stationary distribution.
///
/// Converges for ergodic chains; a budget overrun is reported as a likely
/// ergodicity failure rather than certified. The returned vector satisfies
/// ||pi P - pi||_1 <= tol.
inline std::vector<double> stationary_distribution(const MarkovChain& chain,
                                                   double tol = 1e-12,
                                                   int max_iters = 1000000) {
  const std::uint64_t size = chain.num_states();
  std::vector<double> pi(size, 1.0 / static_cast<double>(size));
  std::vector<double> next(size);
  for (int iter = 0; iter < max_iters; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint64_t x = 0; x < size; ++x) {
      for (const ChainEntry& e : chain.rows[x]) {
        next[e.y] += pi[x] * std::ldexp(static_cast<double>(e.num), -chain.t);
      }
    }
    double l1 = 0.0;
    double sum = 0.0;
    for (std::uint64_t y = 0; y < size; ++y) {
      l1 += std::abs(next[y] - pi[y]);
      sum += next[y];
    }
    for (std::uint64_t y = 0; y < size; ++y) {
      next[y] /= sum;
    }
    if (l1 <= tol) {
      return pi;
    }
    pi.swap(next);
  }
  throw ChainError(
      "stationary_distribution: no convergence within the iteration budget "
      "(chain may not be ergodic)");
}

/// Detailed balance check pi_x p_xy == pi_y p_yx over all listed pairs.
/// A pair listed on only one side is compared against probability zero.
inline bool check_reversibility(const MarkovChain& chain,
                                const std::vector<double>& pi,
                                double tol = 1e-10) {
  for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
    for (const ChainEntry& e : chain.rows[x]) {
      const double forward = pi[x] * std::ldexp(static_cast<double>(e.num),
                                                -chain.t);
      const double backward = pi[e.y] * chain.prob(e.y, x);
      if (std::abs(forward - backward) > tol) {
        return false;
      }
    }
  }
  return true;
}

inline Eigen::MatrixXd chain_to_dense(const MarkovChain& chain) {
  const auto size = static_cast<Eigen::Index>(chain.num_states());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(size, size);
  for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
    for (const ChainEntry& e : chain.rows[x]) {
      p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(e.y)) =
          std::ldexp(static_cast<double>(e.num), -chain.t);
    }
  }
  return p;
}

/// Dense spectrum of a reversible chain via the symmetrization
/// diag(sqrt(pi)) P diag(sqrt(pi))^-1, which shares the eigenvalues of P and
/// is symmetric exactly when detailed balance holds.
inline ChainSpectrum spectral_gap(const MarkovChain& chain,
                                  double reversibility_tol = 1e-9) {
  if (chain.num_states() > 64) {
    throw ChainError("spectral_gap: dense analysis is limited to 2^m <= 64");
  }
  ChainSpectrum spectrum;
  spectrum.pi = stationary_distribution(chain);
  if (!check_reversibility(chain, spectrum.pi, reversibility_tol)) {
    throw ChainError("spectral_gap: chain is not reversible");
  }
  const auto size = static_cast<Eigen::Index>(chain.num_states());
  const Eigen::MatrixXd p = chain_to_dense(chain);
  Eigen::MatrixXd sym(size, size);
  for (Eigen::Index x = 0; x < size; ++x) {
    for (Eigen::Index y = 0; y < size; ++y) {
      sym(x, y) = std::sqrt(spectrum.pi[x] / spectrum.pi[y]) * p(x, y);
    }
  }
  sym = 0.5 * (sym + sym.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw ChainError("spectral_gap: eigensolver failed");
  }
  spectrum.eigenvalues.assign(solver.eigenvalues().data(),
                              solver.eigenvalues().data() + size);
  std::reverse(spectrum.eigenvalues.begin(), spectrum.eigenvalues.end());
  if (std::abs(spectrum.eigenvalues.front() - 1.0) > 1e-9) {
    throw ChainError("spectral_gap: top eigenvalue is not 1");
  }
  spectrum.delta = size > 1 ? 1.0 - spectrum.eigenvalues[1] : 0.0;
  spectrum.delta = std::max(spectrum.delta, 0.0);
  return spectrum;
}

}  // namespace qwalk
