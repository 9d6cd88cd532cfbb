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
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qwalk/branchsim.hpp"
#include "qwalk/chain.hpp"

namespace qwalk {

struct WalkError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Spectral summary of a walk operator. `eigenphases` are the raw phases of
/// W in (-pi, pi]. A product of two reflections rotates each principal plane
/// between the subspaces by twice the principal angle, so eigenphases come
/// in +-2*theta pairs; `phase_gap` reports the smallest nonzero theta, the
/// scale on which cos(theta) equals the second discriminant eigenvalue and
/// the quadratic relation phase_gap > sqrt(delta) is stated.
struct WalkSpectrum {
  std::vector<double> eigenphases;
  double phase_gap = std::numeric_limits<double>::infinity();
  bool has_gap = false;
  double delta = 0.0;
  double stationary_residual = 0.0;
};

/// Exact update column sum_y sqrt(p_xy) |x, y> over the (L, R) space.
inline Eigen::VectorXd ideal_column(const MarkovChain& chain,
                                    std::uint64_t x) {
  const auto dim =
      static_cast<Eigen::Index>(chain.num_states() * chain.num_states());
  Eigen::VectorXd col = Eigen::VectorXd::Zero(dim);
  for (const ChainEntry& e : chain.row(x)) {
    col[static_cast<Eigen::Index>((x << chain.m) | e.y)] =
        std::sqrt(std::ldexp(static_cast<double>(e.num), -chain.t));
  }
  return col;
}

inline std::vector<Eigen::VectorXd> ideal_columns(const MarkovChain& chain) {
  std::vector<Eigen::VectorXd> cols;
  for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
    cols.push_back(ideal_column(chain, x));
  }
  return cols;
}

/// Update columns taken from the simulated circuit.
inline std::vector<Eigen::VectorXd> circuit_columns(
    const UpdateCircuit& circuit) {
  const MarkovChain& chain = circuit.chain;
  const auto dim =
      static_cast<Eigen::Index>(chain.num_states() * chain.num_states());
  std::vector<Eigen::VectorXd> cols;
  for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
    const BranchState state = simulate_update(circuit, x);
    Eigen::VectorXd col = Eigen::VectorXd::Zero(dim);
    for (const Branch& b : state.branches) {
      col[static_cast<Eigen::Index>((x << chain.m) |
                                    b.regs[circuit.layout.reg_R()])] =
          b.amp.real();
    }
    cols.push_back(std::move(col));
  }
  return cols;
}

/// Ref_A = 2 sum_x |phi_x><phi_x| - I for orthonormal columns phi_x.
inline Eigen::MatrixXd reflection_about_columns(
    const std::vector<Eigen::VectorXd>& columns) {
  const auto states = static_cast<Eigen::Index>(columns.size());
  const Eigen::Index dim = states * states;
  for (const auto& col : columns) {
    if (col.size() != dim) {
      throw WalkError("reflection: column dimension mismatch");
    }
  }
  for (Eigen::Index a = 0; a < states; ++a) {
    for (Eigen::Index b = a; b < states; ++b) {
      const double expect = a == b ? 1.0 : 0.0;
      if (std::abs(columns[a].dot(columns[b]) - expect) > 1e-8) {
        throw WalkError("reflection: columns are not orthonormal");
      }
    }
  }
  Eigen::MatrixXd ref = -Eigen::MatrixXd::Identity(dim, dim);
  for (const auto& col : columns) {
    ref.noalias() += 2.0 * col * col.transpose();
  }
  return ref;
}

/// Conjugation by the register swap |x, y> -> |y, x>.
inline Eigen::MatrixXd swap_conjugate(const Eigen::MatrixXd& mat,
                                      Eigen::Index states) {
  const Eigen::Index dim = states * states;
  if (mat.rows() != dim || mat.cols() != dim) {
    throw WalkError("swap_conjugate: dimension mismatch");
  }
  std::vector<Eigen::Index> swap_idx(dim);
  for (Eigen::Index x = 0; x < states; ++x) {
    for (Eigen::Index y = 0; y < states; ++y) {
      swap_idx[x * states + y] = y * states + x;
    }
  }
  Eigen::MatrixXd out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      out(i, j) = mat(swap_idx[i], swap_idx[j]);
    }
  }
  return out;
}

/// W = Ref_B Ref_A from orthonormal update columns; Ref_B is the swap
/// conjugate of Ref_A.
inline Eigen::MatrixXd build_walk(const std::vector<Eigen::VectorXd>& columns) {
  const auto states = static_cast<Eigen::Index>(columns.size());
  if (states == 0 || states > 32) {
    throw WalkError("build_walk: needs 1 <= 2^m <= 32 columns");
  }
  const Eigen::Index dim = states * states;
  const Eigen::MatrixXd ref_a = reflection_about_columns(columns);
  const Eigen::MatrixXd ref_b = swap_conjugate(ref_a, states);
  Eigen::MatrixXd walk = ref_b * ref_a;
  const double unit_dev =
      (walk.transpose() * walk - Eigen::MatrixXd::Identity(dim, dim))
          .cwiseAbs()
          .maxCoeff();
  if (unit_dev > 1e-10) {
    throw WalkError("build_walk: composed operator is not unitary");
  }
  return walk;
}

/// Eigenphases of W and the phase gap. Raw phases below zero_phase_tol
/// count as the stationary space; the default suits ideal columns, while
/// walks assembled from circuit columns need a threshold above the
/// update-precision perturbation of their zero phases.
inline WalkSpectrum phase_gap(const Eigen::MatrixXd& walk,
                              double zero_phase_tol = 1e-9) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(walk, false);
  if (solver.info() != Eigen::Success) {
    throw WalkError("phase_gap: eigensolver failed");
  }
  WalkSpectrum spectrum;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    spectrum.eigenphases.push_back(std::arg(solver.eigenvalues()[i]));
  }
  std::sort(spectrum.eigenphases.begin(), spectrum.eigenphases.end());
  for (double phase : spectrum.eigenphases) {
    if (std::abs(phase) >= zero_phase_tol) {
      const double theta = std::abs(phase) / 2.0;
      if (!spectrum.has_gap || theta < spectrum.phase_gap) {
        spectrum.phase_gap = theta;
        spectrum.has_gap = true;
      }
    }
  }
  return spectrum;
}

/// ||W psi_pi - psi_pi|| with psi_pi = sum_xy sqrt(pi_x p_xy) |x, y>,
/// reading pi_xy as pi_x p_xy.
inline double check_stationary_eigenvector(const Eigen::MatrixXd& walk,
                                           const MarkovChain& chain) {
  const std::vector<double> pi = stationary_distribution(chain);
  const auto dim =
      static_cast<Eigen::Index>(chain.num_states() * chain.num_states());
  if (walk.rows() != dim) {
    throw WalkError("check_stationary_eigenvector: dimension mismatch");
  }
  Eigen::VectorXd psi = Eigen::VectorXd::Zero(dim);
  for (std::uint64_t x = 0; x < chain.num_states(); ++x) {
    for (const ChainEntry& e : chain.row(x)) {
      psi[static_cast<Eigen::Index>((x << chain.m) | e.y)] = std::sqrt(
          pi[x] * std::ldexp(static_cast<double>(e.num), -chain.t));
    }
  }
  psi.normalize();
  return (walk * psi - psi).norm();
}

}  // namespace qwalk
