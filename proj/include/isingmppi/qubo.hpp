/*
 Copyright 2026 The isingmppi Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include "isingmppi/dynamics.hpp"
#include "isingmppi/types.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace imppi {

/// State-transition matrix of the linearized horizon:
/// identity for i == j, otherwise (I + A_{j-1} dt) ... (I + A_i dt).
/// Throws std::out_of_range unless 0 <= i <= j <= steps.size().
Eigen::MatrixXd phi(std::size_t i, std::size_t j, std::span<const LinearizedStep> steps, double dt);

/// Condensed prediction over the horizon:
///   [x_1; ...; x_N] = A_blk x_0 + B_blk [u_0; ...; u_{N-1}] + c.
/// Row block j holds x_{j+1}; block (j, i) of B_blk is Phi(i+1, j+1) B_i dt for
/// i <= j and zero above the block diagonal.
struct HorizonMatrices {
  Eigen::MatrixXd A_blk;  // (N s) x s
  Eigen::MatrixXd B_blk;  // (N s) x (N m)
  Eigen::VectorXd c;      // N s
  std::size_t horizon = 0;
  std::size_t state_dim = 0;
  std::size_t control_dim = 0;

  Eigen::VectorXd predict(const Eigen::VectorXd& x0, const Eigen::VectorXd& u) const {
    return A_blk * x0 + B_blk * u + c;
  }
};

HorizonMatrices build_horizon(std::span<const LinearizedStep> steps, double dt);

/// Fixed-point expansion from bits to stacked controls, u = E a.
/// Bit layout of `a`: timestep-major, then input, then bit (LSB first, signed
/// MSB last). For L bits and magnitude K, bit i < L weighs K 2^(i-1) / 2^(L-1)
/// and the last bit weighs -K.
struct ExpansionMatrix {
  Eigen::MatrixXd E;  // (N m) x (N L m)
  int bits = 0;
  std::vector<double> magnitudes;
  std::size_t horizon = 0;

  std::size_t inputs() const { return magnitudes.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(E.cols()); }
  /// Per-bit weights for one input, LSB first.
  std::vector<double> row(std::size_t input) const;
  /// Stacked controls for a bit vector.
  Eigen::VectorXd decode(std::span<const std::uint8_t> a) const;
};

ExpansionMatrix build_expansion(int bits, std::span<const double> magnitudes, std::size_t horizon);

/// Diagonal stage weights, one per state and one per input; Q >= 0 and R > 0.
struct CostWeights {
  Eigen::VectorXd q_diag;
  Eigen::VectorXd r_diag;

  /// diag(1000, 1000, 1, 0, 0) and diag(1, 1).
  static CostWeights bicycle_default();
  void validate() const;
  Eigen::VectorXd stacked_q(std::size_t horizon) const;
  Eigen::VectorXd stacked_r(std::size_t horizon) const;
};

/// H(a) = a^T J a + h^T a over a in {0,1}^d.
struct QuboProblem {
  Eigen::MatrixXd J;
  Eigen::VectorXd h;
  double lambda_hint = 0.1;
  std::size_t horizon = 0;
  std::size_t bits = 0;
  std::size_t inputs = 0;

  std::size_t dim() const { return static_cast<std::size_t>(h.size()); }
  bool is_symmetrized(double tol = 0.0) const;
};

/// J = E^T (B^T Q B + R) E,   h^T = 2 (A x0 + B ubar + c - xref)^T Q B E.
/// The a-independent constant of the quadratic cost is dropped; R weighs the
/// deviation E a from `ubar`.
QuboProblem assemble_qubo(const HorizonMatrices& hm, const ExpansionMatrix& ex,
                          const CostWeights& w, const Eigen::VectorXd& x0,
                          const Eigen::VectorXd& ubar, const Eigen::VectorXd& xref);

/// J <- (J + J^T)/2, h <- h + diag(J), diag(J) <- 0. Preserves H on binary inputs.
QuboProblem symmetrize(QuboProblem q);

/// a^T J a + h^T a. Throws std::invalid_argument on length mismatch or non-binary entries.
double energy(const QuboProblem& q, std::span<const std::uint8_t> a);

/// Continuous counterpart of the QUBO with the expansion removed:
/// H(du) = du^T J du + h^T du.
struct LinearCost {
  Eigen::MatrixXd J;
  Eigen::VectorXd h;

  double evaluate(const Eigen::VectorXd& du) const { return du.dot(J * du) + h.dot(du); }
  Eigen::VectorXd gradient(const Eigen::VectorXd& du) const { return 2.0 * J * du + h; }
};

LinearCost assemble_linear_cost(const HorizonMatrices& hm, const CostWeights& w,
                                const Eigen::VectorXd& x0, const Eigen::VectorXd& ubar,
                                const Eigen::VectorXd& xref);

/// Stacks a control sequence into a single (N m) vector.
Eigen::VectorXd stack_controls(std::span<const Control> u);
/// Stacks states into a single (N s) vector.
Eigen::VectorXd stack_states(std::span<const State> x);

}  // namespace imppi
