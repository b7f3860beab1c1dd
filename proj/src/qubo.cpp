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

#include "isingmppi/qubo.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace imppi {

namespace {

Eigen::MatrixXd transition(const LinearizedStep& step, double dt) {
  const auto s = step.A.rows();
  return Eigen::MatrixXd::Identity(s, s) + step.A * dt;
}

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

Eigen::MatrixXd phi(std::size_t i, std::size_t j, std::span<const LinearizedStep> steps,
                    double dt) {
  if (i > j || j > steps.size()) {
    throw std::out_of_range("phi(" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside horizon of " + std::to_string(steps.size()));
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(kStateDim, kStateDim);
  for (std::size_t k = i; k < j; ++k) out = transition(steps[k], dt) * out;
  return out;
}

HorizonMatrices build_horizon(std::span<const LinearizedStep> steps, double dt) {
  require(!steps.empty(), "build_horizon needs at least one step");
  require(dt > 0.0, "dt must be positive");
  const std::size_t n = steps.size();
  const Eigen::Index s = kStateDim;
  const Eigen::Index m = kControlDim;

  HorizonMatrices hm;
  hm.horizon = n;
  hm.state_dim = s;
  hm.control_dim = m;
  hm.A_blk = Eigen::MatrixXd::Zero(n * s, s);
  hm.B_blk = Eigen::MatrixXd::Zero(n * s, n * m);
  hm.c = Eigen::VectorXd::Zero(n * s);

  // Row block j is obtained from row block j-1 by one application of
  // (I + A_j dt), plus the fresh input and offset terms of step j.
  Eigen::MatrixXd a_prev = Eigen::MatrixXd::Identity(s, s);
  Eigen::VectorXd c_prev = Eigen::VectorXd::Zero(s);
  for (std::size_t j = 0; j < n; ++j) {
    const Eigen::MatrixXd t = transition(steps[j], dt);
    const Eigen::Index row = static_cast<Eigen::Index>(j) * s;

    a_prev = t * a_prev;
    hm.A_blk.block(row, 0, s, s) = a_prev;

    for (std::size_t i = 0; i < j; ++i) {
      const Eigen::Index col = static_cast<Eigen::Index>(i) * m;
      hm.B_blk.block(row, col, s, m) = t * hm.B_blk.block(row - s, col, s, m);
    }
    hm.B_blk.block(row, static_cast<Eigen::Index>(j) * m, s, m) = steps[j].B * dt;

    c_prev = t * c_prev + steps[j].residual * dt;
    hm.c.segment(row, s) = c_prev;
  }
  return hm;
}

std::vector<double> ExpansionMatrix::row(std::size_t input) const {
  if (input >= magnitudes.size()) throw std::out_of_range("expansion input index");
  std::vector<double> out(static_cast<std::size_t>(bits));
  const double k = magnitudes[input];
  const double top = std::ldexp(1.0, bits - 1);
  for (int i = 1; i < bits; ++i) out[i - 1] = k * std::ldexp(1.0, i - 1) / top;
  out[bits - 1] = -k;
  return out;
}

Eigen::VectorXd ExpansionMatrix::decode(std::span<const std::uint8_t> a) const {
  if (a.size() != dim()) throw std::invalid_argument("bit vector length does not match expansion");
  Eigen::VectorXd bits_vec(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) bits_vec(i) = a[i];
  return E * bits_vec;
}

ExpansionMatrix build_expansion(int bits, std::span<const double> magnitudes,
                                std::size_t horizon) {
  require(bits >= 1, "bits per input must be >= 1");
  require(bits <= 52, "bits per input must be <= 52");
  require(!magnitudes.empty(), "at least one input magnitude is required");
  require(horizon >= 1, "horizon must be >= 1");
  for (double k : magnitudes) require(k > 0.0 && std::isfinite(k), "magnitudes must be positive");

  ExpansionMatrix ex;
  ex.bits = bits;
  ex.magnitudes.assign(magnitudes.begin(), magnitudes.end());
  ex.horizon = horizon;
  const std::size_t m = magnitudes.size();
  const std::size_t l = static_cast<std::size_t>(bits);
  ex.E = Eigen::MatrixXd::Zero(horizon * m, horizon * m * l);
  for (std::size_t j = 0; j < m; ++j) {
    const std::vector<double> weights = ex.row(j);
    for (std::size_t n = 0; n < horizon; ++n) {
      const std::size_t r = n * m + j;
      for (std::size_t b = 0; b < l; ++b) ex.E(r, r * l + b) = weights[b];
    }
  }
  return ex;
}

CostWeights CostWeights::bicycle_default() {
  CostWeights w;
  w.q_diag = Eigen::VectorXd(kStateDim);
  w.q_diag << 1000.0, 1000.0, 1.0, 0.0, 0.0;
  w.r_diag = Eigen::VectorXd::Ones(kControlDim);
  return w;
}

void CostWeights::validate() const {
  require(q_diag.size() > 0 && r_diag.size() > 0, "Q and R must be nonempty");
  require((q_diag.array() >= 0.0).all() && q_diag.allFinite(), "Q must be positive semidefinite");
  require((r_diag.array() > 0.0).all() && r_diag.allFinite(), "R must be positive definite");
}

Eigen::VectorXd CostWeights::stacked_q(std::size_t horizon) const {
  return q_diag.replicate(static_cast<Eigen::Index>(horizon), 1);
}

Eigen::VectorXd CostWeights::stacked_r(std::size_t horizon) const {
  return r_diag.replicate(static_cast<Eigen::Index>(horizon), 1);
}

bool QuboProblem::is_symmetrized(double tol) const {
  if (J.rows() != J.cols() || J.rows() != h.size()) return false;
  for (Eigen::Index i = 0; i < J.rows(); ++i) {
    if (std::abs(J(i, i)) > tol) return false;
    for (Eigen::Index j = i + 1; j < J.cols(); ++j) {
      if (std::abs(J(i, j) - J(j, i)) > tol) return false;
    }
  }
  return true;
}

LinearCost assemble_linear_cost(const HorizonMatrices& hm, const CostWeights& w,
                                const Eigen::VectorXd& x0, const Eigen::VectorXd& ubar,
                                const Eigen::VectorXd& xref) {
  w.validate();
  const auto ns = static_cast<Eigen::Index>(hm.horizon * hm.state_dim);
  const auto nm = static_cast<Eigen::Index>(hm.horizon * hm.control_dim);
  require(x0.size() == static_cast<Eigen::Index>(hm.state_dim), "x0 has the wrong dimension");
  require(ubar.size() == nm, "nominal control vector has the wrong length");
  require(xref.size() == ns, "reference vector has the wrong length");
  require(w.q_diag.size() == static_cast<Eigen::Index>(hm.state_dim) &&
              w.r_diag.size() == static_cast<Eigen::Index>(hm.control_dim),
          "cost weights do not match the state and control dimensions");

  const Eigen::VectorXd q = w.stacked_q(hm.horizon);
  const Eigen::VectorXd r = w.stacked_r(hm.horizon);
  const Eigen::MatrixXd qb = q.asDiagonal() * hm.B_blk;

  LinearCost cost;
  cost.J = hm.B_blk.transpose() * qb;
  cost.J.diagonal() += r;
  const Eigen::VectorXd tracking = hm.predict(x0, ubar) - xref;
  cost.h = 2.0 * qb.transpose() * tracking;
  return cost;
}

QuboProblem assemble_qubo(const HorizonMatrices& hm, const ExpansionMatrix& ex,
                          const CostWeights& w, const Eigen::VectorXd& x0,
                          const Eigen::VectorXd& ubar, const Eigen::VectorXd& xref) {
  require(ex.horizon == hm.horizon && ex.inputs() == hm.control_dim,
          "expansion does not match the horizon matrices");
  const LinearCost lin = assemble_linear_cost(hm, w, x0, ubar, xref);
  QuboProblem q;
  q.J = ex.E.transpose() * lin.J * ex.E;
  q.h = ex.E.transpose() * lin.h;
  q.horizon = hm.horizon;
  q.bits = static_cast<std::size_t>(ex.bits);
  q.inputs = ex.inputs();
  return q;
}

QuboProblem symmetrize(QuboProblem q) {
  require(q.J.rows() == q.J.cols() && q.J.rows() == q.h.size(), "QUBO shape mismatch");
  Eigen::MatrixXd sym = 0.5 * (q.J + q.J.transpose());
  q.h += sym.diagonal();
  sym.diagonal().setZero();
  q.J = std::move(sym);
  return q;
}

double energy(const QuboProblem& q, std::span<const std::uint8_t> a) {
  if (a.size() != q.dim()) {
    throw std::invalid_argument("bit vector has length " + std::to_string(a.size()) +
                                ", expected " + std::to_string(q.dim()));
  }
  Eigen::VectorXd x(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > 1) throw std::invalid_argument("bit vector entries must be 0 or 1");
    x(static_cast<Eigen::Index>(i)) = a[i];
  }
  return x.dot(q.J * x) + q.h.dot(x);
}

Eigen::VectorXd stack_controls(std::span<const Control> u) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(u.size()) * kControlDim);
  for (std::size_t n = 0; n < u.size(); ++n) {
    out.segment<kControlDim>(static_cast<Eigen::Index>(n) * kControlDim) = u[n].vec();
  }
  return out;
}

Eigen::VectorXd stack_states(std::span<const State> x) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(x.size()) * kStateDim);
  for (std::size_t n = 0; n < x.size(); ++n) {
    out.segment<kStateDim>(static_cast<Eigen::Index>(n) * kStateDim) = x[n].vec();
  }
  return out;
}

}  // namespace imppi
