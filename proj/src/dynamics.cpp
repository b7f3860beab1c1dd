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

#include "isingmppi/dynamics.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace imppi {

namespace {

void check_domain(const State& x) {
  if (!steering_in_domain(x)) {
    throw std::domain_error("steering angle outside (-pi/2, pi/2): " + std::to_string(x.delta));
  }
}

}  // namespace

bool steering_in_domain(const State& x) {
  return std::isfinite(x.delta) && std::abs(x.delta) < std::numbers::pi / 2.0;
}

StateVec derivative(const State& x, const Control& u, const ModelParams& p) {
  check_domain(x);
  StateVec dx;
  dx << x.v * std::cos(x.theta), x.v * std::sin(x.theta), x.v / p.wheelbase * std::tan(x.delta),
      u.accel, u.steer_rate;
  return dx;
}

Jacobians jacobians(const State& x, const Control& /*u*/, const ModelParams& p) {
  check_domain(x);
  const double c = std::cos(x.theta);
  const double s = std::sin(x.theta);
  const double cd = std::cos(x.delta);

  Jacobians jac;
  jac.A.setZero();
  jac.A(0, 2) = -x.v * s;
  jac.A(0, 3) = c;
  jac.A(1, 2) = x.v * c;
  jac.A(1, 3) = s;
  jac.A(2, 3) = std::tan(x.delta) / p.wheelbase;
  jac.A(2, 4) = x.v / (p.wheelbase * cd * cd);

  jac.B.setZero();
  jac.B(3, 0) = 1.0;
  jac.B(4, 1) = 1.0;
  return jac;
}

State step_nonlinear(const State& x, const Control& u, double dt, const ModelParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  return State::from(x.vec() + dt * derivative(x, u, p));
}

LinearizedStep linearize_at(const State& xbar, const Control& ubar, const ModelParams& p) {
  const Jacobians jac = jacobians(xbar, ubar, p);
  LinearizedStep step;
  step.A = jac.A;
  step.B = jac.B;
  step.residual = derivative(xbar, ubar, p) - jac.A * xbar.vec() - jac.B * ubar.vec();
  step.xbar = xbar;
  step.ubar = ubar;
  return step;
}

std::vector<LinearizedStep> linearize_along(const State& x0, std::span<const Control> ubar,
                                            double dt, const ModelParams& p) {
  if (ubar.empty()) throw std::invalid_argument("linearize_along needs at least one control");
  std::vector<LinearizedStep> steps;
  steps.reserve(ubar.size());
  State x = x0;
  for (std::size_t n = 0; n < ubar.size(); ++n) {
    if (!x.finite()) throw DivergenceError("nominal rollout produced a non-finite state");
    steps.push_back(linearize_at(x, ubar[n], p));
    if (n + 1 < ubar.size()) x = step_nonlinear(x, ubar[n], dt, p);
  }
  return steps;
}

StateVec step_linearized(const LinearizedStep& step, const StateVec& x, const ControlVec& u,
                         double dt) {
  return x + dt * (step.A * x + step.B * u + step.residual);
}

}  // namespace imppi
