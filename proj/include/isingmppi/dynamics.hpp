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

#include "isingmppi/types.hpp"

#include <span>
#include <vector>

namespace imppi {

// Kinematic bicycle with steering dynamics:
//   d/dt [px, py, theta, v, delta] = [v cos(theta), v sin(theta), v tan(delta) / L, a, omega]

/// True when the steering angle is inside the open interval (-pi/2, pi/2).
bool steering_in_domain(const State& x);

/// Continuous-time vector field. Throws std::domain_error if |delta| >= pi/2.
StateVec derivative(const State& x, const Control& u, const ModelParams& p = {});

struct Jacobians {
  StateMat A;
  InputMat B;
};

/// Analytic df/dx and df/du at (x, u).
Jacobians jacobians(const State& x, const Control& u, const ModelParams& p = {});

/// Explicit Euler: x + dt * f(x, u).
State step_nonlinear(const State& x, const Control& u, double dt, const ModelParams& p = {});

/// First-order model of the dynamics around a nominal point.
struct LinearizedStep {
  StateMat A;
  InputMat B;
  StateVec residual;  // f(xbar, ubar) - A xbar - B ubar
  State xbar;
  Control ubar;
};

LinearizedStep linearize_at(const State& xbar, const Control& ubar, const ModelParams& p = {});

/// Rolls the nonlinear model forward from x0 under `ubar` and linearizes at
/// each nominal point (xbar_n, ubar_n), n = 0..N-1.
std::vector<LinearizedStep> linearize_along(const State& x0, std::span<const Control> ubar,
                                            double dt, const ModelParams& p = {});

/// (I + A dt) x + B dt u + residual dt.
StateVec step_linearized(const LinearizedStep& step, const StateVec& x, const ControlVec& u,
                         double dt);

}  // namespace imppi
