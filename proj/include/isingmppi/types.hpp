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

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace imppi {

inline constexpr int kStateDim = 5;
inline constexpr int kControlDim = 2;

using StateVec = Eigen::Matrix<double, kStateDim, 1>;
using ControlVec = Eigen::Matrix<double, kControlDim, 1>;
using StateMat = Eigen::Matrix<double, kStateDim, kStateDim>;
using InputMat = Eigen::Matrix<double, kStateDim, kControlDim>;

/// Binary assignment; every entry is 0 or 1.
using BitVector = std::vector<std::uint8_t>;

/// Kinematic bicycle state. Heading is kept unwrapped.
struct State {
  double px = 0.0;
  double py = 0.0;
  double theta = 0.0;
  double v = 0.0;
  double delta = 0.0;

  StateVec vec() const {
    StateVec x;
    x << px, py, theta, v, delta;
    return x;
  }
  static State from(const StateVec& x) { return {x(0), x(1), x(2), x(3), x(4)}; }
  bool finite() const {
    return std::isfinite(px) && std::isfinite(py) && std::isfinite(theta) &&
           std::isfinite(v) && std::isfinite(delta);
  }
  bool operator==(const State&) const = default;
};

struct Control {
  double accel = 0.0;
  double steer_rate = 0.0;

  ControlVec vec() const { return ControlVec(accel, steer_rate); }
  static Control from(const ControlVec& u) { return {u(0), u(1)}; }
  bool operator==(const Control&) const = default;
};

struct ModelParams {
  double wheelbase = 1.0;
};

/// Raised when a closed-loop or nominal rollout leaves the finite domain.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace imppi
