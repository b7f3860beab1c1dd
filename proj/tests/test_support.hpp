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

// Random instances shared by the unit tests and the acceptance binary.

#pragma once

#include "isingmppi/qubo.hpp"
#include "isingmppi/rng.hpp"

#include <cstdint>

namespace imppi::testing {

// Dense QUBO with J_ij ~ U(-j_scale, j_scale), h_i ~ U(-h_scale, h_scale).
inline QuboProblem random_qubo(CounterRng& rng, std::size_t d, double j_scale, double h_scale) {
  const auto n = static_cast<Eigen::Index>(d);
  QuboProblem q;
  q.J = Eigen::MatrixXd::Zero(n, n);
  q.h = Eigen::VectorXd::Zero(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    q.h(i) = rng.uniform(-h_scale, h_scale);
    for (Eigen::Index j = 0; j < n; ++j) q.J(i, j) = rng.uniform(-j_scale, j_scale);
  }
  return q;
}

// Random state inside the steering domain with moderate speed.
inline State random_state(CounterRng& rng) {
  return {rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-3.2, 3.2), rng.uniform(-3, 6),
          rng.uniform(-1.2, 1.2)};
}

inline Control random_control(CounterRng& rng) {
  return {rng.uniform(-10, 10), rng.uniform(-2, 2)};
}

}  // namespace imppi::testing
