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
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

using namespace imppi;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

void check_vec(const StateVec& got, std::initializer_list<double> want, double tol = 1e-12) {
  int i = 0;
  for (double w : want) {
    CHECK(std::abs(got(i) - w) < tol);
    ++i;
  }
}

}  // namespace

TEST_CASE("vector field at hand-evaluated points") {
  check_vec(derivative({0, 0, kPi / 2, 2, 0}, {1, 0.5}), {0, 2, 0, 1, 0.5});
  check_vec(derivative({1, 1, 0, 1, kPi / 4}, {0, 0}), {1, 0, 1, 0, 0});
}

TEST_CASE("wheelbase scales the yaw rate") {
  const StateVec f = derivative({0, 0, 0, 2, kPi / 4}, {0, 0}, ModelParams{2.0});
  CHECK(f(2) == Approx(1.0));
}

TEST_CASE("steering at or beyond pi/2 is rejected") {
  CHECK_THROWS_AS(derivative({0, 0, 0, 1, kPi / 2}, {0, 0}), std::domain_error);
  CHECK_THROWS_AS(derivative({0, 0, 0, 1, -2.0}, {0, 0}), std::domain_error);
  CHECK_THROWS_AS(jacobians({0, 0, 0, 1, 1.6}, {0, 0}), std::domain_error);
  CHECK(steering_in_domain({0, 0, 0, 0, 1.5}));
  CHECK_FALSE(steering_in_domain({0, 0, 0, 0, -kPi / 2}));
}

TEST_CASE("jacobians at rest") {
  const Jacobians j = jacobians({0, 0, 0, 0, 0}, {0, 0});
  StateMat a_want = StateMat::Zero();
  a_want(0, 3) = 1.0;
  InputMat b_want = InputMat::Zero();
  b_want(3, 0) = 1.0;
  b_want(4, 1) = 1.0;
  CHECK(j.A == a_want);
  CHECK(j.B == b_want);
}

TEST_CASE("jacobians match central finite differences") {
  CounterRng rng(0xD1FF);
  const double eps = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    const State x = testing::random_state(rng);
    const Control u = testing::random_control(rng);
    const Jacobians j = jacobians(x, u);
    for (int k = 0; k < kStateDim; ++k) {
      StateVec hi = x.vec(), lo = x.vec();
      hi(k) += eps;
      lo(k) -= eps;
      const StateVec col = (derivative(State::from(hi), u) - derivative(State::from(lo), u)) / (2 * eps);
      CHECK((col - j.A.col(k)).cwiseAbs().maxCoeff() < 1e-5);
    }
    for (int k = 0; k < kControlDim; ++k) {
      ControlVec hi = u.vec(), lo = u.vec();
      hi(k) += eps;
      lo(k) -= eps;
      const StateVec col = (derivative(x, Control::from(hi)) - derivative(x, Control::from(lo))) / (2 * eps);
      CHECK((col - j.B.col(k)).cwiseAbs().maxCoeff() < 1e-5);
    }
  }
}

TEST_CASE("Euler step") {
  const State x = step_nonlinear({0, 0, 0, 1, kPi / 4}, {0, 0}, 0.1);
  check_vec(x.vec(), {0.1, 0, 0.1, 1, kPi / 4});
  CHECK_THROWS_AS(step_nonlinear({}, {}, 0.0), std::invalid_argument);
}

TEST_CASE("residuals vanish at rest with zero nominal controls") {
  const std::vector<Control> ubar(4);
  const auto steps = linearize_along({}, ubar, 0.1);
  REQUIRE(steps.size() == 4);
  for (const auto& s : steps) CHECK(s.residual.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single-step horizon yields one record at the initial point") {
  const State x0{1, 2, 0.3, 1.5, 0.1};
  const std::vector<Control> ubar{{0.5, -0.2}};
  const auto steps = linearize_along(x0, ubar, 0.1);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].xbar == x0);
  CHECK(steps[0].ubar == ubar[0]);
}

TEST_CASE("linearized step is exact at the nominal point") {
  CounterRng rng(0xA11);
  for (int trial = 0; trial < 50; ++trial) {
    const State x = testing::random_state(rng);
    const Control u = testing::random_control(rng);
    const LinearizedStep s = linearize_at(x, u);
    const StateVec lin = step_linearized(s, x.vec(), u.vec(), 0.1);
    CHECK((lin - step_nonlinear(x, u, 0.1).vec()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("nominal rollout follows the nonlinear model") {
  CounterRng rng(0xB0B);
  const State x0 = testing::random_state(rng);
  std::vector<Control> ubar(6);
  for (auto& u : ubar) u = {rng.uniform(-1, 1), rng.uniform(-0.5, 0.5)};
  const auto steps = linearize_along(x0, ubar, 0.05);
  State x = x0;
  for (std::size_t n = 0; n < ubar.size(); ++n) {
    CHECK(steps[n].xbar == x);
    x = step_nonlinear(x, ubar[n], 0.05);
  }
}

TEST_CASE("non-finite nominal rollout is reported as divergence") {
  const std::vector<Control> ubar{{1e308, 0}, {1e308, 0}, {0, 0}};
  CHECK_THROWS_AS(linearize_along({0, 0, 0, 1e308, 0}, ubar, 10.0), DivergenceError);
}
