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

#include "isingmppi/scenarios.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace imppi;

namespace {

constexpr double kPi = std::numbers::pi;

double heading(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return std::atan2(b.y() - a.y(), b.x() - a.x());
}

double wrap(double a) { return std::remainder(a, 2 * kPi); }

// Distance from p to the segment ab.
double segment_distance(const Eigen::Vector2d& p, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  const Eigen::Vector2d ab = b - a;
  const double t = std::clamp((p - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
  return (a + t * ab - p).norm();
}

}  // namespace

TEST_CASE("control points start at the origin with bounded steps and turns") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const ControlPointSet cps = generate_control_points(seed);
    REQUIRE(cps.points.size() == 8);
    CHECK(cps.points[0] == Eigen::Vector2d::Zero());
    for (std::size_t k = 1; k < 8; ++k) {
      const double len = (cps.points[k] - cps.points[k - 1]).norm();
      CHECK(len >= 4.0 - 1e-12);
      CHECK(len <= 5.0 + 1e-12);
    }
    for (std::size_t k = 2; k < 8; ++k) {
      const double turn = wrap(heading(cps.points[k - 1], cps.points[k]) - heading(cps.points[k - 2], cps.points[k - 1]));
      CHECK(std::abs(turn) <= kPi / 2 + 1e-12);
    }
  }
}

TEST_CASE("control points are deterministic per seed") {
  CHECK(generate_control_points(5).points == generate_control_points(5).points);
  CHECK(generate_control_points(5).points != generate_control_points(6).points);
}

TEST_CASE("collinear control points give a straight reference") {
  ControlPointSet cps;
  for (int k = 0; k < 8; ++k) cps.points.emplace_back(4.5 * k, 0.0);
  const ReferenceTrajectory traj = spline_resample(cps, 0.5);
  for (const auto& s : traj.states) {
    CHECK(std::abs(s.py) < 1e-12);
    CHECK(std::abs(s.theta) < 1e-12);
  }
  CHECK(traj.states.back().px == doctest::Approx(31.5));
}

TEST_CASE("resampled spacing is close to ds") {
  for (double ds : {0.1, 0.5}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const ReferenceTrajectory traj = make_scenario(seed, ds);
      for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const double step = std::hypot(traj.states[k].px - traj.states[k - 1].px, traj.states[k].py - traj.states[k - 1].py);
        CHECK(step >= 0.9 * ds);
        CHECK(step <= 1.1 * ds);
      }
    }
  }
}

TEST_CASE("path length is near the chord length and passes every control point") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ControlPointSet cps = generate_control_points(seed);
    const ReferenceTrajectory traj = spline_resample(cps, 0.1);
    double chords = 0.0, arc = 0.0;
    for (std::size_t k = 1; k < 8; ++k) chords += (cps.points[k] - cps.points[k - 1]).norm();
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
      arc += std::hypot(traj.states[k].px - traj.states[k - 1].px, traj.states[k].py - traj.states[k - 1].py);
    }
    CHECK(std::abs(arc - chords) <= 0.15 * chords);
    for (const auto& p : cps.points) {
      double best = 1e9;
      for (std::size_t k = 1; k < traj.states.size(); ++k) {
        const Eigen::Vector2d a(traj.states[k - 1].px, traj.states[k - 1].py);
        const Eigen::Vector2d b(traj.states[k].px, traj.states[k].py);
        best = std::min(best, segment_distance(p, a, b));
      }
      CHECK(best < 1e-6);
    }
  }
}

TEST_CASE("headings are continuous and states are references") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const ReferenceTrajectory traj = make_scenario(seed, 1.0);
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
      // Unwrapped: no 2*pi jumps, and no turn sharper than the control polygon allows.
      CHECK(std::abs(traj.states[k].theta - traj.states[k - 1].theta) < kPi / 2);
    }
    for (const auto& s : traj.states) {
      CHECK(s.v == 0.0);
      CHECK(s.delta == 0.0);
    }
  }
}

TEST_CASE("initial state sits at the origin on the path heading") {
  const ReferenceTrajectory rest = make_scenario(4);
  CHECK(rest.initial_state == State{0, 0, rest.states[0].theta, 0, 0});
  CHECK(rest.states[0].px == 0.0);
  CHECK(rest.states[0].py == 0.0);
  CHECK(rest.ds == kDefaultSpacing);
  const ReferenceTrajectory moving = make_scenario(4, 0.5, 5.0);
  CHECK(moving.initial_state.v == 5.0);
  CHECK(moving.states == rest.states);
}

TEST_CASE("invalid spacing is rejected") {
  CHECK_THROWS_AS(make_scenario(0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_scenario(0, -1.0), std::invalid_argument);
}
