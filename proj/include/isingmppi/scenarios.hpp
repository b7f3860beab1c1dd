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

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace imppi {

struct ControlPointSet {
  std::vector<Eigen::Vector2d> points;
  std::uint64_t seed = 0;
};

struct ReferenceTrajectory {
  /// Reference states; v and delta are zero, theta follows the path tangent.
  std::vector<State> states;
  State initial_state;
  double ds = 0.0;
};

inline constexpr std::size_t kControlPoints = 8;
inline constexpr double kMinStepDistance = 4.0;
inline constexpr double kMaxStepDistance = 5.0;
inline constexpr double kDefaultSpacing = 0.5;

/// Random walk of control points starting at the origin. The first heading
/// is uniform in [0, 2 pi); each later heading turns by at most pi/2 from the
/// previous segment; step lengths are uniform in [4, 5].
ControlPointSet generate_control_points(std::uint64_t seed);

/// Centripetal Catmull-Rom spline through the points, resampled at roughly
/// uniform arc length `ds`. Each spline segment is split into an integer number
/// of equal-arc-length pieces, so every control point is also a sample.
ReferenceTrajectory spline_resample(const ControlPointSet& cps, double ds);

/// generate_control_points followed by spline_resample. The vehicle starts at
/// the origin on the path heading with forward speed `initial_speed`.
ReferenceTrajectory make_scenario(std::uint64_t seed, double ds = kDefaultSpacing,
                                  double initial_speed = 0.0);

/// Builds a trajectory from explicit reference states; the vehicle starts at
/// the first reference position and heading, at rest.
ReferenceTrajectory trajectory_from_states(std::vector<State> states, double ds = 0.0);

}  // namespace imppi
