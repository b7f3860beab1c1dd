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

#include "isingmppi/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace imppi {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kArcTableSize = 2048;

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * kPi);
  return a <= -kPi ? a + 2.0 * kPi : a;
}

// One Catmull-Rom segment from p1 to p2 in cubic Hermite form on u in [0, 1].
struct HermiteSegment {
  Eigen::Vector2d p1, p2, m1, m2;

  Eigen::Vector2d at(double u) const {
    const double u2 = u * u;
    const double u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * p1 + (u3 - 2 * u2 + u) * m1 + (-2 * u3 + 3 * u2) * p2 +
           (u3 - u2) * m2;
  }
  Eigen::Vector2d tangent(double u) const {
    const double u2 = u * u;
    return (6 * u2 - 6 * u) * p1 + (3 * u2 - 4 * u + 1) * m1 + (-6 * u2 + 6 * u) * p2 +
           (3 * u2 - 2 * u) * m2;
  }
};

HermiteSegment centripetal_segment(const Eigen::Vector2d& q0, const Eigen::Vector2d& q1,
                                   const Eigen::Vector2d& q2, const Eigen::Vector2d& q3) {
  const auto knot = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return std::sqrt((b - a).norm());
  };
  const double d01 = knot(q0, q1);
  const double d12 = knot(q1, q2);
  const double d23 = knot(q2, q3);
  if (d01 <= 0.0 || d12 <= 0.0 || d23 <= 0.0) {
    throw std::invalid_argument("consecutive control points coincide");
  }
  // Barry-Goldman tangents with respect to the centripetal knot parameter,
  // rescaled to the unit interval of this segment.
  Eigen::Vector2d m1 = (q1 - q0) / d01 - (q2 - q0) / (d01 + d12) + (q2 - q1) / d12;
  Eigen::Vector2d m2 = (q2 - q1) / d12 - (q3 - q1) / (d12 + d23) + (q3 - q2) / d23;
  return {q1, q2, m1 * d12, m2 * d12};
}

// Cumulative chord length over a fine uniform grid in u.
std::vector<double> arc_table(const HermiteSegment& seg) {
  std::vector<double> s(kArcTableSize + 1, 0.0);
  Eigen::Vector2d prev = seg.at(0.0);
  for (int k = 1; k <= kArcTableSize; ++k) {
    const Eigen::Vector2d cur = seg.at(static_cast<double>(k) / kArcTableSize);
    s[k] = s[k - 1] + (cur - prev).norm();
    prev = cur;
  }
  return s;
}

double parameter_at_length(const std::vector<double>& table, double target) {
  const auto it = std::lower_bound(table.begin(), table.end(), target);
  if (it == table.begin()) return 0.0;
  if (it == table.end()) return 1.0;
  const auto k = static_cast<double>(it - table.begin());
  const double hi = *it;
  const double lo = *(it - 1);
  const double frac = hi > lo ? (target - lo) / (hi - lo) : 0.0;
  return (k - 1.0 + frac) / kArcTableSize;
}

}  // namespace

ControlPointSet generate_control_points(std::uint64_t seed) {
  CounterRng rng(combine_seeds({seed, 0x5CE7A410ULL}));
  ControlPointSet cps;
  cps.seed = seed;
  cps.points.reserve(kControlPoints);
  cps.points.emplace_back(0.0, 0.0);
  double heading = rng.uniform(0.0, 2.0 * kPi);
  for (std::size_t k = 1; k < kControlPoints; ++k) {
    if (k > 1) heading += rng.uniform(-kPi / 2.0, kPi / 2.0);
    const double dist = rng.uniform(kMinStepDistance, kMaxStepDistance);
    cps.points.push_back(cps.points.back() + dist * Eigen::Vector2d(std::cos(heading), std::sin(heading)));
  }
  return cps;
}

ReferenceTrajectory spline_resample(const ControlPointSet& cps, double ds) {
  if (!(ds > 0.0)) throw std::invalid_argument("reference spacing must be positive");
  const auto& pts = cps.points;
  if (pts.size() < 2) throw std::invalid_argument("need at least two control points");

  // Phantom end points continue the first and last segments.
  std::vector<Eigen::Vector2d> ext;
  ext.reserve(pts.size() + 2);
  ext.push_back(2.0 * pts[0] - pts[1]);
  ext.insert(ext.end(), pts.begin(), pts.end());
  ext.push_back(2.0 * pts.back() - pts[pts.size() - 2]);

  std::vector<Eigen::Vector2d> positions;
  std::vector<Eigen::Vector2d> tangents;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const HermiteSegment seg = centripetal_segment(ext[k], ext[k + 1], ext[k + 2], ext[k + 3]);
    const std::vector<double> table = arc_table(seg);
    const double length = table.back();
    const auto pieces = std::max<long>(1, std::lround(length / ds));
    for (long i = 0; i < pieces; ++i) {
      const double u = i == 0 ? 0.0 : parameter_at_length(table, length * i / pieces);
      positions.push_back(seg.at(u));
      tangents.push_back(seg.tangent(u));
    }
    if (k + 2 == pts.size()) {
      positions.push_back(seg.at(1.0));
      tangents.push_back(seg.tangent(1.0));
    }
  }

  ReferenceTrajectory traj;
  traj.ds = ds;
  traj.states.reserve(positions.size());
  double theta = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double raw = std::atan2(tangents[i].y(), tangents[i].x());
    theta = i == 0 ? raw : theta + wrap_angle(raw - theta);
    traj.states.push_back({positions[i].x(), positions[i].y(), theta, 0.0, 0.0});
  }
  // Control points are exact samples; pin the origin against rounding.
  traj.states.front().px = pts.front().x();
  traj.states.front().py = pts.front().y();
  traj.initial_state = {traj.states.front().px, traj.states.front().py, traj.states.front().theta, 0.0, 0.0};
  return traj;
}

ReferenceTrajectory make_scenario(std::uint64_t seed, double ds, double initial_speed) {
  if (!std::isfinite(initial_speed)) throw std::invalid_argument("initial speed must be finite");
  ReferenceTrajectory traj = spline_resample(generate_control_points(seed), ds);
  traj.initial_state.v = initial_speed;
  return traj;
}

ReferenceTrajectory trajectory_from_states(std::vector<State> states, double ds) {
  if (states.empty()) throw std::invalid_argument("empty reference trajectory");
  ReferenceTrajectory traj;
  traj.ds = ds;
  traj.initial_state = {states.front().px, states.front().py, states.front().theta, 0.0, 0.0};
  traj.states = std::move(states);
  return traj;
}

}  // namespace imppi
