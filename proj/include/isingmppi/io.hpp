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

#include "isingmppi/qubo.hpp"
#include "isingmppi/scenarios.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace imppi {

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double x);

// QUBO instance text format:
//   d N L m lambda
//   h_0
//   ...
//   h_{d-1}
//   i j J_ij        (one line per nonzero upper-triangular coupling, i < j)
// The problem must be symmetrized; the reader mirrors each coupling.
void write_qubo(std::ostream& os, const QuboProblem& q);
QuboProblem read_qubo(std::istream& is);
void write_qubo_file(const std::filesystem::path& path, const QuboProblem& q);
QuboProblem read_qubo_file(const std::filesystem::path& path);

// Trajectory CSV: header `idx,px,py,theta`, one row per reference state.
void write_trajectory_csv(std::ostream& os, const ReferenceTrajectory& traj);
ReferenceTrajectory read_trajectory_csv(std::istream& is);
void write_trajectory_file(const std::filesystem::path& path, const ReferenceTrajectory& traj);
ReferenceTrajectory read_trajectory_file(const std::filesystem::path& path);

}  // namespace imppi
