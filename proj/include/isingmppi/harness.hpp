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

#include "isingmppi/controllers.hpp"
#include "isingmppi/qubo.hpp"
#include "isingmppi/scenarios.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace imppi {

enum class ControllerKind { kIsing, kLinear, kReference };

std::string_view to_string(ControllerKind kind);
ControllerKind parse_controller_kind(std::string_view text);

/// Settings shared by every harness command. Keys accepted by set() match the
/// CLI flag names without the leading dashes, e.g. "n-traj", "k-speed".
struct ExperimentConfig {
  /// Empty selects the command default: all three for tables, ising and
  /// linear for sweeps.
  std::vector<ControllerKind> controllers;
  std::size_t n_traj = 50;
  std::size_t n_seeds = 10;
  /// S values. One value overrides the per-controller default in run-table
  /// and run-trial; run-sweep uses the whole list as its grid.
  std::vector<std::size_t> sweeps;
  /// M values, same convention as `sweeps`.
  std::vector<std::size_t> iters;
  double lambda = 0.1;
  std::size_t horizon = 8;
  double dt = 0.1;
  int bits = 5;
  double k_speed = 15.0;
  double k_steer = 2.2;
  std::array<double, kControlDim> sigma{1.5, 0.3};
  double ds = kDefaultSpacing;
  /// Initial forward speed; unset means ds / dt, the pace of the reference.
  std::optional<double> v0;
  /// Gibbs chain start for the Ising controller.
  InitMode init = InitMode::kZeros;
  std::uint64_t seed0 = 0;
  std::size_t jobs = 1;
  bool timing = false;
  std::filesystem::path out = "out";
  // Single-trial selectors for run-trial and dump-qubo.
  std::uint64_t traj_seed = 0;
  std::uint64_t sample_seed = 0;
  std::size_t step = 0;

  /// Applies one key/value setting. Throws std::invalid_argument on unknown
  /// keys or unparsable values.
  void set(std::string_view key, std::string_view value);
  /// Reads `key = value` lines; blank lines and `#` comments are skipped.
  void load_file(const std::filesystem::path& path);
  void validate() const;

  /// Controller configuration with per-controller defaults (ising M=4, S=200;
  /// linear and reference M=4, S=1000) and any overrides applied.
  ControllerConfig controller_config(ControllerKind kind, std::size_t sweeps_value,
                                     std::size_t iters_value) const;
  ControllerConfig controller_config(ControllerKind kind) const;
  std::size_t default_sweeps(ControllerKind kind) const;
  double initial_speed() const;
  /// Scenario `seed` at this spacing and initial speed.
  ReferenceTrajectory scenario(std::uint64_t seed) const;
  std::size_t default_iters(ControllerKind kind) const;

  /// Flat key/value text of every setting except `out`, in a fixed order.
  std::string echo() const;
  /// Text value of one setting, as accepted by set().
  std::string get(std::string_view key) const;
};

struct AggregateRow {
  std::string controller;
  std::size_t iterations = 0;
  std::size_t samples = 0;
  double mean_mse = 0.0;
  double std_mse = 0.0;
  std::size_t n_ok = 0;
  std::size_t n_diverged = 0;
  double mean_wall_time = 0.0;
};

/// Mean and population standard deviation over non-diverged trials.
AggregateRow aggregate(std::string controller, std::size_t iterations, std::size_t samples,
                       const std::vector<TrialResult>& trials, bool timing);

/// Per-trial stream seed, a mix of the trajectory seed, sampling seed and a
/// fixed controller tag (ising 1, linear 2, reference 3).
std::uint64_t trial_seed(std::uint64_t traj_seed, std::uint64_t sample_seed, ControllerKind kind);

/// Runs every (trajectory, seed) pair for each selected controller. Writes
/// `trials/<controller>_t<traj>_s<seed>.json` and `table.csv` under cfg.out.
std::vector<AggregateRow> run_table(const ExperimentConfig& cfg);

/// Grid over M x S on the scenario with seed cfg.seed0. Writes `sweep.csv`.
std::vector<AggregateRow> run_sweep(const ExperimentConfig& cfg);

/// Writes `traj_<seed>.csv` for seeds seed0 .. seed0+n-1 into `out`.
std::vector<std::filesystem::path> gen_trajectories(std::size_t n, std::uint64_t seed0, double ds,
                                                    const std::filesystem::path& out);

/// One trial on scenario cfg.traj_seed with sampling seed cfg.sample_seed,
/// for the first selected controller (ising when none is selected).
TrialResult run_trial(const ExperimentConfig& cfg);

/// Drives the Ising controller for cfg.step steps, then returns the QUBO of
/// the first iteration at the resulting state.
QuboProblem dump_qubo(const ExperimentConfig& cfg);

void write_table_csv(std::ostream& os, const std::vector<AggregateRow>& rows);
void write_sweep_csv(std::ostream& os, const std::vector<AggregateRow>& rows);

/// JSON document for one trial: config echo, seeds, per-step u0, realized and
/// reference positions, mse (null when diverged), wall times when enabled.
std::string trial_json(const ExperimentConfig& cfg, ControllerKind kind, std::uint64_t traj_seed,
                       std::uint64_t sample_seed, const TrialResult& trial);

}  // namespace imppi
