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

#include "isingmppi/dynamics.hpp"
#include "isingmppi/qubo.hpp"
#include "isingmppi/sampler.hpp"
#include "isingmppi/scenarios.hpp"
#include "isingmppi/types.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace imppi {

/// Sampling-based MPC over binary control encodings, solved by Gibbs sampling.
struct IsingMppiConfig {
  std::size_t horizon = 8;
  std::size_t iterations = 4;
  std::size_t sweeps = 200;
  double lambda = 0.1;
  int bits = 5;
  std::vector<double> magnitudes{15.0, 2.2};
  double dt = 0.1;
  CostWeights weights = CostWeights::bicycle_default();
  ModelParams model;
  /// All-zero bits encode a zero deviation from the nominal controls.
  InitMode init = InitMode::kZeros;
  std::size_t burn_in = 0;
  ScanOrder scan = ScanOrder::kCyclic;
  bool warm_start = false;
  /// Replaces the Gibbs sampler when set (used to substitute exact minimizers).
  std::function<BitVector(const QuboProblem&)> bit_solver;

  void validate() const;
};

/// MPPI with Gaussian perturbations scored by the condensed linear cost.
struct LinearMppiConfig {
  std::size_t horizon = 8;
  std::size_t iterations = 4;
  std::size_t samples = 1000;
  double lambda = 0.1;
  std::array<double, kControlDim> noise_sigma{1.5, 0.3};
  double dt = 0.1;
  CostWeights weights = CostWeights::bicycle_default();
  ModelParams model;
  bool warm_start = false;

  void validate() const;
};

/// MPPI with Gaussian perturbations scored by nonlinear rollouts.
struct ReferenceMppiConfig {
  std::size_t horizon = 8;
  std::size_t iterations = 4;
  std::size_t samples = 1000;
  double lambda = 0.1;
  std::array<double, kControlDim> noise_sigma{1.5, 0.3};
  double dt = 0.1;
  CostWeights weights = CostWeights::bicycle_default();
  ModelParams model;
  bool warm_start = false;
  /// Heading error is wrapped to (-pi, pi] inside rollout costs.
  bool wrap_heading = true;

  void validate() const;
};

using ControllerConfig = std::variant<IsingMppiConfig, LinearMppiConfig, ReferenceMppiConfig>;

struct ControlStepResult {
  Control u0;
  std::vector<Control> ubar;
  std::vector<double> per_iteration_energy;
  double wall_time = 0.0;
};

/// All sampled rollouts were infeasible or their weights underflowed.
class DegenerateWeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Normalized exp(-(cost - min cost) / lambda). Infinite costs get zero weight.
std::vector<double> boltzmann_weights(std::span<const double> costs, double lambda);

/// Symmetrized QUBO of one Ising-MPPI iteration: linearize along `ubar`,
/// condense, expand and assemble.
QuboProblem build_step_qubo(const State& x0, std::span<const State> xref_window,
                            const IsingMppiConfig& cfg, std::span<const Control> ubar);

ControlStepResult ising_mppi_step(const State& x0, std::span<const State> xref_window,
                                  const IsingMppiConfig& cfg, std::uint64_t seed,
                                  std::span<const Control> warm = {});

ControlStepResult non_ising_linear_mppi_step(const State& x0, std::span<const State> xref_window,
                                             const LinearMppiConfig& cfg, std::uint64_t seed,
                                             std::span<const Control> warm = {});

ControlStepResult reference_mppi_step(const State& x0, std::span<const State> xref_window,
                                      const ReferenceMppiConfig& cfg, std::uint64_t seed,
                                      std::span<const Control> warm = {});

/// Stage cost of one nonlinear rollout of `u` from x0 against the window,
/// summed over predicted states x_1..x_N and inputs u_0..u_{N-1}.
/// Returns +inf when the rollout leaves the steering domain.
double rollout_cost(const State& x0, std::span<const Control> u, std::span<const State> xref_window,
                    const ReferenceMppiConfig& cfg);

struct TrialResult {
  std::vector<State> realized;
  std::vector<State> reference;
  /// Mean squared position error over executed steps; +inf when diverged.
  double mse = 0.0;
  std::vector<ControlStepResult> per_step;
  bool diverged = false;
  std::string failure;
};

using StepFunction = std::function<ControlStepResult(
    const State& x, std::span<const State> window, std::uint64_t step_seed,
    std::span<const Control> warm)>;

struct ClosedLoopOptions {
  std::size_t horizon = 8;
  double dt = 0.1;
  ModelParams model;
  bool warm_start = false;
};

/// Receding-horizon loop. At step k the controller sees reference states
/// k+1..k+N; the applied input moves the plant one Euler step and the error
/// of the new position against reference k+1 enters the MSE. Stops when fewer
/// than N reference states remain ahead.
TrialResult run_closed_loop(const ReferenceTrajectory& scenario, const StepFunction& controller,
                            const ClosedLoopOptions& options, std::uint64_t seed);

TrialResult run_closed_loop(const ReferenceTrajectory& scenario, const ControllerConfig& config,
                            std::uint64_t seed);

std::string controller_name(const ControllerConfig& config);

}  // namespace imppi
