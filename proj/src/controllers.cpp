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

#include "isingmppi/controllers.hpp"

#include "isingmppi/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace imppi {

namespace {

using Clock = std::chrono::steady_clock;

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void validate_common(std::size_t horizon, std::size_t iterations, std::size_t samples, double lambda,
                     double dt, const CostWeights& w) {
  require(horizon >= 1, "horizon must be >= 1");
  require(iterations >= 1, "iterations must be >= 1");
  require(samples >= 1, "sample count must be >= 1");
  require(lambda > 0.0 && std::isfinite(lambda), "temperature must be positive");
  require(dt > 0.0 && std::isfinite(dt), "dt must be positive");
  w.validate();
  require(w.q_diag.size() == kStateDim && w.r_diag.size() == kControlDim,
          "cost weights must have 5 state and 2 input entries");
}

void validate_sigma(const std::array<double, kControlDim>& sigma) {
  for (double s : sigma) require(s > 0.0 && std::isfinite(s), "noise sigma must be positive");
}

std::vector<Control> initial_nominal(std::size_t horizon, std::span<const Control> warm) {
  std::vector<Control> ubar(horizon);
  if (!warm.empty()) {
    require(warm.size() == horizon, "warm-start sequence must match the horizon");
    std::copy(warm.begin(), warm.end(), ubar.begin());
  }
  return ubar;
}

void check_window(std::span<const State> window, std::size_t horizon) {
  if (window.size() != horizon) {
    throw std::invalid_argument("reference window has " + std::to_string(window.size()) +
                                " states, expected " + std::to_string(horizon));
  }
}

void add_stacked(std::vector<Control>& ubar, const Eigen::VectorXd& du);

// True when the nonlinear rollout of `ubar` from x0 keeps every state that
// gets linearized inside the steering domain.
bool nominal_in_domain(const State& x0, std::span<const Control> ubar, double dt,
                       const ModelParams& model) {
  State x = x0;
  for (const Control& u : ubar) {
    if (!x.finite() || !steering_in_domain(x)) return false;
    x = step_nonlinear(x, u, dt, model);
  }
  return true;
}

// Applies du to ubar unless the result would leave the steering domain, in
// which case the update is discarded and ubar is kept.
void add_if_in_domain(std::vector<Control>& ubar, const Eigen::VectorXd& du, const State& x0,
                      double dt, const ModelParams& model) {
  std::vector<Control> next = ubar;
  add_stacked(next, du);
  if (nominal_in_domain(x0, next, dt, model)) ubar = std::move(next);
}

void add_stacked(std::vector<Control>& ubar, const Eigen::VectorXd& du) {
  for (std::size_t n = 0; n < ubar.size(); ++n) {
    const auto row = static_cast<Eigen::Index>(n) * kControlDim;
    ubar[n].accel += du(row);
    ubar[n].steer_rate += du(row + 1);
    if (!std::isfinite(ubar[n].accel) || !std::isfinite(ubar[n].steer_rate)) {
      throw DivergenceError("nominal control sequence became non-finite");
    }
  }
}

ControlStepResult finish(std::vector<Control> ubar, std::vector<double> energies, Clock::time_point t0) {
  ControlStepResult out;
  out.u0 = ubar.front();
  out.ubar = std::move(ubar);
  out.per_iteration_energy = std::move(energies);
  out.wall_time = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

// Gaussian perturbations for the stacked control vector, one row per sample.
Eigen::MatrixXd draw_noise(CounterRng& rng, std::size_t samples, std::size_t horizon,
                           const std::array<double, kControlDim>& sigma) {
  const auto dim = static_cast<Eigen::Index>(horizon) * kControlDim;
  Eigen::MatrixXd eps(static_cast<Eigen::Index>(samples), dim);
  for (Eigen::Index k = 0; k < eps.rows(); ++k) {
    for (Eigen::Index c = 0; c < dim; ++c) eps(k, c) = sigma[c % kControlDim] * rng.normal();
  }
  return eps;
}

Eigen::VectorXd weighted_update(const Eigen::MatrixXd& eps, const std::vector<double>& weights) {
  Eigen::VectorXd du = Eigen::VectorXd::Zero(eps.cols());
  for (Eigen::Index k = 0; k < eps.rows(); ++k) {
    const double w = weights[static_cast<std::size_t>(k)];
    if (w != 0.0) du += w * eps.row(k).transpose();
  }
  return du;
}

double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

}  // namespace

void IsingMppiConfig::validate() const {
  validate_common(horizon, iterations, sweeps, lambda, dt, weights);
  require(bits >= 1, "bits per input must be >= 1");
  require(magnitudes.size() == kControlDim, "one magnitude per control input is required");
}

void LinearMppiConfig::validate() const {
  validate_common(horizon, iterations, samples, lambda, dt, weights);
  validate_sigma(noise_sigma);
}

void ReferenceMppiConfig::validate() const {
  validate_common(horizon, iterations, samples, lambda, dt, weights);
  validate_sigma(noise_sigma);
}

std::vector<double> boltzmann_weights(std::span<const double> costs, double lambda) {
  require(lambda > 0.0, "temperature must be positive");
  require(!costs.empty(), "no costs to weight");
  double lowest = std::numeric_limits<double>::infinity();
  for (double c : costs) {
    if (std::isnan(c)) throw DegenerateWeightsError("NaN rollout cost");
    lowest = std::min(lowest, c);
  }
  if (!std::isfinite(lowest)) throw DegenerateWeightsError("every sampled rollout is infeasible");
  std::vector<double> w(costs.size());
  double z = 0.0;
  for (std::size_t k = 0; k < costs.size(); ++k) {
    w[k] = std::isfinite(costs[k]) ? std::exp(-(costs[k] - lowest) / lambda) : 0.0;
    z += w[k];
  }
  for (double& v : w) v /= z;
  return w;
}

QuboProblem build_step_qubo(const State& x0, std::span<const State> xref_window,
                            const IsingMppiConfig& cfg, std::span<const Control> ubar) {
  cfg.validate();
  check_window(xref_window, cfg.horizon);
  if (ubar.size() != cfg.horizon) throw std::invalid_argument("nominal sequence must match the horizon");
  const ExpansionMatrix ex = build_expansion(cfg.bits, cfg.magnitudes, cfg.horizon);
  const auto steps = linearize_along(x0, ubar, cfg.dt, cfg.model);
  const HorizonMatrices hm = build_horizon(steps, cfg.dt);
  QuboProblem q = symmetrize(
      assemble_qubo(hm, ex, cfg.weights, x0.vec(), stack_controls(ubar), stack_states(xref_window)));
  q.lambda_hint = cfg.lambda;
  return q;
}

ControlStepResult ising_mppi_step(const State& x0, std::span<const State> xref_window,
                                  const IsingMppiConfig& cfg, std::uint64_t seed,
                                  std::span<const Control> warm) {
  const auto t0 = Clock::now();
  cfg.validate();
  check_window(xref_window, cfg.horizon);

  const ExpansionMatrix ex = build_expansion(cfg.bits, cfg.magnitudes, cfg.horizon);
  std::vector<Control> ubar = initial_nominal(cfg.horizon, warm);
  std::vector<double> energies;
  energies.reserve(cfg.iterations);
  CounterRng rng(seed);

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const QuboProblem q = build_step_qubo(x0, xref_window, cfg, ubar);

    BitVector a_hat;
    if (cfg.bit_solver) {
      a_hat = cfg.bit_solver(q);
    } else {
      GibbsConfig gibbs;
      gibbs.sweeps = cfg.sweeps;
      gibbs.lambda = cfg.lambda;
      gibbs.seed = rng.next();
      gibbs.init = cfg.init;
      gibbs.burn_in = cfg.burn_in;
      gibbs.scan = cfg.scan;
      gibbs.record_energy = false;
      a_hat = gibbs_sample(q, gibbs).rounded;
    }
    energies.push_back(energy(q, a_hat));
    add_if_in_domain(ubar, ex.decode(a_hat), x0, cfg.dt, cfg.model);
  }
  return finish(std::move(ubar), std::move(energies), t0);
}

ControlStepResult non_ising_linear_mppi_step(const State& x0, std::span<const State> xref_window,
                                             const LinearMppiConfig& cfg, std::uint64_t seed,
                                             std::span<const Control> warm) {
  const auto t0 = Clock::now();
  cfg.validate();
  check_window(xref_window, cfg.horizon);

  const Eigen::VectorXd xref = stack_states(xref_window);
  std::vector<Control> ubar = initial_nominal(cfg.horizon, warm);
  std::vector<double> energies;
  energies.reserve(cfg.iterations);
  CounterRng rng(seed);
  std::vector<double> costs(cfg.samples);

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const auto steps = linearize_along(x0, ubar, cfg.dt, cfg.model);
    const HorizonMatrices hm = build_horizon(steps, cfg.dt);
    const LinearCost cost = assemble_linear_cost(hm, cfg.weights, x0.vec(), stack_controls(ubar), xref);

    const Eigen::MatrixXd eps = draw_noise(rng, cfg.samples, cfg.horizon, cfg.noise_sigma);
    // Row-wise e^T J e + h^T e.
    const Eigen::MatrixXd ej = eps * cost.J;
    for (Eigen::Index k = 0; k < eps.rows(); ++k) {
      costs[static_cast<std::size_t>(k)] = ej.row(k).dot(eps.row(k)) + eps.row(k).dot(cost.h);
    }
    const Eigen::VectorXd du = weighted_update(eps, boltzmann_weights(costs, cfg.lambda));
    energies.push_back(cost.evaluate(du));
    add_if_in_domain(ubar, du, x0, cfg.dt, cfg.model);
  }
  return finish(std::move(ubar), std::move(energies), t0);
}

double rollout_cost(const State& x0, std::span<const Control> u, std::span<const State> xref_window,
                    const ReferenceMppiConfig& cfg) {
  const Eigen::VectorXd& q = cfg.weights.q_diag;
  const Eigen::VectorXd& r = cfg.weights.r_diag;
  double total = 0.0;
  State x = x0;
  for (std::size_t n = 0; n < u.size(); ++n) {
    if (!steering_in_domain(x)) return std::numeric_limits<double>::infinity();
    x = step_nonlinear(x, u[n], cfg.dt, cfg.model);
    if (!x.finite()) return std::numeric_limits<double>::infinity();
    StateVec err = x.vec() - xref_window[n].vec();
    if (cfg.wrap_heading) err(2) = wrap_angle(err(2));
    total += err.dot(q.cwiseProduct(err)) + u[n].vec().dot(r.cwiseProduct(u[n].vec()));
  }
  return total;
}

ControlStepResult reference_mppi_step(const State& x0, std::span<const State> xref_window,
                                      const ReferenceMppiConfig& cfg, std::uint64_t seed,
                                      std::span<const Control> warm) {
  const auto t0 = Clock::now();
  cfg.validate();
  check_window(xref_window, cfg.horizon);

  std::vector<Control> ubar = initial_nominal(cfg.horizon, warm);
  std::vector<double> energies;
  energies.reserve(cfg.iterations);
  CounterRng rng(seed);
  std::vector<double> costs(cfg.samples);
  std::vector<Control> candidate(cfg.horizon);

  for (std::size_t it = 0; it < cfg.iterations; ++it) {
    const Eigen::MatrixXd eps = draw_noise(rng, cfg.samples, cfg.horizon, cfg.noise_sigma);
    for (Eigen::Index k = 0; k < eps.rows(); ++k) {
      for (std::size_t n = 0; n < cfg.horizon; ++n) {
        const auto c = static_cast<Eigen::Index>(n) * kControlDim;
        candidate[n] = {ubar[n].accel + eps(k, c), ubar[n].steer_rate + eps(k, c + 1)};
      }
      costs[static_cast<std::size_t>(k)] = rollout_cost(x0, candidate, xref_window, cfg);
    }
    energies.push_back(*std::min_element(costs.begin(), costs.end()));
    add_stacked(ubar, weighted_update(eps, boltzmann_weights(costs, cfg.lambda)));
  }
  return finish(std::move(ubar), std::move(energies), t0);
}

TrialResult run_closed_loop(const ReferenceTrajectory& scenario, const StepFunction& controller,
                            const ClosedLoopOptions& options, std::uint64_t seed) {
  const std::size_t horizon = options.horizon;
  if (scenario.states.size() <= horizon) {
    throw std::invalid_argument("scenario must be longer than the horizon");
  }
  const std::size_t steps = scenario.states.size() - horizon;

  TrialResult out;
  out.reference = scenario.states;
  out.realized.reserve(steps + 1);
  out.per_step.reserve(steps);

  State x = scenario.initial_state;
  out.realized.push_back(x);
  std::vector<Control> warm;
  double sum_sq = 0.0;
  try {
    for (std::size_t k = 0; k < steps; ++k) {
      const std::span<const State> window(scenario.states.data() + k + 1, horizon);
      ControlStepResult res = controller(x, window, combine_seeds({seed, k}), warm);
      x = step_nonlinear(x, res.u0, options.dt, options.model);
      if (!x.finite() || !steering_in_domain(x)) {
        throw DivergenceError("plant left the valid domain at step " + std::to_string(k));
      }
      out.realized.push_back(x);
      const State& ref = scenario.states[k + 1];
      sum_sq += (x.px - ref.px) * (x.px - ref.px) + (x.py - ref.py) * (x.py - ref.py);
      if (options.warm_start) {
        warm.assign(res.ubar.begin() + 1, res.ubar.end());
        warm.push_back(Control{});
      }
      out.per_step.push_back(std::move(res));
    }
  } catch (const DivergenceError& e) {
    out.diverged = true;
    out.failure = e.what();
  } catch (const DegenerateWeightsError& e) {
    out.diverged = true;
    out.failure = e.what();
  } catch (const std::domain_error& e) {
    out.diverged = true;
    out.failure = e.what();
  }
  out.mse = out.diverged ? std::numeric_limits<double>::infinity()
                         : sum_sq / static_cast<double>(steps);
  return out;
}

TrialResult run_closed_loop(const ReferenceTrajectory& scenario, const ControllerConfig& config,
                            std::uint64_t seed) {
  return std::visit(
      [&](const auto& cfg) {
        cfg.validate();
        using Cfg = std::decay_t<decltype(cfg)>;
        ClosedLoopOptions options{cfg.horizon, cfg.dt, cfg.model, cfg.warm_start};
        StepFunction fn = [&cfg](const State& x, std::span<const State> window, std::uint64_t s,
                                 std::span<const Control> warm) {
          if constexpr (std::is_same_v<Cfg, IsingMppiConfig>) {
            return ising_mppi_step(x, window, cfg, s, warm);
          } else if constexpr (std::is_same_v<Cfg, LinearMppiConfig>) {
            return non_ising_linear_mppi_step(x, window, cfg, s, warm);
          } else {
            return reference_mppi_step(x, window, cfg, s, warm);
          }
        };
        return run_closed_loop(scenario, fn, options, seed);
      },
      config);
}

std::string controller_name(const ControllerConfig& config) {
  switch (config.index()) {
    case 0: return "ising";
    case 1: return "linear";
    default: return "reference";
  }
}

}  // namespace imppi
