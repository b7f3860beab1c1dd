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
#include "isingmppi/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace imppi {

enum class InitMode { kZeros, kRandom };
enum class ScanOrder { kCyclic, kRandom };

struct GibbsConfig {
  std::size_t sweeps = 1000;
  double lambda = 0.1;
  std::uint64_t seed = 0;
  InitMode init = InitMode::kRandom;
  std::size_t burn_in = 0;
  ScanOrder scan = ScanOrder::kCyclic;
  bool record_energy = true;
  /// Keep every post-burn-in sweep state packed into a word (requires d <= 64).
  bool record_states = false;

  void validate() const;
};

struct SampleResult {
  Eigen::VectorXd bit_means;
  BitVector rounded;
  BitVector final_state;
  std::vector<double> energy_trace;
  /// Bit i of each word is a_i. Empty unless GibbsConfig::record_states.
  std::vector<std::uint64_t> states;
};

/// h_i + 2 sum_{j != i} J_ij a_j. Expects a symmetrized problem.
double local_field(const QuboProblem& q, std::span<const std::uint8_t> a, std::size_t i);

/// Logistic function with the argument clamped to [-700, 700].
double logistic(double z);

/// p(a_i = 1 | rest) = logistic(-local_field / lambda).
double conditional_prob(const QuboProblem& q, std::span<const std::uint8_t> a, std::size_t i,
                        double lambda);

/// Gibbs sampler at temperature lambda. One sample is the state after a full
/// sweep over all bits; the result is a pure function of (q, cfg).
SampleResult gibbs_sample(const QuboProblem& q, const GibbsConfig& cfg);

/// 1 where the mean is strictly above 0.5. Throws std::domain_error outside [0, 1].
BitVector round_mean(std::span<const double> bit_means);
BitVector round_mean(const Eigen::VectorXd& bit_means);

inline constexpr std::size_t kMaxEnumerationBits = 20;

/// exp(-H(a)/lambda) / Z for every a, indexed by the word with bit i = a_i.
std::vector<double> exact_boltzmann(const QuboProblem& q, double lambda);

struct MinimumResult {
  BitVector argmin;
  double energy = 0.0;
};

/// Exhaustive minimizer; ties go to the smallest word (bit i = a_i).
MinimumResult brute_force_min(const QuboProblem& q);

BitVector unpack_bits(std::uint64_t word, std::size_t d);
std::uint64_t pack_bits(std::span<const std::uint8_t> a);

/// Writes the trace as CSV with header `sweep,energy`.
void write_energy_trace_csv(std::ostream& os, std::span<const double> trace);

}  // namespace imppi
