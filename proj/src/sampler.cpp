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

#include "isingmppi/sampler.hpp"

#include "isingmppi/io.hpp"
#include "isingmppi/rng.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace imppi {

void GibbsConfig::validate() const {
  if (sweeps < 1) throw std::invalid_argument("Gibbs sweeps must be >= 1");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("Gibbs temperature must be positive");
  }
}

double local_field(const QuboProblem& q, std::span<const std::uint8_t> a, std::size_t i) {
  if (i >= q.dim()) throw std::out_of_range("bit index " + std::to_string(i) + " out of range");
  if (a.size() != q.dim()) throw std::invalid_argument("bit vector length mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    if (j != i && a[j]) acc += q.J(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return q.h(static_cast<Eigen::Index>(i)) + 2.0 * acc;
}

double logistic(double z) {
  z = std::clamp(z, -700.0, 700.0);
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double conditional_prob(const QuboProblem& q, std::span<const std::uint8_t> a, std::size_t i,
                        double lambda) {
  return logistic(-local_field(q, a, i) / lambda);
}

SampleResult gibbs_sample(const QuboProblem& q, const GibbsConfig& cfg) {
  cfg.validate();
  const std::size_t d = q.dim();
  if (d == 0) throw std::invalid_argument("QUBO has no variables");
  if (!q.is_symmetrized(1e-9 * (1.0 + q.J.cwiseAbs().maxCoeff()))) {
    throw std::invalid_argument("Gibbs sampling expects a symmetrized QUBO");
  }
  if (cfg.record_states && d > 64) {
    throw std::invalid_argument("state recording needs d <= 64");
  }

  CounterRng rng(cfg.seed);
  BitVector a(d, 0);
  if (cfg.init == InitMode::kRandom) {
    for (auto& bit : a) bit = static_cast<std::uint8_t>(rng.next() >> 63);
  }

  // field_i = h_i + 2 sum_j J_ij a_j, kept current as bits change.
  Eigen::VectorXd field = q.h;
  for (std::size_t j = 0; j < d; ++j) {
    if (a[j]) field += 2.0 * q.J.col(static_cast<Eigen::Index>(j));
  }

  SampleResult out;
  out.bit_means = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d));
  if (cfg.record_energy) out.energy_trace.reserve(cfg.sweeps);
  if (cfg.record_states) out.states.reserve(cfg.sweeps);

  const double inv_lambda = 1.0 / cfg.lambda;
  const std::size_t total = cfg.burn_in + cfg.sweeps;
  for (std::size_t sweep = 0; sweep < total; ++sweep) {
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t i = cfg.scan == ScanOrder::kCyclic ? k : rng.below(d);
      const auto ii = static_cast<Eigen::Index>(i);
      const double p1 = logistic(-field(ii) * inv_lambda);
      const std::uint8_t next = rng.uniform() < p1 ? 1 : 0;
      if (next != a[i]) {
        const double sign = next ? 2.0 : -2.0;
        field += sign * q.J.col(ii);
        a[i] = next;
      }
    }
    if (sweep < cfg.burn_in) continue;

    for (std::size_t i = 0; i < d; ++i) out.bit_means(static_cast<Eigen::Index>(i)) += a[i];
    if (cfg.record_energy) {
      // a^T J a + h^T a = sum_i a_i (field_i + h_i) / 2 when diag(J) = 0.
      double e = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        if (a[i]) e += 0.5 * (field(static_cast<Eigen::Index>(i)) + q.h(static_cast<Eigen::Index>(i)));
      }
      out.energy_trace.push_back(e);
    }
    if (cfg.record_states) out.states.push_back(pack_bits(a));
  }

  out.bit_means /= static_cast<double>(cfg.sweeps);
  out.rounded = round_mean(out.bit_means);
  out.final_state = std::move(a);
  return out;
}

BitVector round_mean(std::span<const double> bit_means) {
  BitVector out(bit_means.size());
  for (std::size_t i = 0; i < bit_means.size(); ++i) {
    const double m = bit_means[i];
    if (!(m >= 0.0 && m <= 1.0)) throw std::domain_error("bit mean outside [0, 1]");
    out[i] = m > 0.5 ? 1 : 0;
  }
  return out;
}

BitVector round_mean(const Eigen::VectorXd& bit_means) {
  return round_mean(std::span<const double>(bit_means.data(), static_cast<std::size_t>(bit_means.size())));
}

namespace {

void require_enumerable(const QuboProblem& q) {
  if (q.dim() > kMaxEnumerationBits) {
    throw std::invalid_argument("exhaustive enumeration limited to d <= " +
                                std::to_string(kMaxEnumerationBits));
  }
}

// Energies of all 2^d states in Gray-code order, stored by word.
std::vector<double> all_energies(const QuboProblem& q) {
  const std::size_t d = q.dim();
  const std::size_t n = std::size_t{1} << d;
  std::vector<double> energies(n);
  // With diag(J) possibly nonzero, flipping bit i from 0 to 1 changes H by
  // J_ii + h_i + sum_{j != i} (J_ij + J_ji) a_j.
  Eigen::VectorXd field = q.h + q.J.diagonal();
  BitVector a(d, 0);
  std::uint64_t word = 0;
  double e = 0.0;
  energies[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    const auto i = static_cast<std::size_t>(std::countr_zero(k));
    const auto ii = static_cast<Eigen::Index>(i);
    const double sign = a[i] ? -1.0 : 1.0;
    e += sign * field(ii);
    a[i] ^= 1;
    word ^= std::uint64_t{1} << i;
    Eigen::VectorXd coupling = q.J.col(ii) + q.J.row(ii).transpose();
    coupling(ii) = 0.0;
    field += sign * coupling;
    energies[word] = e;
  }
  return energies;
}

}  // namespace

std::vector<double> exact_boltzmann(const QuboProblem& q, double lambda) {
  require_enumerable(q);
  if (!(lambda > 0.0)) throw std::invalid_argument("temperature must be positive");
  std::vector<double> p = all_energies(q);
  double lowest = std::numeric_limits<double>::infinity();
  for (double e : p) lowest = std::min(lowest, e);
  double z = 0.0;
  for (double& v : p) {
    v = std::exp(-(v - lowest) / lambda);
    z += v;
  }
  for (double& v : p) v /= z;
  return p;
}

MinimumResult brute_force_min(const QuboProblem& q) {
  require_enumerable(q);
  const std::vector<double> energies = all_energies(q);
  std::size_t best = 0;
  for (std::size_t w = 1; w < energies.size(); ++w) {
    if (energies[w] < energies[best]) best = w;
  }
  MinimumResult out;
  out.argmin = unpack_bits(best, q.dim());
  out.energy = energy(q, out.argmin);
  return out;
}

BitVector unpack_bits(std::uint64_t word, std::size_t d) {
  BitVector a(d);
  for (std::size_t i = 0; i < d; ++i) a[i] = static_cast<std::uint8_t>((word >> i) & 1U);
  return a;
}

std::uint64_t pack_bits(std::span<const std::uint8_t> a) {
  if (a.size() > 64) throw std::invalid_argument("cannot pack more than 64 bits");
  std::uint64_t w = 0;
  for (std::size_t i = 0; i < a.size(); ++i) w |= static_cast<std::uint64_t>(a[i] & 1U) << i;
  return w;
}

void write_energy_trace_csv(std::ostream& os, std::span<const double> trace) {
  os << "sweep,energy\n";
  for (std::size_t s = 0; s < trace.size(); ++s) os << s << ',' << format_double(trace[s]) << '\n';
}

}  // namespace imppi
