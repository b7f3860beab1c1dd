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
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

using namespace imppi;
using doctest::Approx;

namespace {

QuboProblem pair_problem() {
  QuboProblem q;
  q.J.resize(2, 2);
  q.J << 0, 1, 1, 0;
  q.h.resize(2);
  q.h << 1, 3;
  return q;
}

QuboProblem single_bit(double h) {
  QuboProblem q;
  q.J = Eigen::MatrixXd::Zero(1, 1);
  q.h = Eigen::VectorXd::Constant(1, h);
  return q;
}

std::vector<double> empirical(const SampleResult& r, std::size_t d) {
  std::vector<double> p(std::size_t{1} << d, 0.0);
  for (auto w : r.states) p[w] += 1.0 / static_cast<double>(r.states.size());
  return p;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  double tv = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) tv += std::abs(p[k] - q[k]);
  return tv / 2.0;
}

}  // namespace

TEST_CASE("local field hand example") {
  QuboProblem q = pair_problem();
  q.h.setZero();
  CHECK(local_field(q, BitVector{0, 1}, 0) == 2.0);
  CHECK(local_field(q, BitVector{0, 0}, 0) == 0.0);
  CHECK(local_field(pair_problem(), BitVector{1, 1}, 1) == 5.0);
  CHECK_THROWS_AS(local_field(q, BitVector{0, 1}, 2), std::out_of_range);
}

TEST_CASE("logistic values and saturation") {
  CHECK(logistic(0.0) == 0.5);
  CHECK(logistic(2.0) == Approx(0.88079708).epsilon(1e-8));
  const double tiny = conditional_prob(single_bit(10.0), BitVector{0}, 0, 0.1);
  CHECK(tiny > 0.0);
  CHECK(tiny == Approx(3.7200759760208e-44).epsilon(1e-6));
  CHECK(logistic(1e6) == 1.0);
  CHECK(logistic(-1e6) >= 0.0);
  CHECK(std::isfinite(logistic(-1e6)));
}

TEST_CASE("conditional probability from the field") {
  CHECK(conditional_prob(single_bit(-2.0), BitVector{0}, 0, 1.0) == Approx(0.88079708).epsilon(1e-8));
  CHECK(conditional_prob(single_bit(0.0), BitVector{1}, 0, 0.3) == 0.5);
}

TEST_CASE("exact Boltzmann of a single biased bit") {
  const double lambda = 0.4;
  const auto p = exact_boltzmann(single_bit(-lambda * std::log(3.0)), lambda);
  REQUIRE(p.size() == 2);
  CHECK(p[1] == Approx(0.75).epsilon(1e-12));
  CHECK(p[0] + p[1] == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("exact Boltzmann is normalized and ordered by energy") {
  CounterRng rng(3);
  const QuboProblem q = symmetrize(testing::random_qubo(rng, 8, 1.0, 1.0));
  const auto p = exact_boltzmann(q, 0.7);
  double sum = 0.0;
  for (double x : p) sum += x;
  CHECK(sum == Approx(1.0).epsilon(1e-12));
  const double ratio = p[5] / p[9];
  CHECK(ratio == Approx(std::exp(-(energy(q, unpack_bits(5, 8)) - energy(q, unpack_bits(9, 8))) / 0.7)).epsilon(1e-9));
}

TEST_CASE("unbiased bit behaves like a fair coin") {
  GibbsConfig cfg;
  cfg.sweeps = 40000;
  cfg.lambda = 1.0;
  cfg.seed = 17;
  const SampleResult r = gibbs_sample(single_bit(0.0), cfg);
  CHECK(r.bit_means(0) == Approx(0.5).epsilon(0.02));
}

TEST_CASE("two-bit chain matches the exact distribution") {
  GibbsConfig cfg;
  cfg.sweeps = 50000;
  cfg.lambda = 0.5;
  cfg.seed = 2024;
  cfg.record_states = true;
  const QuboProblem q = pair_problem();
  const SampleResult r = gibbs_sample(q, cfg);
  CHECK(total_variation(empirical(r, 2), exact_boltzmann(q, 0.5)) < 0.02);
}

TEST_CASE("random scan order samples the same distribution") {
  GibbsConfig cfg;
  cfg.sweeps = 50000;
  cfg.lambda = 1.0;
  cfg.seed = 99;
  cfg.scan = ScanOrder::kRandom;
  cfg.record_states = true;
  CounterRng rng(41);
  const QuboProblem q = symmetrize(testing::random_qubo(rng, 4, 0.5, 1.0));
  const SampleResult r = gibbs_sample(q, cfg);
  CHECK(total_variation(empirical(r, 4), exact_boltzmann(q, 1.0)) < 0.03);
}

TEST_CASE("sampler output is a pure function of problem and config") {
  CounterRng rng(12);
  const QuboProblem q = symmetrize(testing::random_qubo(rng, 16, 1.0, 1.0));
  GibbsConfig cfg;
  cfg.sweeps = 300;
  cfg.seed = 5;
  const SampleResult a = gibbs_sample(q, cfg);
  const SampleResult b = gibbs_sample(q, cfg);
  CHECK(a.bit_means == b.bit_means);
  CHECK(a.final_state == b.final_state);
  CHECK(a.energy_trace == b.energy_trace);
  cfg.seed = 6;
  CHECK(gibbs_sample(q, cfg).bit_means != a.bit_means);
}

TEST_CASE("energy trace tracks the chain state") {
  CounterRng rng(13);
  const QuboProblem q = symmetrize(testing::random_qubo(rng, 12, 1.0, 1.0));
  GibbsConfig cfg;
  cfg.sweeps = 50;
  cfg.burn_in = 10;
  cfg.record_states = true;
  const SampleResult r = gibbs_sample(q, cfg);
  REQUIRE(r.energy_trace.size() == 50);
  REQUIRE(r.states.size() == 50);
  for (std::size_t s = 0; s < 50; ++s) {
    CHECK(r.energy_trace[s] == Approx(energy(q, unpack_bits(r.states[s], 12))).epsilon(1e-9));
  }
  CHECK(unpack_bits(r.states.back(), 12) == r.final_state);
  CHECK(round_mean(r.bit_means) == r.rounded);
}

TEST_CASE("all-zero start with strong positive fields stays at zero") {
  QuboProblem q;
  q.J = Eigen::MatrixXd::Zero(6, 6);
  q.h = Eigen::VectorXd::Constant(6, 50.0);
  GibbsConfig cfg;
  cfg.sweeps = 100;
  cfg.init = InitMode::kZeros;
  const SampleResult r = gibbs_sample(q, cfg);
  CHECK(r.bit_means.isZero(0.0));
}

TEST_CASE("sampler argument checks") {
  GibbsConfig cfg;
  cfg.sweeps = 0;
  CHECK_THROWS_AS(gibbs_sample(pair_problem(), cfg), std::invalid_argument);
  cfg.sweeps = 10;
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(gibbs_sample(pair_problem(), cfg), std::invalid_argument);
  cfg.lambda = 1.0;
  QuboProblem raw = pair_problem();
  raw.J(0, 1) = 2.0;
  CHECK_THROWS_AS(gibbs_sample(raw, cfg), std::invalid_argument);
}

TEST_CASE("rounding uses a strict threshold") {
  CHECK(round_mean(std::vector<double>{0.5}) == BitVector{0});
  CHECK(round_mean(std::vector<double>{0.5000001, 0.0, 1.0, 0.49}) == BitVector{1, 0, 1, 0});
  CHECK_THROWS_AS(round_mean(std::vector<double>{1.2}), std::domain_error);
  CHECK_THROWS_AS(round_mean(std::vector<double>{-0.1}), std::domain_error);
}

TEST_CASE("brute-force minimum equals explicit enumeration") {
  CounterRng rng(77);
  for (int trial = 0; trial < 5; ++trial) {
    const QuboProblem q = symmetrize(testing::random_qubo(rng, 12, 1.0, 1.0));
    const MinimumResult m = brute_force_min(q);
    double best = 1e300;
    std::uint64_t arg = 0;
    for (std::uint64_t w = 0; w < 4096; ++w) {
      const double e = energy(q, unpack_bits(w, 12));
      if (e < best) {
        best = e;
        arg = w;
      }
    }
    CHECK(m.energy == Approx(best).epsilon(1e-12));
    CHECK(m.argmin == unpack_bits(arg, 12));
  }
}

TEST_CASE("brute-force ties go to the smallest word") {
  QuboProblem q;
  q.J = Eigen::MatrixXd::Zero(3, 3);
  q.h = Eigen::VectorXd::Zero(3);
  q.h(1) = -1.0;
  q.h(2) = -1.0;
  q.J(1, 2) = q.J(2, 1) = 0.5;  // {a1} and {a2} both give -1, both bits give -1
  const MinimumResult m = brute_force_min(q);
  CHECK(m.energy == -1.0);
  CHECK(m.argmin == BitVector{0, 1, 0});
}

TEST_CASE("bit packing round trip") {
  const BitVector a{1, 0, 1, 1, 0, 0, 1};
  CHECK(pack_bits(a) == 0b1001101u);
  CHECK(unpack_bits(pack_bits(a), a.size()) == a);
}

TEST_CASE("energy trace CSV") {
  std::ostringstream os;
  write_energy_trace_csv(os, std::vector<double>{1.5, -2.0});
  CHECK(os.str() == "sweep,energy\n0,1.5\n1,-2\n");
}
