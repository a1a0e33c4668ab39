// Copyright 2026 The rtlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <gtest/gtest.h>

#include "rtlab/stein.hpp"

namespace rtlab {
namespace {

using Big = boost::multiprecision::number<
    boost::multiprecision::cpp_dec_float<400>>;

// f(k) = ((k-1)!/t^k) sum_{i<k} (1_E(i) - P(E)) t^i / i!, evaluated with 400
// digits so that the cancellation in the sum is harmless.
double oracle_finite_sum(double t_in, const std::vector<std::size_t>& event,
                         std::size_t k) {
  const Big t(t_in);
  Big mass = 0;
  for (std::size_t e : event) {
    Big term = exp(-t);
    for (std::size_t j = 1; j <= e; ++j) term *= t / Big(j);
    mass += term;
  }
  Big sum = 0, term = 1;  // term = t^i / i!
  for (std::size_t i = 0; i < k; ++i) {
    const bool in = std::find(event.begin(), event.end(), i) != event.end();
    sum += ((in ? Big(1) : Big(0)) - mass) * term;
    term *= t / Big(i + 1);
  }
  Big fact = 1;  // (k-1)!
  for (std::size_t j = 2; j < k; ++j) fact *= Big(j);
  return static_cast<double>(fact / pow(t, static_cast<int>(k)) * sum);
}

std::vector<std::size_t> random_event(std::mt19937_64& gen, std::size_t top) {
  std::vector<std::size_t> e;
  std::bernoulli_distribution coin(0.3);
  for (std::size_t i = 0; i <= top; ++i) {
    if (coin(gen)) e.push_back(i);
  }
  return e;
}

TEST(PoissonPmf, Values) {
  EXPECT_NEAR(poisson_pmf(1.0, 0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(poisson_pmf(2.0, 2), 2.0 * std::exp(-2.0), 1e-15);
  double total = 0.0;
  for (std::size_t i = 0; i <= 200; ++i) total += poisson_pmf(5.0, i);
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(PoissonPmf, LogBranchMatchesProduct) {
  // i = 21 takes the log-space branch.
  double direct = std::exp(-3.0);
  for (int j = 1; j <= 21; ++j) direct *= 3.0 / j;
  EXPECT_NEAR(poisson_pmf(3.0, 21) / direct, 1.0, 1e-12);
}

TEST(ErlangTail, Values) {
  EXPECT_NEAR(erlang_tail(0.7, 1), std::exp(-0.7), 1e-15);
  EXPECT_NEAR(erlang_tail(1e-12, 3), 1.0, 1e-11);
  EXPECT_NEAR(erlang_tail(1.0, 2), 2.0 * std::exp(-1.0), 1e-15);
  EXPECT_THROW(erlang_tail(1.0, 0), std::invalid_argument);
  EXPECT_THROW(erlang_tail(0.0, 1), std::invalid_argument);
}

TEST(SteinSolve, SingletonZero) {
  const std::vector<std::size_t> e{0};
  const auto s = stein_solve(1.0, e, 10);
  EXPECT_NEAR(s.f(1), 1.0 - std::exp(-1.0), 1e-15);
  EXPECT_EQ(s.f(0), 0.0);
  EXPECT_NEAR(stein_apply(s, 1), -std::exp(-1.0), 1e-14);
}

TEST(SteinSolve, EmptyEventIsZero) {
  const auto s = stein_solve(3.0, std::vector<std::size_t>{}, 200);
  for (std::size_t k = 1; k <= 200; ++k) EXPECT_EQ(s.f(k), 0.0);
  for (std::size_t k = 1; k < 200; ++k) EXPECT_EQ(stein_apply(s, k), 0.0);
}

TEST(SteinSolve, EverythingIsZero) {
  for (double t : {0.5, 1.0, 5.0}) {
    const std::size_t k_max = 80;
    std::vector<std::size_t> e(k_max + static_cast<std::size_t>(10 * t) + 1);
    std::iota(e.begin(), e.end(), 0);
    const auto s = stein_solve(t, e, k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
      EXPECT_NEAR(s.f(k), 0.0, 1e-10) << "t=" << t << " k=" << k;
    }
  }
}

TEST(SteinSolve, IdentityOnRandomEvents) {
  std::mt19937_64 gen(7);
  double worst = 0.0;
  for (double t : {0.5, 1.0, 5.0, 20.0}) {
    for (int rep = 0; rep < 50; ++rep) {
      const auto e = random_event(gen, 50);
      const auto s = stein_solve(t, e, 101);
      for (std::size_t k = 1; k <= 100; ++k) {
        const double h = s.in_event(k) ? 1.0 : 0.0;
        worst = std::max(worst,
                         std::abs(stein_apply(s, k) - (h - s.event_mass())));
      }
    }
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(SteinSolve, MatchesMultiprecisionOracle) {
  std::mt19937_64 gen(11);
  for (double t : {0.5, 1.0, 2.5, 5.0, 20.0}) {
    const auto e = random_event(gen, 40);
    const auto s = stein_solve(t, e, 60);
    for (std::size_t k = 1; k <= 60; ++k) {
      const double want = oracle_finite_sum(t, e, k);
      EXPECT_NEAR(s.f(k), want, 1e-12 * std::max(1.0, std::abs(want)))
          << "t=" << t << " k=" << k;
    }
  }
}

TEST(SteinSolve, TwoRepresentationsAgree) {
  std::mt19937_64 gen(13);
  for (double t : {0.5, 1.0, 3.0, 7.5, 20.0}) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto e = random_event(gen, 50);
      const auto s = stein_solve(t, e, 50);
      for (std::size_t k = 1; k <= 50; ++k) {
        const auto tail = stein_value_tail(t, e, k);
        EXPECT_LT(tail.remainder_bound, 1e-12);
        EXPECT_NEAR(s.f(k), tail.value, 1e-9) << "t=" << t << " k=" << k;
      }
    }
  }
}

TEST(SteinSolve, SolutionBoundsHold) {
  std::mt19937_64 gen(17);
  for (double t : {0.5, 1.0, 5.0, 20.0}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto e = random_event(gen, 60);
      const auto s = stein_solve(t, e, 300);
      double prefix = 0.0;
      for (std::size_t k = 1; k <= 300; ++k) {
        EXPECT_LE(std::abs(s.f(k)), stein_bound_pointwise(t, k));
        prefix += std::abs(s.f(k));
        EXPECT_LE(prefix, stein_bound_sum(t, k));
      }
    }
  }
}

TEST(SteinSolve, LargeTableStaysFinite) {
  const std::vector<std::size_t> e{0, 3, 7};
  const auto s = stein_solve(5.0, e, 1'000'000);
  for (std::size_t k : {1UL, 10UL, 1000UL, 999'999UL, 1'000'000UL}) {
    EXPECT_TRUE(std::isfinite(s.f(k)));
    EXPECT_LE(std::abs(s.f(k)), stein_bound_pointwise(5.0, k));
  }
  EXPECT_NEAR(stein_apply(s, 500'000), -s.event_mass(), 1e-10);
}

TEST(SteinSolve, RejectsBadArguments) {
  const std::vector<std::size_t> e{1};
  EXPECT_THROW(stein_solve(0.0, e, 5), std::invalid_argument);
  EXPECT_THROW(stein_solve(1.0, e, 0), std::invalid_argument);
  EXPECT_THROW(stein_solve(1.0, e, 1'000'001), std::invalid_argument);
  const auto s = stein_solve(1.0, e, 5);
  EXPECT_THROW(stein_apply(s, 0), std::out_of_range);
  EXPECT_THROW(stein_apply(s, 5), std::out_of_range);
}

TEST(SteinBounds, Values) {
  EXPECT_EQ(stein_bound_pointwise(2.0, 1), 1.0);
  EXPECT_DOUBLE_EQ(stein_bound_pointwise(1.0, 3), 1.0);
  EXPECT_DOUBLE_EQ(stein_bound_pointwise(1.0, 300), 0.01);
  EXPECT_EQ(stein_bound_sum(10.0, 5), 5.0);
  EXPECT_NEAR(stein_bound_sum(1.0, 10), 1.0 + 3.0 * std::log(10.0), 1e-12);
}

// Sum_k (S f)(k) pmf(k) = 0 for bounded f under the exact Poisson law.
TEST(SteinOperator, CharacterizesPoisson) {
  std::mt19937_64 gen(19);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (double t : {0.5, 1.0, 5.0, 20.0}) {
    const std::size_t K = 200;
    std::vector<double> f(K + 2);
    for (auto& x : f) x = u(gen);
    f[0] = 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k <= K; ++k) {
      sum += stein_operator(t, f, k) * poisson_pmf(t, k);
    }
    EXPECT_NEAR(sum, 0.0, 1e-10) << "t=" << t;
  }
}

}  // namespace
}  // namespace rtlab
