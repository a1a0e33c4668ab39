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
#include <random>
#include <vector>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rtlab/bounds.hpp"

namespace rtlab {
namespace {

TEST(MasterBound, ExactZeroLeavesMeasureTerms) {
  const Word w = parse_word("0000000001");
  const auto in = make_bound_input(w, fair_coin(), ExactZero{}, 2.0);
  const auto r = theorem1_bound(in, 1);
  const double mu = std::ldexp(1.0, -10);
  // delta_A(k) = mu(A^{(k)}) for ExactZero, 2^-10 at k = n = r_A.
  const double expected =
      2.0 * 2.0 * ((1.0 + 10.0) * mu + 10.0 * 2.0 * mu) * 10.0 * std::log(2.0);
  EXPECT_NEAR(r.value, expected, 1e-14 * expected);
  EXPECT_EQ(r.breakdown.alpha_bar, 0.0);
  EXPECT_EQ(r.breakdown.alpha_over_mu, 0.0);
  EXPECT_TRUE(r.constant_free);
}

TEST(MasterBound, HandArithmetic) {
  const Word w = parse_word("00000000000000000001");
  const auto in = make_bound_input(w, fair_coin(), Exponential{1.0, 0.5}, 1.0);
  ASSERT_EQ(in.r_A, 20U);
  // delta_A(20) = min_w 2^-w + alpha(20 - w), attained at w = 10: 2^-9.
  long double d = 1e9L;
  for (int v = 1; v <= 20; ++v) {
    const long double a = v == 20 ? 1.0L : std::pow(0.5L, 20 - v);
    d = std::min(d, std::pow(0.5L, v) + a);
  }
  EXPECT_EQ(static_cast<double>(d), std::ldexp(1.0, -9));
  const long double mu = std::pow(0.5L, 20);
  const long double sum = 40 * mu + 20 * mu + 20 * (d + d) +
                          std::pow(0.5L, 20) / 0.5L + std::pow(0.5L, 40) / mu;
  const long double expected = sum * 20 * std::log(2.0L);
  const auto r = theorem1_bound(in, 40);
  EXPECT_NEAR(r.value, static_cast<double>(expected), 1e-13);
  EXPECT_DOUBLE_EQ(r.breakdown.delta_mu, 40.0 * static_cast<double>(mu));
  EXPECT_DOUBLE_EQ(r.breakdown.alpha_over_mu, std::ldexp(1.0, -20));
  const auto j = to_json(r);
  for (const char* key : {"delta_mu", "n_delta_n", "n_delta_rA", "alpha_bar",
                          "alpha_over_mu", "log_factor"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(MasterBound, DeltaTermGrowsLinearly) {
  const auto in = synthetic_bound_input(20, 1.0, std::log(2.0),
                                        Exponential{1.0, 0.5}, 1.0);
  const auto opt = optimize_gap(in);
  const auto twice = theorem1_bound(in, 2 * opt.best.delta_star);
  EXPECT_DOUBLE_EQ(twice.breakdown.delta_mu, 2.0 * opt.best.breakdown.delta_mu);
  EXPECT_GT(twice.value, opt.best.value);
}

TEST(MasterBound, MonotoneInTAboveOne) {
  for (const MixingProfile& profile :
       {MixingProfile{Exponential{1.0, 0.5}}, MixingProfile{Polynomial{1.0, 4.0}}}) {
    double prev = 0.0;
    for (double t = 1.0; t <= 10.0; t += 0.25) {
      const auto in = synthetic_bound_input(15, 1.0, std::log(2.0), profile, t);
      const double v = theorem1_bound(in, 30).value;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(MasterBound, PrefactorModes) {
  const auto in = synthetic_bound_input(10, 1.0, std::log(2.0),
                                        Exponential{1.0, 0.5}, 3.0);
  const auto a = theorem1_bound(in, 12, Prefactor::kTTimesMax);
  const auto b = theorem1_bound(in, 12, Prefactor::kMax);
  EXPECT_DOUBLE_EQ(a.prefactor, 9.0);
  EXPECT_DOUBLE_EQ(b.prefactor, 3.0);
  EXPECT_NEAR(a.value, 3.0 * b.value, 1e-15 * a.value);
  EXPECT_THROW(theorem1_bound(in, 0), std::invalid_argument);
}

TEST(PrescribedGap, Examples) {
  BoundInput in;
  in.mu_A = std::ldexp(1.0, -20);
  in.profile = Polynomial{1.0, 4.0};
  EXPECT_EQ(prescribed_gap(in), 256U);
  in.mu_A = std::exp(-10.0);
  in.profile = Exponential{1.0, std::exp(-1.0)};
  EXPECT_EQ(prescribed_gap(in, 0.1), 11U);
  in.profile = ExactZero{};
  EXPECT_THROW(prescribed_gap(in), std::invalid_argument);
  EXPECT_THROW(optimize_gap(in), std::invalid_argument);
}

TEST(OptimizeGap, GridContainsPrescription) {
  for (std::size_t n : {5UL, 10UL, 20UL, 30UL}) {
    for (const MixingProfile& profile :
         {MixingProfile{Exponential{1.0, 0.5}}, MixingProfile{Exponential{3.0, 0.8}},
          MixingProfile{Polynomial{1.0, 3.0}}}) {
      const auto in = synthetic_bound_input(n, 1.0, std::log(2.0), profile, 1.0);
      const auto opt = optimize_gap(in);
      EXPECT_TRUE(std::binary_search(opt.grid.begin(), opt.grid.end(),
                                     opt.prescribed.delta_star));
      EXPECT_LE(opt.best.value, opt.prescribed.value);
      EXPECT_GE(opt.best.value, 0.0);
      EXPECT_EQ(opt.grid_beats_prescription,
                2.0 * opt.best.value < opt.prescribed.value);
    }
  }
}

TEST(RateInN, PolynomialExponentIsExact) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> eta_d(1.0, 3.0), gap_d(0.01, 4.0);
  for (int i = 0; i < 10; ++i) {
    const double eta = eta_d(gen);
    const double beta = 1.0 + eta + gap_d(gen);
    const auto rate = theorem2_rate(10, eta, Polynomial{1.0, beta});
    EXPECT_EQ(rate.kind, RateKind::kPolynomial);
    EXPECT_EQ(rate.exponent, beta - 1.0 - eta);
  }
  EXPECT_EQ(theorem2_rate(10, 1.0, Polynomial{1.0, 4.0}).exponent, 2.0);
  EXPECT_THROW(theorem2_rate(10, 1.5, Polynomial{1.0, 2.5}), std::domain_error);
}

TEST(RateInN, ExponentialIsLogLinear) {
  const auto rate = theorem2_rate(10, 1.0, Exponential{1.0, 0.5});
  EXPECT_EQ(rate.kind, RateKind::kExponential);
  EXPECT_GT(rate.exponent, 0.0);
  EXPECT_GE(rate.r_squared, 0.99);
  EXPECT_EQ(rate.ns.front(), 10.0);
  EXPECT_EQ(rate.ns.back(), 40.0);
}

BoundInput young_input(std::size_t n, double mu, double mu_outer, double t) {
  BoundInput in;
  in.n = n;
  in.r_A = n;
  in.mu_A = mu;
  in.mu_A_outer = mu_outer;
  in.t = t;
  in.m = static_cast<std::size_t>(std::floor(t / mu));
  return in;
}

TEST(Young, Examples) {
  const auto in =
      young_input(20, std::ldexp(1.0, -20), std::ldexp(1.0, -10), 1.0);
  ASSERT_EQ(in.m, 1U << 20);
  const auto zero = young_bound(100, in, [](std::size_t) { return 0.0; });
  EXPECT_DOUBLE_EQ(zero.value, 100.0 * std::ldexp(1.0, -10));
  const auto r = young_bound(
      100, in, [](std::size_t k) { return std::pow(0.9, static_cast<double>(k)); });
  const long double expected = 100.0L / 1024.0L + 3.0L * std::pow(0.9L, 80) *
                                                       std::pow(2.0L, 20) *
                                                       20.0L * std::log(2.0L);
  EXPECT_NEAR(r.value, static_cast<double>(expected), 1e-12 * r.value);
  EXPECT_THROW(young_bound(20, in, [](std::size_t) { return 0.0; }),
               std::invalid_argument);
  EXPECT_THROW(young_bound(in.m, in, [](std::size_t) { return 0.0; }),
               std::invalid_argument);
}

TEST(Young, GapRegimes) {
  const double rho = 0.5;
  for (std::size_t n : {20UL, 30UL}) {
    const double mu = std::pow(rho, static_cast<double>(n));
    const double outer = std::pow(rho, static_cast<double>(n) / 2.0);
    const auto exp_best = young_optimize_gap(
        young_input(n, mu, mu, 1.0),
        [](std::size_t k) { return std::pow(0.5, static_cast<double>(k)); });
    const double ratio = static_cast<double>(exp_best.delta) / n;
    EXPECT_GE(ratio, 0.25);
    EXPECT_LE(ratio, 4.0);

    const double beta = 4.0;
    const auto poly_best = young_optimize_gap(
        young_input(n, mu, outer, 1.0), [beta](std::size_t k) {
          return std::pow(static_cast<double>(k), -beta);
        });
    const double target =
        std::pow(rho, -3.0 * static_cast<double>(n) / (2.0 * (beta + 1.0)));
    const double q = static_cast<double>(poly_best.delta) / target;
    EXPECT_GE(q, 0.25) << n;
    EXPECT_LE(q, 4.0) << n;
  }
}

}  // namespace
}  // namespace rtlab
