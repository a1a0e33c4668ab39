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

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "rtlab/regression.hpp"
#include "rtlab/rng.hpp"

namespace rtlab {
namespace {

TEST(Splitmix, ReferenceOutputs) {
  std::uint64_t s = 0;
  EXPECT_EQ(splitmix64(s), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(splitmix64(s), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(splitmix64(s), 0x06C45D188009454FULL);
}

TEST(DeriveSeed, DistinctStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t root : {0ULL, 1ULL, 42ULL}) {
    for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(derive_seed(root, k));
  }
  EXPECT_EQ(seen.size(), 3000U);
  EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
}

TEST(Rng, DeterministicAndInRange) {
  Rng a(5), b(5);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    const double v = a.uniform_open_left();
    b.uniform_open_left();
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(Rng, BelowAndBitsAreBalanced) {
  Rng r(9);
  const int draws = 600000;
  std::vector<int> counts(6, 0);
  for (int i = 0; i < draws; ++i) ++counts[r.below(6)];
  for (int c : counts) EXPECT_NEAR(c / (draws / 6.0), 1.0, 0.02);
  long ones = 0;
  for (int i = 0; i < draws; ++i) ones += r.bit();
  EXPECT_NEAR(static_cast<double>(ones) / draws, 0.5, 0.005);
  EXPECT_EQ(r.below(1), 0U);
}

TEST(Regression, MatchesEigenLeastSquares) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> noise(0.0, 0.3);
  std::vector<double> x, y;
  for (int i = 0; i < 50; ++i) {
    x.push_back(i * 0.1);
    y.push_back(2.0 - 1.5 * x.back() + noise(gen));
  }
  Eigen::MatrixXd A(50, 2);
  Eigen::VectorXd b(50);
  for (int i = 0; i < 50; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = x[i];
    b(i) = y[i];
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd res = b - A * coef;
  const double ss_tot = (b.array() - b.mean()).square().sum();
  const auto fit = fit_line(x, y);
  EXPECT_NEAR(fit.intercept, coef(0), 1e-12);
  EXPECT_NEAR(fit.slope, coef(1), 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0 - res.squaredNorm() / ss_tot, 1e-12);
}

TEST(Regression, LogForms) {
  std::vector<double> x{1, 2, 4, 8}, pw, ex;
  for (double v : x) {
    pw.push_back(3.0 * std::pow(v, -2.0));
    ex.push_back(0.5 * std::exp(-0.7 * v));
  }
  EXPECT_NEAR(fit_log_log(x, pw).slope, -2.0, 1e-12);
  EXPECT_NEAR(fit_log_linear(x, ex).slope, -0.7, 1e-12);
  EXPECT_NEAR(fit_log_linear(x, ex).r_squared, 1.0, 1e-12);
  const std::vector<double> same{1, 1}, two{1, 2};
  EXPECT_THROW(fit_line(same, two), std::invalid_argument);
  const std::vector<double> neg{1, -1};
  EXPECT_THROW(fit_log_linear(two, neg), std::invalid_argument);
}

}  // namespace
}  // namespace rtlab
