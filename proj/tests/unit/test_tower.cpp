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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "rtlab/regression.hpp"
#include "rtlab/tower.hpp"

namespace rtlab {
namespace {

TEST(Ladder, FirstRungAgainstBisection) {
  long double lo = 0.0L, hi = 0.5L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    const long double v = mid + std::sqrt(2.0L) * std::pow(mid, 1.5L);
    (v < 0.5L ? lo : hi) = mid;
  }
  const auto sys = gw_ladder(0.5, 3);
  EXPECT_EQ(sys.boundaries[0], 0.5);
  EXPECT_NEAR(sys.boundaries[1], static_cast<double>(lo), 1e-14);
}

TEST(Ladder, ResidualsAndScaling) {
  for (double a : {0.5, 0.75}) {
    const auto sys = gw_ladder(a, 1000);
    for (std::size_t i = 1; i <= sys.depth(); ++i) {
      EXPECT_LE(std::abs(gw_step(sys.boundaries[i], a) - sys.boundaries[i - 1]),
                1e-12);
    }
  }
}

double ladder_ratio_variation(double a) {
  const auto sys = gw_ladder(a, 1000);
  double lo = 1e300, hi = 0.0;
  for (std::size_t i = 100; i <= 1000; ++i) {
    const double r = sys.boundaries[i] * std::pow(static_cast<double>(i), 1.0 / a);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return hi / lo - 1.0;
}

TEST(Ladder, PowerLawScaling) {
  EXPECT_LE(ladder_ratio_variation(0.75), 0.05);
  // At a = 0.5 the O(log i / i) correction still moves a_i i^2 from 2.146
  // at i = 100 to 2.028 at i = 1000; a long double ladder gives 0.0582.
  EXPECT_NEAR(ladder_ratio_variation(0.5), 0.0582, 5e-4);
}

TEST(GwTower, TailTelescopesAndDecays) {
  for (double a : {0.5, 0.75}) {
    const std::size_t i_max = 20000;
    const auto sys = gw_ladder(a, i_max);
    const auto spec = gw_tower(a, i_max);
    const auto tail = tower_tail(spec);
    const double last = sys.boundaries[i_max];
    for (std::size_t j = 1; j < tail.size(); j += 97) {
      const double expected =
          (sys.boundaries[j - 1] - last) / (1.0 - last);
      EXPECT_NEAR(tail[j], expected, 1e-12);
    }
    EXPECT_NEAR(tail[0], 1.0, 1e-12);
    std::vector<double> ns, vs;
    for (std::size_t j = 50; j <= 500; ++j) {
      ns.push_back(static_cast<double>(j));
      vs.push_back(tail[j]);
    }
    const auto fit = fit_log_log(ns, vs);
    EXPECT_NEAR(fit.slope / (-1.0 / a), 1.0, 0.1);
    EXPECT_GT(spec.mean_return(), 1.0);
  }
}

TEST(GwTower, TruncationWarning) {
  EXPECT_FALSE(gw_tower(0.75, 10).warnings.empty());
  EXPECT_GT(gw_tower(0.75, 10).truncation_mass, 0.01);
  EXPECT_TRUE(gw_tower(0.25, 2000).warnings.empty());
}

TEST(TowerInvariant, Examples) {
  const auto one = tower_invariant(make_tower({1.0}, {1}));
  ASSERT_EQ(one.size(), 1U);
  EXPECT_DOUBLE_EQ(one[0], 1.0);
  const auto two = make_tower({0.5, 0.5}, {1, 2});
  EXPECT_DOUBLE_EQ(two.mean_return(), 1.5);
  const auto inv = tower_invariant(two);
  EXPECT_NEAR(inv[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(inv[1], 1.0 / 3.0, 1e-15);
  EXPECT_THROW(make_tower({0.5, 0.4}, {1, 2}), std::invalid_argument);
  EXPECT_THROW(make_tower({0.5, 0.5}, {0, 2}), std::invalid_argument);
}

TEST(TowerInvariant, SumsToOneAndGwLevelsDecay) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::uniform_int_distribution<std::size_t> r(1, 40);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> w(1 + trial % 9);
    std::vector<std::size_t> rt(w.size());
    for (auto& x : w) x = u(gen);
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& x : w) x /= s;
    for (auto& x : rt) x = r(gen);
    const auto inv = tower_invariant(make_tower(w, rt));
    EXPECT_NEAR(std::accumulate(inv.begin(), inv.end(), 0.0), 1.0, 1e-10);
  }
  const auto inv = tower_invariant(gw_tower(0.5, 100000));
  EXPECT_NEAR(std::accumulate(inv.begin(), inv.end(), 0.0), 1.0, 1e-10);
  std::vector<double> js, ms;
  for (std::size_t j = 50; j <= 500; ++j) {
    js.push_back(static_cast<double>(j));
    ms.push_back(inv[j]);
  }
  EXPECT_NEAR(fit_log_log(js, ms).slope, -2.0, 0.3);
}

TEST(TowerSimulate, SingleBranchIsPeriodic) {
  const auto path = tower_simulate(make_tower({1.0}, {3}), 30, 9);
  ASSERT_EQ(path.levels.size(), 30U);
  for (std::size_t i = 1; i < path.levels.size(); ++i) {
    EXPECT_EQ(path.levels[i], (path.levels[i - 1] + 1) % 3);
  }
}

TEST(TowerSimulate, DeterministicAndConsistent) {
  const auto spec = make_tower({0.2, 0.5, 0.3}, {1, 4, 2});
  const auto a = tower_simulate(spec, 5000, 42);
  const auto b = tower_simulate(spec, 5000, 42);
  EXPECT_EQ(a.levels, b.levels);
  EXPECT_EQ(a.branches, b.branches);
  const auto occ = tower_occupancy(spec, 5000, 42);
  std::vector<std::uint64_t> counted(spec.height(), 0);
  for (auto l : a.levels) ++counted[l];
  EXPECT_EQ(occ, counted);
  for (std::size_t i = 0; i < a.levels.size(); ++i) {
    EXPECT_LT(a.levels[i], spec.return_times[a.branches[i]]);
    if (i > 0 && a.levels[i] > 0) {
      EXPECT_EQ(a.levels[i], a.levels[i - 1] + 1);
      EXPECT_EQ(a.branches[i], a.branches[i - 1]);
    }
  }
}

TEST(TowerSimulate, OccupancyMatchesInvariant) {
  const auto spec = make_tower({0.5, 0.5}, {1, 2});
  const std::size_t steps = 10'000'000;
  const auto occ = tower_occupancy(spec, steps, 11);
  const auto inv = tower_invariant(spec);
  for (std::size_t j = 0; j < inv.size(); ++j) {
    const double f = static_cast<double>(occ[j]) / steps;
    EXPECT_LE(std::abs(f / inv[j] - 1.0), 0.01);
  }
}

TEST(TowerSimulate, BranchChoicesAreUncorrelated) {
  const auto spec = make_tower({0.3, 0.7}, {2, 3});
  const auto path = tower_simulate(spec, 400000, 5);
  std::vector<double> draws;
  for (std::size_t i = 0; i < path.levels.size(); ++i) {
    if (path.levels[i] == 0) draws.push_back(path.branches[i]);
  }
  const double n = static_cast<double>(draws.size());
  const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / n;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    den += (draws[i] - mean) * (draws[i] - mean);
    if (i + 1 < draws.size()) num += (draws[i] - mean) * (draws[i + 1] - mean);
  }
  EXPECT_LE(std::abs(num / den), 3.0 / std::sqrt(n));
}

TEST(TowerJson, BothForms) {
  const auto a = tower_from_json(nlohmann::json::parse(
      R"({"branches": [{"weight": 0.5, "return_time": 1},
                       {"weight": 0.5, "return_time": 2}]})"));
  EXPECT_EQ(a.return_times, (std::vector<std::size_t>{1, 2}));
  const auto b = tower_from_json(nlohmann::json::parse(
      R"({"gaspard_wang": {"alpha": 0.5, "i_max": 100}})"));
  EXPECT_EQ(b.return_times.size(), 101U);
  EXPECT_EQ(b.return_times.back(), 101U);
  EXPECT_THROW(tower_from_json(nlohmann::json::object()), std::invalid_argument);
}

TEST(RatioGap, AggregateNeverExceedsWorst) {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(1e-3, 10.0);
  std::uniform_int_distribution<std::size_t> len(1, 100);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(len(gen)), b(a.size());
    for (auto& x : a) x = u(gen);
    for (auto& x : b) x = u(gen);
    const auto g = ratio_gap(a, b);
    EXPECT_LE(g.aggregate, g.worst * (1.0 + 1e-12));
  }
  const std::vector<double> a{1.0}, z{0.0};
  EXPECT_THROW(ratio_gap(a, z), std::invalid_argument);
}

TEST(Ulam, TwoBinDoubling) {
  const auto op = ulam_build(UlamMap::kDoubling, 2);
  for (std::size_t b = 0; b < 2; ++b) {
    for (std::size_t c = 0; c < 2; ++c) EXPECT_NEAR(op.entry(b, c), 0.5, 1e-15);
  }
}

TEST(Ulam, RowsAreStochastic) {
  for (const auto& op : {ulam_build(UlamMap::kDoubling, 300),
                         ulam_build(UlamMap::kGaspardWang, 256, 0.5),
                         ulam_build(UlamMap::kGaspardWang, 128, 0.25)}) {
    for (const auto& row : op.rows) {
      double s = 0.0;
      for (const auto& [c, v] : row) {
        EXPECT_GE(v, 0.0);
        EXPECT_LT(c, op.bins);
        s += v;
      }
      EXPECT_NEAR(s, 1.0, 1e-10);
    }
  }
}

TEST(Ulam, GwRowsMatchSampling) {
  // Fraction of bin 0 of 16 landing in each bin, by dense midpoint sampling.
  const double a = 0.5;
  const auto op = ulam_build(UlamMap::kGaspardWang, 16, a);
  std::vector<double> hits(16, 0.0);
  const int samples = 200000;
  for (int s = 0; s < samples; ++s) {
    const double x = (s + 0.5) / samples / 16.0;
    const double y = gw_step(x, a);
    hits[std::min<std::size_t>(15, static_cast<std::size_t>(y * 16))] +=
        1.0 / samples;
  }
  for (std::size_t c = 0; c < 16; ++c) {
    EXPECT_NEAR(op.entry(0, c), hits[c], 1e-4);
  }
}

TEST(Ulam, DoublingStationaryIsUniform) {
  const auto op = ulam_build(UlamMap::kDoubling, 1024);
  const auto h = ulam_stationary(op);
  for (double v : h) EXPECT_NEAR(v, 1.0 / 1024.0, 1e-8);
}

TEST(Ulam, DecayProperties) {
  const auto op = ulam_build(UlamMap::kGaspardWang, 256, 0.5);
  const auto h = ulam_stationary(op);
  const auto fixed = ulam_decay(op, h, 20);
  for (double v : fixed) EXPECT_LE(v, 1e-10);
  const auto init = smoothed_point_mass(256, 0.3, 4);
  EXPECT_NEAR(std::accumulate(init.begin(), init.end(), 0.0), 1.0, 1e-14);
  const auto p = ulam_decay(op, init, 60);
  double d0 = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) d0 += std::abs(init[i] - h[i]);
  EXPECT_NEAR(p[0], d0, 1e-12);
  for (std::size_t k = 1; k < p.size(); ++k) EXPECT_LE(p[k], p[k - 1] + 1e-13);
  const std::vector<double> bad(256, 1.0);
  EXPECT_THROW(ulam_decay(op, bad, 3), std::invalid_argument);
}

}  // namespace
}  // namespace rtlab
