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

#ifndef RTLAB_TOWER_HPP_
#define RTLAB_TOWER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rtlab/dynamics.hpp"

namespace rtlab {

// a_0 = 1/2 and T(a_i) = a_{i-1} on the left branch, each a_i bisected to
// full double precision.
GwSystem gw_ladder(double alpha, std::size_t i_max);

// Base branches with weights nu_i and return times R_i.
struct TowerSpec {
  std::vector<double> weights;
  std::vector<std::size_t> return_times;
  // Mass dropped by truncating the branch list before renormalizing.
  double truncation_mass = 0.0;
  std::vector<std::string> warnings;

  double mean_return() const;
  std::size_t height() const;  // max R_i
};

// Throws std::invalid_argument if weights do not sum to 1 within 1e-12, a
// return time is zero or the sizes differ.
void validate(const TowerSpec& spec);

TowerSpec make_tower(std::vector<double> weights,
                     std::vector<std::size_t> return_times);

// Branch i = A_i with weight a_{i-1} - a_i (a_{-1} = 1) and R_i = i + 1,
// for i <= i_max, renormalized. Records a warning when more than 1% of the
// mass is truncated.
TowerSpec gw_tower(double alpha, std::size_t i_max);

// nu(R > j) for j = 0 .. height()-1.
std::vector<double> tower_tail(const TowerSpec& spec);

// mu(level j) = nu(R > j) / E[R]; sums to 1.
std::vector<double> tower_invariant(const TowerSpec& spec);

// Climbs levels; at the top of branch i returns to level 0 and draws the next
// branch from nu independently. Starts from the invariant measure.
struct TowerPath {
  std::vector<std::uint32_t> branches;
  std::vector<std::uint32_t> levels;
  std::uint64_t seed = 0;
};
TowerPath tower_simulate(const TowerSpec& spec, std::size_t length,
                         std::uint64_t seed);

// Level visit counts of the same path as tower_simulate, without storing it.
std::vector<std::uint64_t> tower_occupancy(const TowerSpec& spec,
                                           std::size_t length,
                                           std::uint64_t seed);

// {"branches": [{"weight": w, "return_time": R}, ...]} or
// {"gaspard_wang": {"alpha": a, "i_max": N}}.
TowerSpec tower_from_json(const nlohmann::json& j);

// For positive reals: |1 - sum a / sum b| <= max_i |1 - a_i / b_i|.
struct RatioGap {
  double aggregate = 0.0;  // |1 - sum a / sum b|
  double worst = 0.0;      // max_i |1 - a_i / b_i|
};
RatioGap ratio_gap(std::span<const double> a, std::span<const double> b);

enum class UlamMap { kDoubling, kGaspardWang };

// Row-stochastic Ulam matrix on B equal bins: entry (b, b') is the fraction
// of bin b mapped into bin b'. Stored by rows, sparse.
struct UlamOperator {
  UlamMap map = UlamMap::kDoubling;
  double alpha = 0.0;  // Gaspard-Wang exponent
  std::size_t bins = 0;
  std::vector<std::vector<std::pair<std::uint32_t, double>>> rows;

  // v P for a row vector v.
  void push_forward(std::span<const double> v, std::span<double> out) const;
  double entry(std::size_t b, std::size_t c) const;
};

UlamOperator ulam_build(UlamMap map, std::size_t bins, double alpha = 0.0);

// Invariant probability vector by power iteration from the uniform vector,
// stopping when successive iterates differ by < 1e-12 in L1. Throws
// std::runtime_error after 10^5 iterations.
std::vector<double> ulam_stationary(const UlamOperator& op);

// p(k) = || initial P^k - h ||_1 for k = 0..k_max, h = ulam_stationary.
// `initial` must be a probability vector.
std::vector<double> ulam_decay(const UlamOperator& op,
                               std::span<const double> initial,
                               std::size_t k_max);

// Probability vector of a tent of half-width `half_width` bins centred at x.
std::vector<double> smoothed_point_mass(std::size_t bins, double x,
                                        std::size_t half_width);

}  // namespace rtlab

#endif  // RTLAB_TOWER_HPP_
