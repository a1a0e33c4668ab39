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

#ifndef RTLAB_MIXING_HPP_
#define RTLAB_MIXING_HPP_

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rtlab/cylinders.hpp"

namespace rtlab {

struct ExactZero {};
struct Exponential {
  double c = 1.0;
  double theta = 0.5;  // in (0, 1)
};
struct Polynomial {
  double c = 1.0;
  double beta = 2.0;  // summable iff beta > 1
};
// values[k-1] = alpha(k).
struct Table {
  std::vector<double> values;
};

using MixingProfile = std::variant<ExactZero, Exponential, Polynomial, Table>;

// Throws std::invalid_argument for negative constants, theta outside (0,1),
// beta <= 0, or a table that is empty, negative or increasing.
void validate(const MixingProfile& profile);

struct AlphaValue {
  double value = 0.0;
  // True when k lies beyond a table and the value comes from the fitted
  // geometric decay of its last entries.
  bool extrapolated = false;
};

AlphaValue alpha_value(const MixingProfile& profile, std::size_t k);
// alpha(k) for k >= 1; k == 0 throws std::invalid_argument.
double alpha(const MixingProfile& profile, std::size_t k);

// alpha at a separation that may be zero: alpha(0) is 1 (no separation, a
// trivial bound) except for ExactZero, whose cylinders are independent at
// every separation.
double alpha_at_gap(const MixingProfile& profile, std::size_t gap);

// sum_{j >= n} alpha(j), n >= 1. Exact up to rounding: Exponential in closed
// form, Polynomial by a partial sum plus an Euler-Maclaurin tail, Table by
// summation plus the fitted tail. Throws std::domain_error when the
// sequence is not summable.
double alpha_bar(const MixingProfile& profile, std::size_t n);

// Integral-comparison upper bracket: c (n-1)^{1-beta} / (beta-1) for n >= 2
// and c beta / (beta-1) for n = 1. Other profiles return alpha_bar.
double alpha_bar_upper(const MixingProfile& profile, std::size_t n);

// max |mu(A n T^{-n-k} B) / mu(B) - mu(A)| over all n-words A and all words
// B of length at most max_b, for exact models. A lower bound on alpha(k).
// Throws std::length_error when the enumeration exceeds 10^7 pairs.
double alpha_empirical(const MeasureModel& model, std::size_t n, std::size_t k,
                       std::size_t max_b = 6);

struct DeltaValue {
  double value = 0.0;
  std::size_t w = 0;  // minimizing suffix length (smallest on ties)
};

// min over 1 <= w <= min(k, n) of mu(A^{(w)}) + alpha(k - w).
DeltaValue delta_A(const Word& word, std::size_t k,
                   const MixingProfile& profile, const MeasureModel& model);

// Same minimization from precomputed suffix measures:
// suffix_mu[w-1] = mu(A^{(w)}).
DeltaValue delta_from_suffix_measures(std::span<const double> suffix_mu,
                                      std::size_t k,
                                      const MixingProfile& profile);

// r_A <= n + min{l >= 0 : alpha(l) < mu(A)}: with B = A the mixing
// inequality forces mu(A n T^{-n-l} A) > 0 at such l. Throws
// std::runtime_error if no l below 10^7 qualifies.
std::size_t mixing_recurrence_bound(const MixingProfile& profile,
                                    std::size_t n, double mu_A);

nlohmann::json to_json(const MixingProfile& profile);
MixingProfile profile_from_json(const nlohmann::json& j);

}  // namespace rtlab

#endif  // RTLAB_MIXING_HPP_
