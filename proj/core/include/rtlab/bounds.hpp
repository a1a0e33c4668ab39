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

#ifndef RTLAB_BOUNDS_HPP_
#define RTLAB_BOUNDS_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rtlab/cylinders.hpp"
#include "rtlab/mixing.hpp"

namespace rtlab {

// Everything the bound formulas read. The constant in front of each bound is
// never specified, so every value below is a rate certificate with the
// constant set to 1.
struct BoundInput {
  double mu_A = 0.0;
  double mu_A_outer = 0.0;  // mu(A~), tower bound only
  std::size_t n = 1;
  std::size_t r_A = 1;
  double t = 1.0;
  std::size_t k = 1;
  double eta = 1.0;  // |log mu(A)| <= K n^eta
  MixingProfile profile = ExactZero{};
  std::size_t m = 0;  // floor(t / mu_A)
  double delta_A_n = 0.0;
  double delta_A_rA = 0.0;
};

// Throws std::invalid_argument unless 0 < mu_A < 1, r_A >= 1, t > 0.
void validate(const BoundInput& input);

// Fills mu(A), r_A, m and both delta_A values from an exact model.
BoundInput make_bound_input(const Word& word, const MeasureModel& model,
                            const MixingProfile& profile, double t,
                            std::size_t k = 1, double eta = 1.0);

// The cylinder family mu(A^{(w)}) = exp(-K w^eta) with r_A = n, used to
// trace rates in n.
BoundInput synthetic_bound_input(std::size_t n, double eta, double K,
                                 const MixingProfile& profile, double t);

enum class Prefactor {
  kTTimesMax,  // t * max(t, 1)
  kMax,        // max(t, 1), the tower form
};

struct BoundBreakdown {
  double delta_mu = 0.0;       // Delta mu(A)
  double n_mu = 0.0;           // n mu(A), present in the assembled form
  double n_delta_n = 0.0;      // n delta_A(n)
  double n_delta_rA = 0.0;     // n delta_A(r_A)
  double alpha_bar = 0.0;      // alpha_bar(n)
  double alpha_over_mu = 0.0;  // alpha(Delta) / mu(A)
  double sum() const {
    return delta_mu + n_mu + n_delta_n + n_delta_rA + alpha_bar +
           alpha_over_mu;
  }
};

struct BoundReport {
  double value = 0.0;
  std::size_t delta_star = 0;
  BoundBreakdown breakdown;
  double prefactor = 1.0;
  double log_factor = 1.0;  // |log mu(A)|
  bool constant_free = true;
};

nlohmann::json to_json(const BoundReport& report);

// prefactor(t) * [(Delta + n) mu(A) + n(delta_A(n) + delta_A(r_A))
//                 + alpha_bar(n) + alpha(Delta)/mu(A)] * |log mu(A)|.
BoundReport theorem1_bound(const BoundInput& input, std::size_t delta,
                           Prefactor mode = Prefactor::kTTimesMax);

// Polynomial: round(mu^{-2/(beta+1)}). Exponential:
// ceil((1+eps)|log mu|/|log theta|), with a relative slack of 1e-9 so that
// rounding noise cannot push an integer up. Other profiles throw
// std::invalid_argument.
std::size_t prescribed_gap(const BoundInput& input, double epsilon = 0.1);

struct GapOptimization {
  BoundReport prescribed;
  BoundReport best;  // over the grid, which contains the prescription
  std::vector<std::size_t> grid;
  // best.value * 2 < prescribed.value
  bool grid_beats_prescription = false;
};

// 64 geometric points on [1, 10 * prescribed], rounded and deduplicated,
// plus the prescribed gap itself.
std::vector<std::size_t> gap_grid(std::size_t prescribed);

GapOptimization optimize_gap(const BoundInput& input, double epsilon = 0.1,
                             Prefactor mode = Prefactor::kTTimesMax);

enum class RateKind { kExponential, kPolynomial };

struct RateDescriptor {
  RateKind kind = RateKind::kPolynomial;
  // gamma in e^{-gamma n}, or beta - 1 - eta for n^{-(beta-1-eta)}.
  double exponent = 0.0;
  // Exponential only: the regression of log(bound) on n.
  double r_squared = 1.0;
  std::vector<double> ns;
  std::vector<double> values;
};

// Polynomial profiles need beta > 1 + eta (std::domain_error otherwise) and
// return the exact exponent. Exponential profiles fit log(bound) against n
// over [n, 4n] on the synthetic family with K = log 2, each bound taken at
// its grid-optimal gap.
RateDescriptor theorem2_rate(std::size_t n, double eta,
                             const MixingProfile& profile, double t = 1.0);

using DecayFunction = std::function<double(std::size_t)>;

struct YoungReport {
  double value = 0.0;
  std::size_t delta = 0;
  double delta_mu_outer = 0.0;  // Delta mu(A~)
  double decay_term = 0.0;      // (2+t) p(Delta-n) log(m) / mu(A)
  bool constant_free = true;
};

// Delta mu(A~) + (2+t) p(Delta - n) / mu(A) * log m. Requires
// n < delta < m (std::invalid_argument otherwise).
YoungReport young_bound(std::size_t delta, const BoundInput& input,
                        const DecayFunction& p);

// Smallest young_bound over 64 geometric gaps in (n, m).
YoungReport young_optimize_gap(const BoundInput& input,
                               const DecayFunction& p);

}  // namespace rtlab

#endif  // RTLAB_BOUNDS_HPP_
