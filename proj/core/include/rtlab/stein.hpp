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

#ifndef RTLAB_STEIN_HPP_
#define RTLAB_STEIN_HPP_

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace rtlab {

// e^{-t} t^i / i!, in log space for i > 20.
double poisson_pmf(double t, std::size_t i);
double log_poisson_pmf(double t, std::size_t i);

// sum_{i=0}^{k-1} e^{-t} t^i / i!: the limit of P(tau^k > t / mu(A)).
double erlang_tail(double t, std::size_t k);

// Solution of t f(k+1) - k f(k) = 1_E(k) - P_t(E) for the Poisson(t) law,
// tabulated for k = 1..k_max with f(0) = 0.
class SteinSolution {
 public:
  SteinSolution(double t, std::vector<std::size_t> event, double event_mass,
                std::vector<double> values)
      : t_(t),
        event_(std::move(event)),
        event_mass_(event_mass),
        values_(std::move(values)) {}

  double t() const { return t_; }
  const std::vector<std::size_t>& event() const { return event_; }
  // Poisson(t) probability of the event.
  double event_mass() const { return event_mass_; }
  std::size_t k_max() const { return values_.size(); }
  bool in_event(std::size_t k) const;

  // f(k) for 0 <= k <= k_max; f(0) = 0.
  double f(std::size_t k) const;
  // values()[k - 1] = f(k).
  std::span<const double> values() const { return values_; }

 private:
  double t_;
  std::vector<std::size_t> event_;
  double event_mass_;
  std::vector<double> values_;
};

// Throws std::invalid_argument for t <= 0, k_max == 0 or k_max > 10^6.
SteinSolution stein_solve(double t, std::span<const std::size_t> event,
                          std::size_t k_max);

// t f(k+1) - k f(k) for 1 <= k < k_max.
double stein_apply(const SteinSolution& solution, std::size_t k);

// The Stein operator applied to an arbitrary tabulated f (f[0] = f(0)).
double stein_operator(double t, std::span<const double> f, std::size_t k);

// f(k) through the tail representation
//   f(k) = -((k-1)! / t^k) sum_{i >= k} (1_E(i) - P_t(E)) t^i / i!,
// truncated at i = k + max(50, 10 t). `remainder_bound` certifies the
// dropped tail with a geometric comparison.
struct TailEvaluation {
  double value = 0.0;
  double remainder_bound = 0.0;
  std::size_t last_index = 0;
};
TailEvaluation stein_value_tail(double t, std::span<const std::size_t> event,
                                std::size_t k);

// Pointwise bound on |f(k)| for indicator events: 1 if k <= t, else (2+t)/k.
double stein_bound_pointwise(double t, std::size_t k);

// Bound on sum_{i=1}^m |f(i)|: m if m <= t, else t + (2+t) log(m/t).
double stein_bound_sum(double t, std::size_t m);

}  // namespace rtlab

#endif  // RTLAB_STEIN_HPP_
