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

#include "rtlab/stein.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rtlab {

namespace {

constexpr std::size_t kMaxSteinIndex = 1'000'000;

void require_positive_t(double t, const char* what) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw std::invalid_argument(std::string(what) + ": t must be positive");
  }
}

std::vector<std::size_t> normalise_event(std::span<const std::size_t> event) {
  std::vector<std::size_t> e(event.begin(), event.end());
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return e;
}

double event_probability(double t, const std::vector<std::size_t>& event) {
  double total = 0.0;
  for (std::size_t e : event) total += poisson_pmf(t, e);
  return total;
}

}  // namespace

double log_poisson_pmf(double t, std::size_t i) {
  const auto x = static_cast<double>(i);
  return -t + x * std::log(t) - std::lgamma(x + 1.0);
}

double poisson_pmf(double t, std::size_t i) {
  if (i > 20) return std::exp(log_poisson_pmf(t, i));
  double p = std::exp(-t);
  for (std::size_t j = 1; j <= i; ++j) p *= t / static_cast<double>(j);
  return p;
}

double erlang_tail(double t, std::size_t k) {
  require_positive_t(t, "erlang_tail");
  if (k == 0) throw std::invalid_argument("erlang_tail: k must be >= 1");
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double p = poisson_pmf(t, i);
    total += p;
    if (static_cast<double>(i) > t && p < 1e-300) break;
  }
  return std::min(total, 1.0);
}

bool SteinSolution::in_event(std::size_t k) const {
  return std::binary_search(event_.begin(), event_.end(), k);
}

double SteinSolution::f(std::size_t k) const {
  if (k == 0) return 0.0;
  if (k > values_.size()) {
    throw std::out_of_range("SteinSolution::f: k beyond k_max");
  }
  return values_[k - 1];
}

// With p_k = P(Z = k), L(k) = P(Z < k), Q(k) = P(Z >= k), E_< = E n [0,k)
// and E_>= = E n [k, oo), the finite-sum representation rearranges to
//
//   f(k) = [P(E_<) Q(k) - P(E_>=) L(k)] / (k p_k),
//
// which has no catastrophic cancellation. The ratios to p_k are carried by
// recurrences that are contracting in the direction they are run:
//   k <= t, forward:  l(k) = L(k)/p_k,     a(k) = P(E_<)/p_k
//   k >  t, backward: r(k) = Q(k)/p_k,     s(k) = P(E_>=)/p_k
SteinSolution stein_solve(double t, std::span<const std::size_t> event_in,
                          std::size_t k_max) {
  require_positive_t(t, "stein_solve");
  if (k_max == 0) throw std::invalid_argument("stein_solve: k_max == 0");
  if (k_max > kMaxSteinIndex) {
    throw std::invalid_argument("stein_solve: k_max above 10^6");
  }
  auto event = normalise_event(event_in);
  const double mass = event_probability(t, event);
  auto in_event = [&](std::size_t k) {
    return std::binary_search(event.begin(), event.end(), k);
  };

  std::vector<double> f(k_max, 0.0);
  // Largest k handled by the forward branch.
  const std::size_t split =
      std::min<std::size_t>(k_max, static_cast<std::size_t>(std::floor(t)));

  double l = 0.0, a = 0.0;  // l(0), a(0) are empty sums
  for (std::size_t k = 1; k <= split; ++k) {
    // Passing from k-1 to k multiplies by p_{k-1}/p_k = k/t.
    const double scale = static_cast<double>(k) / t;
    l = (l + 1.0) * scale;
    a = (a + (in_event(k - 1) ? 1.0 : 0.0)) * scale;
    const double pk = std::exp(log_poisson_pmf(t, k));
    const double lower = pk * l;  // L(k)
    const double upper = std::max(0.0, 1.0 - lower);
    const double event_upper = std::max(0.0, mass - pk * a);
    f[k - 1] = (a * upper - event_upper * l) / static_cast<double>(k);
  }

  if (split < k_max) {
    // Seed r and s beyond k_max with the series, then run downwards.
    const std::size_t top = k_max;
    double r = 0.0;
    {
      double term = 1.0;
      for (std::size_t j = 1; j < 100000; ++j) {
        r += term;
        term *= t / static_cast<double>(top + j);
        if (term < 1e-18 * r) break;
      }
    }
    double s = 0.0;
    {
      const double log_top = log_poisson_pmf(t, top);
      for (auto it = std::lower_bound(event.begin(), event.end(), top);
           it != event.end(); ++it) {
        s += std::exp(log_poisson_pmf(t, *it) - log_top);
      }
    }
    for (std::size_t k = top;; --k) {
      if (k < top) {
        // Passing from k+1 to k: r(k) = 1 + (t/(k+1)) r(k+1).
        const double ratio = t / static_cast<double>(k + 1);
        r = 1.0 + ratio * r;
        s = (in_event(k) ? 1.0 : 0.0) + ratio * s;
      }
      const double pk = std::exp(log_poisson_pmf(t, k));
      const double upper = pk * r;  // Q(k)
      const double lower = std::max(0.0, 1.0 - upper);
      const double event_lower = std::max(0.0, mass - pk * s);
      f[k - 1] = (event_lower * r - s * lower) / static_cast<double>(k);
      if (k == split + 1) break;
    }
  }
  return SteinSolution(t, std::move(event), mass, std::move(f));
}

double stein_apply(const SteinSolution& solution, std::size_t k) {
  if (k < 1 || k >= solution.k_max()) {
    throw std::out_of_range("stein_apply: need 1 <= k < k_max");
  }
  return solution.t() * solution.f(k + 1) -
         static_cast<double>(k) * solution.f(k);
}

double stein_operator(double t, std::span<const double> f, std::size_t k) {
  if (k + 1 >= f.size()) throw std::out_of_range("stein_operator: k too big");
  return t * f[k + 1] - static_cast<double>(k) * f[k];
}

TailEvaluation stein_value_tail(double t, std::span<const std::size_t> event_in,
                                std::size_t k) {
  require_positive_t(t, "stein_value_tail");
  if (k == 0) throw std::invalid_argument("stein_value_tail: k must be >= 1");
  const auto event = normalise_event(event_in);
  // The result is sensitive to P(E) with a factor of order 1/p_k when k < t,
  // so the mass is accumulated in extended precision as well.
  long double m = 0.0L;
  {
    long double p = std::exp(-static_cast<long double>(t));
    std::size_t i = 0;
    for (std::size_t e : event) {
      for (; i < e; ++i) {
        p *= static_cast<long double>(t) / static_cast<long double>(i + 1);
      }
      m += p;
    }
  }
  const std::size_t last =
      k + std::max<std::size_t>(50, static_cast<std::size_t>(std::ceil(10 * t)));
  // Ratios p_i / p_k by recurrence, summed in extended precision: for k < t
  // the ratios grow to p_mode / p_k and the signed sum cancels heavily.
  long double ratio = 1.0L, sum = 0.0L;
  for (std::size_t i = k; i <= last; ++i) {
    const bool in = std::binary_search(event.begin(), event.end(), i);
    sum += ((in ? 1.0L : 0.0L) - m) * ratio;
    ratio *= static_cast<long double>(t) / static_cast<long double>(i + 1);
  }
  TailEvaluation out;
  out.value = static_cast<double>(-sum / static_cast<long double>(k));
  out.last_index = last;
  // |h - P(E)| <= 1 and p_{i+1}/p_i = t/(i+1) <= t/(last+1) beyond `last`.
  const double q = t / static_cast<double>(last + 1);
  out.remainder_bound = std::exp(log_poisson_pmf(t, last) -
                                 log_poisson_pmf(t, k)) * q /
                        (1.0 - q) / static_cast<double>(k);
  return out;
}

double stein_bound_pointwise(double t, std::size_t k) {
  require_positive_t(t, "stein_bound_pointwise");
  const auto x = static_cast<double>(k);
  return x <= t ? 1.0 : (2.0 + t) / x;
}

double stein_bound_sum(double t, std::size_t m) {
  require_positive_t(t, "stein_bound_sum");
  const auto x = static_cast<double>(m);
  return x <= t ? x : t + (2.0 + t) * std::log(x / t);
}

}  // namespace rtlab
