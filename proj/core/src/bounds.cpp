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

#include "rtlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "rtlab/regression.hpp"

namespace rtlab {

namespace {

double prefactor_of(double t, Prefactor mode) {
  const double tail = std::max(t, 1.0);
  return mode == Prefactor::kTTimesMax ? t * tail : tail;
}

std::vector<std::size_t> geometric_grid(double lo, double hi,
                                        std::size_t points) {
  std::vector<std::size_t> grid;
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < points; ++i) {
    const double x =
        std::exp(a + (b - a) * static_cast<double>(i) /
                         static_cast<double>(points - 1));
    grid.push_back(static_cast<std::size_t>(std::llround(x)));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

}  // namespace

void validate(const BoundInput& input) {
  if (!(input.mu_A > 0.0 && input.mu_A < 1.0)) {
    throw std::invalid_argument("bound input: mu_A must lie in (0,1)");
  }
  if (input.r_A < 1 || input.n < 1) {
    throw std::invalid_argument("bound input: n and r_A must be >= 1");
  }
  if (!(input.t > 0.0)) throw std::invalid_argument("bound input: t <= 0");
  validate(input.profile);
}

BoundInput make_bound_input(const Word& word, const MeasureModel& model,
                            const MixingProfile& profile, double t,
                            std::size_t k, double eta) {
  BoundInput in;
  in.mu_A = measure(word, model);
  in.n = word.size();
  in.r_A = recurrence_time(word, admissibility_of(model));
  in.t = t;
  in.k = k;
  in.eta = eta;
  in.profile = profile;
  validate(in);
  in.m = static_cast<std::size_t>(std::floor(t / in.mu_A));
  in.delta_A_n = delta_A(word, in.n, profile, model).value;
  in.delta_A_rA = delta_A(word, in.r_A, profile, model).value;
  return in;
}

BoundInput synthetic_bound_input(std::size_t n, double eta, double K,
                                 const MixingProfile& profile, double t) {
  std::vector<double> suffix(n);
  for (std::size_t w = 1; w <= n; ++w) {
    suffix[w - 1] = std::exp(-K * std::pow(static_cast<double>(w), eta));
  }
  BoundInput in;
  in.mu_A = suffix.back();
  in.n = n;
  in.r_A = n;
  in.t = t;
  in.eta = eta;
  in.profile = profile;
  validate(in);
  in.m = static_cast<std::size_t>(std::floor(t / in.mu_A));
  in.delta_A_n = delta_from_suffix_measures(suffix, n, profile).value;
  in.delta_A_rA = in.delta_A_n;
  return in;
}

nlohmann::json to_json(const BoundReport& report) {
  return {
      {"value", report.value},
      {"delta_star", report.delta_star},
      {"delta_mu", report.breakdown.delta_mu},
      {"n_mu", report.breakdown.n_mu},
      {"n_delta_n", report.breakdown.n_delta_n},
      {"n_delta_rA", report.breakdown.n_delta_rA},
      {"alpha_bar", report.breakdown.alpha_bar},
      {"alpha_over_mu", report.breakdown.alpha_over_mu},
      {"prefactor", report.prefactor},
      {"log_factor", report.log_factor},
      {"constant_free", report.constant_free},
  };
}

BoundReport theorem1_bound(const BoundInput& input, std::size_t delta,
                           Prefactor mode) {
  validate(input);
  if (delta < 1) throw std::invalid_argument("theorem1_bound: delta < 1");
  const auto n = static_cast<double>(input.n);
  BoundReport r;
  r.delta_star = delta;
  r.breakdown.delta_mu = static_cast<double>(delta) * input.mu_A;
  r.breakdown.n_mu = n * input.mu_A;
  r.breakdown.n_delta_n = n * input.delta_A_n;
  r.breakdown.n_delta_rA = n * input.delta_A_rA;
  r.breakdown.alpha_bar = alpha_bar(input.profile, input.n);
  r.breakdown.alpha_over_mu = alpha(input.profile, delta) / input.mu_A;
  r.prefactor = prefactor_of(input.t, mode);
  r.log_factor = std::abs(std::log(input.mu_A));
  r.value = r.prefactor * r.breakdown.sum() * r.log_factor;
  return r;
}

std::size_t prescribed_gap(const BoundInput& input, double epsilon) {
  validate(input);
  double x = 0.0;
  if (const auto* p = std::get_if<Polynomial>(&input.profile)) {
    x = std::round(std::pow(input.mu_A, -2.0 / (p->beta + 1.0)));
  } else if (const auto* e = std::get_if<Exponential>(&input.profile)) {
    const double raw = (1.0 + epsilon) * std::abs(std::log(input.mu_A)) /
                       std::abs(std::log(e->theta));
    x = std::ceil(raw - 1e-9 * raw);
  } else {
    throw std::invalid_argument(
        "prescribed_gap: needs an exponential or polynomial profile");
  }
  return static_cast<std::size_t>(std::max(1.0, x));
}

std::vector<std::size_t> gap_grid(std::size_t prescribed) {
  auto grid = geometric_grid(1.0, 10.0 * static_cast<double>(prescribed), 64);
  if (!std::binary_search(grid.begin(), grid.end(), prescribed)) {
    grid.insert(std::lower_bound(grid.begin(), grid.end(), prescribed),
                prescribed);
  }
  return grid;
}

GapOptimization optimize_gap(const BoundInput& input, double epsilon,
                             Prefactor mode) {
  GapOptimization out;
  const std::size_t dp = prescribed_gap(input, epsilon);
  out.prescribed = theorem1_bound(input, dp, mode);
  out.grid = gap_grid(dp);
  out.best = out.prescribed;
  for (std::size_t d : out.grid) {
    BoundReport r = theorem1_bound(input, d, mode);
    if (r.value < out.best.value) out.best = r;
  }
  out.grid_beats_prescription = 2.0 * out.best.value < out.prescribed.value;
  return out;
}

RateDescriptor theorem2_rate(std::size_t n, double eta,
                             const MixingProfile& profile, double t) {
  validate(profile);
  RateDescriptor out;
  if (const auto* p = std::get_if<Polynomial>(&profile)) {
    if (!(p->beta > 1.0 + eta)) {
      throw std::domain_error("theorem2_rate: requires beta > 1 + eta");
    }
    out.kind = RateKind::kPolynomial;
    out.exponent = p->beta - 1.0 - eta;
    return out;
  }
  if (!std::holds_alternative<Exponential>(profile)) {
    throw std::invalid_argument(
        "theorem2_rate: needs an exponential or polynomial profile");
  }
  if (n < 1) throw std::invalid_argument("theorem2_rate: n must be >= 1");
  out.kind = RateKind::kExponential;
  for (std::size_t j = n; j <= 4 * n; ++j) {
    const BoundInput in =
        synthetic_bound_input(j, eta, std::log(2.0), profile, t);
    out.ns.push_back(static_cast<double>(j));
    out.values.push_back(optimize_gap(in).best.value);
  }
  const LinearFit fit = fit_log_linear(out.ns, out.values);
  out.exponent = -fit.slope;
  out.r_squared = fit.r_squared;
  return out;
}

YoungReport young_bound(std::size_t delta, const BoundInput& input,
                        const DecayFunction& p) {
  validate(input);
  if (delta <= input.n) {
    throw std::invalid_argument("young_bound: delta must exceed n");
  }
  if (delta >= input.m) {
    throw std::invalid_argument("young_bound: delta must be below m");
  }
  YoungReport r;
  r.delta = delta;
  r.delta_mu_outer = static_cast<double>(delta) * input.mu_A_outer;
  r.decay_term = (2.0 + input.t) * p(delta - input.n) / input.mu_A *
                 std::log(static_cast<double>(input.m));
  r.value = r.delta_mu_outer + r.decay_term;
  return r;
}

YoungReport young_optimize_gap(const BoundInput& input,
                               const DecayFunction& p) {
  validate(input);
  if (input.m < input.n + 2) {
    throw std::invalid_argument("young_optimize_gap: no gap fits in (n, m)");
  }
  const auto grid = geometric_grid(static_cast<double>(input.n + 1),
                                   static_cast<double>(input.m - 1), 64);
  YoungReport best;
  best.value = std::numeric_limits<double>::infinity();
  for (std::size_t d : grid) {
    if (d <= input.n || d >= input.m) continue;
    const YoungReport r = young_bound(d, input, p);
    if (r.value < best.value) best = r;
  }
  return best;
}

}  // namespace rtlab
