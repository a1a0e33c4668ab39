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

#include "rtlab/tower.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rtlab/rng.hpp"

namespace rtlab {

namespace {

// The left branch evaluated exactly as gw_step does, so that classification
// against the ladder agrees with the simulated orbit.
double gw_left(double x, double alpha) { return gw_step(x, alpha); }

// Largest double x in [lo, hi] with gw_left(x) <= y, given
// gw_left(lo) <= y < gw_left(hi).
double gw_left_inverse(double y, double alpha, double lo, double hi) {
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (gw_left(mid, alpha) <= y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::vector<double> cumulative(std::span<const double> w) {
  std::vector<double> cdf(w.size());
  std::partial_sum(w.begin(), w.end(), cdf.begin());
  for (double& c : cdf) c /= cdf.back();
  return cdf;
}

std::size_t draw(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
}

// Walks the tower, calling visit(branch, level) once per step.
template <class Visit>
void walk_tower(const TowerSpec& spec, std::size_t length, std::uint64_t seed,
                Visit&& visit) {
  validate(spec);
  Rng rng(seed);
  const auto branch_cdf = cumulative(spec.weights);
  std::vector<double> start(spec.weights.size());
  for (std::size_t i = 0; i < start.size(); ++i) {
    start[i] = spec.weights[i] * static_cast<double>(spec.return_times[i]);
  }
  const auto start_cdf = cumulative(start);
  std::size_t branch = draw(start_cdf, rng);
  std::size_t level = rng.below(spec.return_times[branch]);
  for (std::size_t step = 0; step < length; ++step) {
    visit(branch, level);
    if (++level == spec.return_times[branch]) {
      level = 0;
      branch = draw(branch_cdf, rng);
    }
  }
}

}  // namespace

GwSystem gw_ladder(double alpha, std::size_t i_max) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("gw_ladder: alpha must lie in (0,1)");
  }
  if (i_max < 1) throw std::invalid_argument("gw_ladder: i_max must be >= 1");
  GwSystem sys;
  sys.alpha = alpha;
  sys.boundaries.reserve(i_max + 1);
  sys.boundaries.push_back(0.5);
  const double c = std::pow(2.0, alpha);
  for (std::size_t i = 1; i <= i_max; ++i) {
    const double prev = sys.boundaries.back();
    // gw_left(prev - c prev^{1+a}) < prev, so the root lies above.
    const double lo = std::max(0.0, prev - c * std::pow(prev, 1.0 + alpha));
    const double a = gw_left_inverse(prev, alpha, lo, prev);
    if (!(a > 0.0 && a < prev)) {
      throw std::runtime_error("gw_ladder: ladder stopped decreasing");
    }
    sys.boundaries.push_back(a);
  }
  return sys;
}

double TowerSpec::mean_return() const {
  double m = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    m += weights[i] * static_cast<double>(return_times[i]);
  }
  return m;
}

std::size_t TowerSpec::height() const {
  return return_times.empty()
             ? 0
             : *std::max_element(return_times.begin(), return_times.end());
}

void validate(const TowerSpec& spec) {
  if (spec.weights.empty() || spec.weights.size() != spec.return_times.size()) {
    throw std::invalid_argument("tower: weights and return times mismatch");
  }
  double total = 0.0;
  for (double w : spec.weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("tower: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("tower: weights must sum to 1");
  }
  for (std::size_t r : spec.return_times) {
    if (r < 1) throw std::invalid_argument("tower: return times must be >= 1");
  }
}

TowerSpec make_tower(std::vector<double> weights,
                     std::vector<std::size_t> return_times) {
  TowerSpec spec;
  spec.weights = std::move(weights);
  spec.return_times = std::move(return_times);
  validate(spec);
  return spec;
}

TowerSpec gw_tower(double alpha, std::size_t i_max) {
  const GwSystem ladder = gw_ladder(alpha, i_max);
  const auto& a = ladder.boundaries;
  TowerSpec spec;
  spec.weights.resize(i_max + 1);
  spec.return_times.resize(i_max + 1);
  spec.weights[0] = 0.5;
  spec.return_times[0] = 1;
  for (std::size_t i = 1; i <= i_max; ++i) {
    spec.weights[i] = a[i - 1] - a[i];
    spec.return_times[i] = i + 1;
  }
  spec.truncation_mass = a[i_max];
  const double kept = 1.0 - spec.truncation_mass;
  for (double& w : spec.weights) w /= kept;
  if (spec.truncation_mass > 0.01) {
    spec.warnings.push_back("truncated mass " +
                            std::to_string(spec.truncation_mass) +
                            " exceeds 1%");
  }
  return spec;
}

std::vector<double> tower_tail(const TowerSpec& spec) {
  validate(spec);
  std::vector<double> tail(spec.height() + 1, 0.0);
  // Branch i contributes to nu(R > j) for j < R_i.
  for (std::size_t i = 0; i < spec.weights.size(); ++i) {
    tail[spec.return_times[i] - 1] += spec.weights[i];
  }
  for (std::size_t j = tail.size() - 1; j-- > 0;) tail[j] += tail[j + 1];
  tail.pop_back();
  return tail;
}

std::vector<double> tower_invariant(const TowerSpec& spec) {
  const double mean = spec.mean_return();
  if (!std::isfinite(mean)) {
    throw std::domain_error("tower_invariant: return time not integrable");
  }
  auto levels = tower_tail(spec);
  for (double& x : levels) x /= mean;
  return levels;
}

TowerPath tower_simulate(const TowerSpec& spec, std::size_t length,
                         std::uint64_t seed) {
  TowerPath path;
  path.seed = seed;
  path.branches.reserve(length);
  path.levels.reserve(length);
  walk_tower(spec, length, seed, [&](std::size_t b, std::size_t l) {
    path.branches.push_back(static_cast<std::uint32_t>(b));
    path.levels.push_back(static_cast<std::uint32_t>(l));
  });
  return path;
}

std::vector<std::uint64_t> tower_occupancy(const TowerSpec& spec,
                                           std::size_t length,
                                           std::uint64_t seed) {
  std::vector<std::uint64_t> counts(spec.height(), 0);
  walk_tower(spec, length, seed,
             [&](std::size_t, std::size_t l) { ++counts[l]; });
  return counts;
}

TowerSpec tower_from_json(const nlohmann::json& j) {
  std::vector<double> w;
  std::vector<std::size_t> r;
  try {
    if (j.contains("gaspard_wang")) {
      const auto& g = j.at("gaspard_wang");
      return gw_tower(g.at("alpha").get<double>(),
                      g.at("i_max").get<std::size_t>());
    }
    for (const auto& b : j.at("branches")) {
      w.push_back(b.at("weight").get<double>());
      r.push_back(b.at("return_time").get<std::size_t>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("tower json: ") + e.what());
  }
  return make_tower(std::move(w), std::move(r));
}

RatioGap ratio_gap(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("ratio_gap: sizes differ or empty");
  }
  RatioGap g;
  double sa = 0.0, sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0) || !(b[i] > 0.0)) {
      throw std::invalid_argument("ratio_gap: entries must be positive");
    }
    sa += a[i];
    sb += b[i];
    g.worst = std::max(g.worst, std::abs(1.0 - a[i] / b[i]));
  }
  g.aggregate = std::abs(1.0 - sa / sb);
  return g;
}

void UlamOperator::push_forward(std::span<const double> v,
                                std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t b = 0; b < bins; ++b) {
    const double mass = v[b];
    if (mass == 0.0) continue;
    for (const auto& [c, p] : rows[b]) out[c] += mass * p;
  }
}

double UlamOperator::entry(std::size_t b, std::size_t c) const {
  for (const auto& [col, p] : rows.at(b)) {
    if (col == c) return p;
  }
  return 0.0;
}

UlamOperator ulam_build(UlamMap map, std::size_t bins, double alpha) {
  if (bins < 2) throw std::invalid_argument("ulam_build: bins must be >= 2");
  if (map == UlamMap::kGaspardWang && !(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("ulam_build: alpha must lie in (0,1)");
  }
  UlamOperator op;
  op.map = map;
  op.alpha = alpha;
  op.bins = bins;
  op.rows.assign(bins, {});
  const auto B = static_cast<double>(bins);

  // Both maps have two increasing branches onto [0, 1]; the right one is
  // 2x - 1 in both cases. preimage[c] is the branch inverse of c / B.
  std::vector<double> left(bins + 1), right(bins + 1);
  for (std::size_t c = 0; c <= bins; ++c) {
    const double y = static_cast<double>(c) / B;
    right[c] = 0.5 * (y + 1.0);
    if (map == UlamMap::kDoubling || c == 0 || c == bins) {
      left[c] = 0.5 * y;
    } else {
      left[c] = gw_left_inverse(y, alpha, 0.0, 0.5);
    }
  }
  for (const auto* pre : {&left, &right}) {
    for (std::size_t c = 0; c < bins; ++c) {
      const double x0 = (*pre)[c], x1 = (*pre)[c + 1];
      auto b = static_cast<std::size_t>(std::floor(x0 * B));
      for (; b < bins && static_cast<double>(b) / B < x1; ++b) {
        const double lo = std::max(x0, static_cast<double>(b) / B);
        const double hi = std::min(x1, static_cast<double>(b + 1) / B);
        if (hi > lo) {
          op.rows[b].emplace_back(static_cast<std::uint32_t>(c),
                                  (hi - lo) * B);
        }
      }
    }
  }
  return op;
}

std::vector<double> ulam_stationary(const UlamOperator& op) {
  std::vector<double> v(op.bins, 1.0 / static_cast<double>(op.bins));
  std::vector<double> next(op.bins);
  for (std::size_t it = 0; it < 100000; ++it) {
    op.push_forward(v, next);
    const double total = std::accumulate(next.begin(), next.end(), 0.0);
    double change = 0.0;
    for (std::size_t b = 0; b < op.bins; ++b) {
      next[b] /= total;
      change += std::abs(next[b] - v[b]);
    }
    v.swap(next);
    if (change < 1e-12) return v;
  }
  throw std::runtime_error("ulam_stationary: no convergence in 10^5 steps");
}

std::vector<double> ulam_decay(const UlamOperator& op,
                               std::span<const double> initial,
                               std::size_t k_max) {
  if (initial.size() != op.bins) {
    throw std::invalid_argument("ulam_decay: initial has the wrong size");
  }
  double total = 0.0;
  for (double x : initial) {
    if (!(x >= 0.0)) throw std::invalid_argument("ulam_decay: negative mass");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw std::invalid_argument("ulam_decay: initial must sum to 1");
  }
  const auto h = ulam_stationary(op);
  std::vector<double> v(initial.begin(), initial.end()), next(op.bins);
  std::vector<double> p;
  p.reserve(k_max + 1);
  for (std::size_t k = 0; k <= k_max; ++k) {
    double d = 0.0;
    for (std::size_t b = 0; b < op.bins; ++b) d += std::abs(v[b] - h[b]);
    p.push_back(d);
    if (k < k_max) {
      op.push_forward(v, next);
      v.swap(next);
    }
  }
  return p;
}

std::vector<double> smoothed_point_mass(std::size_t bins, double x,
                                        std::size_t half_width) {
  if (bins < 1 || !(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("smoothed_point_mass: bad arguments");
  }
  std::vector<double> v(bins, 0.0);
  const auto centre = std::min<std::size_t>(
      bins - 1, static_cast<std::size_t>(x * static_cast<double>(bins)));
  const auto hw = static_cast<long>(half_width);
  double total = 0.0;
  for (long d = -hw; d <= hw; ++d) {
    const long b = static_cast<long>(centre) + d;
    if (b < 0 || b >= static_cast<long>(bins)) continue;
    const double w = static_cast<double>(hw + 1 - std::labs(d));
    v[static_cast<std::size_t>(b)] = w;
    total += w;
  }
  for (double& y : v) y /= total;
  return v;
}

}  // namespace rtlab
