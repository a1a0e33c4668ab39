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

#include "rtlab/dynamics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rtlab {

namespace {

void require_square(const Matrix& m, const char* what) {
  if (m.empty()) throw std::invalid_argument(std::string(what) + ": empty");
  for (const auto& row : m) {
    if (row.size() != m.size()) {
      throw std::invalid_argument(std::string(what) + ": not square");
    }
  }
}

// Every state reaches every other state along positive entries.
bool irreducible(const Matrix& chain) {
  const std::size_t n = chain.size();
  auto reach_all = [&](bool transpose) {
    std::vector<bool> seen(n, false);
    std::vector<std::size_t> todo{0};
    seen[0] = true;
    while (!todo.empty()) {
      const std::size_t a = todo.back();
      todo.pop_back();
      for (std::size_t b = 0; b < n; ++b) {
        const double p = transpose ? chain[b][a] : chain[a][b];
        if (p > 0.0 && !seen[b]) {
          seen[b] = true;
          todo.push_back(b);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
  };
  return reach_all(false) && reach_all(true);
}

}  // namespace

std::vector<double> stationary_distribution(const Matrix& chain) {
  require_square(chain, "stationary_distribution");
  if (!irreducible(chain)) {
    throw std::domain_error(
        "stationary_distribution: chain is reducible, no unique stationary "
        "vector");
  }
  const auto n = static_cast<Eigen::Index>(chain.size());
  // pi (P - I) = 0 with sum(pi) = 1: replace the last equation by the
  // normalisation.
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = chain[j][i] - (i == j ? 1.0 : 0.0);
    }
  }
  a.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;
  const Eigen::VectorXd pi = a.fullPivLu().solve(rhs);
  std::vector<double> out(pi.data(), pi.data() + n);
  for (double& p : out) p = std::max(p, 0.0);
  double total = 0.0;
  for (double p : out) total += p;
  for (double& p : out) p /= total;
  return out;
}

SftSystem SftSystem::create(std::vector<std::vector<int>> transition,
                            Matrix chain) {
  require_square(chain, "SftSystem chain");
  if (transition.size() != chain.size()) {
    throw std::invalid_argument("SftSystem: transition/chain size mismatch");
  }
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (transition[i].size() != chain.size()) {
      throw std::invalid_argument("SftSystem: transition not square");
    }
    double row = 0.0;
    for (std::size_t j = 0; j < chain.size(); ++j) {
      const int m = transition[i][j];
      if (m != 0 && m != 1) {
        throw std::invalid_argument("SftSystem: transition entries in {0,1}");
      }
      const double p = chain[i][j];
      if (!(p >= 0.0)) {
        throw std::invalid_argument("SftSystem: negative chain entry");
      }
      if (p > 0.0 && m == 0) {
        throw std::invalid_argument(
            "SftSystem: chain moves along a forbidden transition");
      }
      row += p;
    }
    if (std::abs(row - 1.0) > 1e-12) {
      throw std::invalid_argument("SftSystem: chain row does not sum to 1");
    }
  }
  SftSystem sys;
  sys.stationary_ = stationary_distribution(chain);
  for (std::size_t j = 0; j < chain.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      s += sys.stationary_[i] * chain[i][j];
    }
    if (std::abs(s - sys.stationary_[j]) > 1e-12) {
      throw std::domain_error("SftSystem: stationary vector not fixed");
    }
  }
  sys.transition_ = std::move(transition);
  sys.chain_ = std::move(chain);
  return sys;
}

namespace {

std::vector<double> to_cdf(const std::vector<double>& p) {
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf[i] = acc;
  }
  // Guard against rounding so that the last positive state absorbs u ~ 1.
  for (std::size_t i = p.size(); i-- > 0;) {
    if (p[i] > 0.0) {
      for (std::size_t j = i; j < p.size(); ++j) cdf[j] = 1.0;
      break;
    }
  }
  return cdf;
}

}  // namespace

MarkovSource::MarkovSource(const SftSystem& system)
    : MarkovSource(system.chain(), system.stationary()) {}

MarkovSource::MarkovSource(const Matrix& chain,
                           const std::vector<double>& stationary)
    : initial_(to_cdf(stationary)) {
  cumulative_.reserve(chain.size());
  for (const auto& row : chain) cumulative_.push_back(to_cdf(row));
}

Symbol MarkovSource::draw(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return static_cast<Symbol>(std::min<std::ptrdiff_t>(
      it - cdf.begin(), static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

SymbolStream doubling_stream(std::size_t length, std::uint64_t seed) {
  if (length == 0) throw std::invalid_argument("doubling_stream: length 0");
  SymbolStream out;
  out.seed = seed;
  out.symbols.resize(length);
  Rng rng(seed);
  for (auto& s : out.symbols) s = rng.bit();
  return out;
}

SymbolStream sft_stream(const SftSystem& system, std::size_t length,
                        std::uint64_t seed) {
  if (length == 0) throw std::invalid_argument("sft_stream: length 0");
  const MarkovSource source(system);
  SymbolStream out;
  out.seed = seed;
  out.symbols.resize(length);
  Rng rng(seed);
  out.symbols[0] = source.first(rng);
  for (std::size_t j = 1; j < length; ++j) {
    out.symbols[j] = source.next(out.symbols[j - 1], rng);
  }
  return out;
}

double gw_step(double x, double alpha) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("gw_step: x outside [0,1]");
  }
  if (x <= 0.5) {
    // 2^a x^(1+a) written as x (2x)^a, exact at both ends of the branch.
    return std::min(1.0, x + x * std::pow(2.0 * x, alpha));
  }
  return 2.0 * x - 1.0;
}

Symbol gw_classify(double x, const GwSystem& system) {
  if (!(x > 0.0 && x <= 1.0)) {
    throw std::invalid_argument("gw_classify: x outside (0,1]");
  }
  if (x > 0.5) return 0;
  const auto& a = system.boundaries;
  if (x <= a.back()) {
    throw std::out_of_range(
        "gw_classify: point below the deepest ladder boundary; precompute a "
        "deeper ladder");
  }
  // First index i with a_i < x; a is strictly decreasing.
  const auto it = std::upper_bound(a.begin(), a.end(), x,
                                   [](double v, double ai) { return ai < v; });
  return static_cast<Symbol>(it - a.begin());
}

SymbolStream gw_itinerary(double x0, std::size_t length,
                          const GwSystem& system) {
  if (!(x0 > 0.0 && x0 <= 1.0)) {
    throw std::invalid_argument("gw_itinerary: x0 outside (0,1]");
  }
  SymbolStream out;
  out.symbols.reserve(length);
  double x = x0;
  for (std::size_t j = 0; j < length; ++j) {
    out.symbols.push_back(gw_classify(x, system));
    x = gw_step(x, system.alpha);
  }
  return out;
}

SymbolStream gw_random_itinerary(std::size_t length, std::uint64_t seed,
                                 const GwSystem& system) {
  Rng rng(seed);
  auto out = gw_itinerary(rng.uniform_open_left(), length, system);
  out.seed = seed;
  return out;
}

}  // namespace rtlab
