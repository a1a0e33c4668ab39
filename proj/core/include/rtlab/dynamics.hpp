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

#ifndef RTLAB_DYNAMICS_HPP_
#define RTLAB_DYNAMICS_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "rtlab/rng.hpp"

namespace rtlab {

using Symbol = std::uint32_t;
using Matrix = std::vector<std::vector<double>>;

// Itinerary of an orbit against a partition: symbols[j] is the index of the
// partition element containing T^j(x).
struct SymbolStream {
  std::vector<Symbol> symbols;
  std::uint64_t seed = 0;

  std::size_t size() const { return symbols.size(); }
  Symbol operator[](std::size_t j) const { return symbols[j]; }
};

// Stationary vector of an irreducible row-stochastic matrix. Throws
// std::domain_error if the chain is reducible.
std::vector<double> stationary_distribution(const Matrix& chain);

// Subshift of finite type together with the stationary Markov chain used to
// sample it. Construct through `create`, which validates every invariant.
class SftSystem {
 public:
  static SftSystem create(std::vector<std::vector<int>> transition,
                          Matrix chain);

  std::size_t alphabet_size() const { return transition_.size(); }
  bool allowed(Symbol a, Symbol b) const { return transition_[a][b] != 0; }
  const std::vector<std::vector<int>>& transition() const {
    return transition_;
  }
  const Matrix& chain() const { return chain_; }
  const std::vector<double>& stationary() const { return stationary_; }

 private:
  SftSystem() = default;
  std::vector<std::vector<int>> transition_;
  Matrix chain_;
  std::vector<double> stationary_;
};

// Symbol sources: a stationary process law that can also be restarted from
// any admissible state. Used by the streaming samplers in counting.hpp.

// Lebesgue measure for 2x mod 1 seen through the partition {[0,1/2),[1/2,1)}:
// i.i.d. fair bits.
class DoublingSource {
 public:
  std::size_t alphabet_size() const { return 2; }
  Symbol first(Rng& rng) const { return rng.bit(); }
  Symbol next(Symbol /*prev*/, Rng& rng) const { return rng.bit(); }
};

class MarkovSource {
 public:
  explicit MarkovSource(const SftSystem& system);
  MarkovSource(const Matrix& chain, const std::vector<double>& stationary);

  std::size_t alphabet_size() const { return cumulative_.size(); }
  Symbol first(Rng& rng) const { return draw(initial_, rng); }
  Symbol next(Symbol prev, Rng& rng) const {
    return draw(cumulative_[prev], rng);
  }

 private:
  static Symbol draw(const std::vector<double>& cdf, Rng& rng);
  std::vector<double> initial_;
  std::vector<std::vector<double>> cumulative_;
};

SymbolStream doubling_stream(std::size_t length, std::uint64_t seed);
SymbolStream sft_stream(const SftSystem& system, std::size_t length,
                        std::uint64_t seed);

// Gaspard-Wang intermittent map.
double gw_step(double x, double alpha);

// Partition ladder a_0 = 1/2 > a_1 > ... > a_{i_max} with T(a_i) = a_{i-1}.
// A_0 = (1/2, 1] and A_i = (a_i, a_{i-1}]. Built by gw_ladder (tower.hpp).
struct GwSystem {
  double alpha = 0.5;
  std::vector<double> boundaries;

  std::size_t depth() const { return boundaries.size() - 1; }
};

// Index of the partition element containing x. Throws std::out_of_range if
// x <= a_{i_max} (the ladder is too shallow) and std::invalid_argument if x
// is outside (0, 1].
Symbol gw_classify(double x, const GwSystem& system);

SymbolStream gw_itinerary(double x0, std::size_t length,
                          const GwSystem& system);

// Itinerary from a uniformly random starting point in (0, 1].
SymbolStream gw_random_itinerary(std::size_t length, std::uint64_t seed,
                                 const GwSystem& system);

}  // namespace rtlab

#endif  // RTLAB_DYNAMICS_HPP_
