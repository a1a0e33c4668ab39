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

#ifndef RTLAB_COUNTING_HPP_
#define RTLAB_COUNTING_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rtlab/cylinders.hpp"
#include "rtlab/dynamics.hpp"
#include "rtlab/rng.hpp"

namespace rtlab {

// Times j in [1, m] at which T^j x lies in the cylinder.
struct VisitRecord {
  Word word;
  std::size_t m = 0;
  std::vector<std::size_t> hit_times;

  std::size_t w_m() const { return hit_times.size(); }
};

// Throws std::invalid_argument if stream.size() < m + word.size().
VisitRecord count_visits(const SymbolStream& stream, const Word& word,
                         std::size_t m);

struct ReturnTimes {
  std::vector<std::size_t> times;  // tau^1 < tau^2 < ...
  bool truncated = false;          // fewer than k_max hits were found
};

// First k_max hit times j >= 1 in the stream. With start_in_A the stream must
// begin with the word (std::invalid_argument otherwise), which makes the
// times samples of the return law.
ReturnTimes return_times(const SymbolStream& stream, const Word& word,
                         std::size_t k_max, bool start_in_A);

// Knuth-Morris-Pratt automaton over a finite alphabet. Reports every
// occurrence, overlapping ones included.
class WordMatcher {
 public:
  WordMatcher(const Word& word, std::size_t alphabet_size);

  std::size_t length() const { return length_; }
  std::size_t start_state() const { return 0; }
  // State after reading the whole word from the start state.
  std::size_t full_state() const { return full_state_; }

  // Feeds one symbol; returns the new state. A state equal to length()
  // means an occurrence ends at this symbol.
  std::size_t step(std::size_t state, Symbol s) const {
    return table_[state * alphabet_ + s];
  }
  bool accepting(std::size_t state) const { return state == length_; }

 private:
  std::size_t length_;
  std::size_t alphabet_;
  std::size_t full_state_ = 0;
  std::vector<std::size_t> table_;
};

// Return-time samples from independent blocks: block b runs on the seed
// derive_seed(seed, b). With start_in_A the block opens with the word itself
// and continues from the source's transition law (exact P_A for product and
// Markov sources); otherwise it opens from the stationary law.
struct ReturnHarvest {
  // tau[k-1][s] is the k-th hit time of the s-th retained block.
  std::vector<std::vector<std::uint64_t>> tau;
  // Blocks abandoned because the k_max-th hit did not occur within
  // max_length steps.
  std::size_t truncated = 0;
};

template <class Source>
ReturnHarvest harvest_return_times(const Source& source, const Word& word,
                                   std::size_t k_max, std::size_t blocks,
                                   std::uint64_t seed, bool start_in_A,
                                   std::uint64_t max_length = 0);

// W_m over independent blocks of length m + n.
template <class Source>
std::vector<std::uint64_t> harvest_counts(const Source& source,
                                          const Word& word, std::size_t m,
                                          std::size_t blocks,
                                          std::uint64_t seed,
                                          bool start_in_A = false);

// Exact P(tau_A <= l) for l = 0..t_max under a product or Markov model,
// from the stationary start or, with start_in_A, the start inside A.
// Dynamic programming over (automaton state, last symbol).
std::vector<double> exact_first_hit_cdf(const Word& word,
                                        const MeasureModel& model,
                                        std::size_t t_max, bool start_in_A);

enum class LawKind { kCount, kRescaledReturn };

struct EmpiricalLaw {
  std::vector<double> samples;
  LawKind kind = LawKind::kRescaledReturn;
};

// Throws std::invalid_argument if empty or if a sample is negative or not
// finite; counts must also be integers.
void validate(const EmpiricalLaw& law);

EmpiricalLaw rescaled_law(std::span<const std::uint64_t> times, double mu);
EmpiricalLaw count_law(std::span<const std::uint64_t> counts);

// 30 log-spaced points in [0.05, 5].
std::vector<double> default_t_grid();

// Fraction of samples strictly above each t.
std::vector<double> survival_curve(const EmpiricalLaw& law,
                                   std::span<const double> t_grid);

// Largest |empirical survival - target| over the grid.
double grid_deviation(const EmpiricalLaw& law, std::span<const double> t_grid,
                      const std::function<double(double)>& target);

// (1/2) sum_k |empirical pmf(k) - Poisson(t) pmf(k)|.
double tv_distance(const EmpiricalLaw& law, double t);

// sup_x |empirical survival(x) - target(x)|, checked on both sides of every
// jump. The default target is e^{-x}.
double ks_distance(const EmpiricalLaw& law,
                   const std::function<double(double)>& target = {});
// Two-sample form; a law against itself gives 0.
double ks_distance(const EmpiricalLaw& a, const EmpiricalLaw& b);

struct GapSplit {
  std::size_t w_minus = 0;  // hits in [1, i-delta-1]
  std::size_t u_minus = 0;  // hits in [i-delta, i-1]
  std::size_t u_plus = 0;   // hits in [i+1, i+delta]
  std::size_t w_plus = 0;   // hits in [i+delta+1, m]
};

// Throws std::invalid_argument unless 1 <= i <= record.m.
GapSplit gap_split(const VisitRecord& record, std::size_t i,
                   std::size_t delta);

// Hits with another hit at most delta steps before (preceded) or after
// (followed). Only hits in [delta+1, m-delta] are inspected so that both
// neighbourhoods lie inside the window.
struct NeighbourCounts {
  std::size_t inspected = 0;
  std::size_t preceded = 0;
  std::size_t followed = 0;
};
NeighbourCounts neighbour_counts(const VisitRecord& record, std::size_t delta);

struct LawMetadata {
  std::string word;
  std::size_t n = 0;
  double mu_A = 0.0;
  std::size_t r_A = 0;
  std::uint64_t seed = 0;
  std::size_t m = 0;
};

// One "# key=value" line per metadata field, a "sample" header, then one
// sample per row at 17 significant digits.
void write_law_csv(std::ostream& out, const EmpiricalLaw& law,
                   const LawMetadata& meta);
EmpiricalLaw read_law_csv(std::istream& in, LawMetadata* meta = nullptr);

// ---------------------------------------------------------------------------

template <class Source>
ReturnHarvest harvest_return_times(const Source& source, const Word& word,
                                   std::size_t k_max, std::size_t blocks,
                                   std::uint64_t seed, bool start_in_A,
                                   std::uint64_t max_length) {
  if (k_max == 0) throw std::invalid_argument("harvest: k_max == 0");
  const WordMatcher matcher(word, source.alphabet_size());
  const std::uint64_t n = word.size();
  ReturnHarvest out;
  out.tau.assign(k_max, {});
  for (auto& v : out.tau) v.reserve(blocks);
  std::vector<std::uint64_t> hits(k_max);
  for (std::size_t b = 0; b < blocks; ++b) {
    Rng rng(derive_seed(seed, b));
    std::size_t state = 0;
    Symbol prev = 0;
    // `pos` is the index of the symbol just read.
    std::uint64_t pos = 0;
    if (start_in_A) {
      state = matcher.full_state();
      prev = word[word.size() - 1];
      pos = n - 1;
    } else {
      prev = source.first(rng);
      state = matcher.step(0, prev);
    }
    std::size_t found = 0;
    const std::uint64_t limit =
        max_length == 0 ? ~std::uint64_t{0} : max_length + n - 1;
    while (found < k_max && pos < limit) {
      prev = source.next(prev, rng);
      ++pos;
      state = matcher.step(state, prev);
      // An occurrence ending at pos starts at pos - n + 1 >= 1.
      if (matcher.accepting(state) && pos >= n) hits[found++] = pos - n + 1;
    }
    if (found < k_max) {
      ++out.truncated;
      continue;
    }
    for (std::size_t k = 0; k < k_max; ++k) out.tau[k].push_back(hits[k]);
  }
  return out;
}

template <class Source>
std::vector<std::uint64_t> harvest_counts(const Source& source,
                                          const Word& word, std::size_t m,
                                          std::size_t blocks,
                                          std::uint64_t seed,
                                          bool start_in_A) {
  const WordMatcher matcher(word, source.alphabet_size());
  const std::uint64_t n = word.size();
  std::vector<std::uint64_t> out;
  out.reserve(blocks);
  const std::uint64_t last = m + n - 1;  // index of the final symbol read
  for (std::size_t b = 0; b < blocks; ++b) {
    Rng rng(derive_seed(seed, b));
    std::size_t state = 0;
    Symbol prev = 0;
    std::uint64_t pos = 0;
    if (start_in_A) {
      state = matcher.full_state();
      prev = word[word.size() - 1];
      pos = n - 1;
    } else {
      prev = source.first(rng);
      state = matcher.step(0, prev);
    }
    std::uint64_t count = 0;
    while (pos < last) {
      prev = source.next(prev, rng);
      ++pos;
      state = matcher.step(state, prev);
      if (matcher.accepting(state) && pos >= n) ++count;
    }
    out.push_back(count);
  }
  return out;
}

}  // namespace rtlab

#endif  // RTLAB_COUNTING_HPP_
