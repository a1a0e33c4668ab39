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

#ifndef RTLAB_CYLINDERS_HPP_
#define RTLAB_CYLINDERS_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rtlab/dynamics.hpp"

namespace rtlab {

// Names the n-cylinder {x : x_0 = s_0, ..., x_{n-1} = s_{n-1}}.
struct Word {
  std::vector<Symbol> symbols;

  Word() = default;
  explicit Word(std::vector<Symbol> s) : symbols(std::move(s)) {}

  std::size_t size() const { return symbols.size(); }
  Symbol operator[](std::size_t i) const { return symbols[i]; }
  bool operator==(const Word&) const = default;
};

// "0101" for alphabets of at most 10 symbols, "12-0-3" otherwise.
std::string to_string(const Word& word, std::size_t alphabet_size);
Word parse_word(std::string_view text);

// Which symbol pairs may follow each other.
class Admissibility {
 public:
  static Admissibility full_shift(std::size_t alphabet_size);
  static Admissibility from_transition(
      const std::vector<std::vector<int>>& transition);

  std::size_t alphabet_size() const { return size_; }
  bool allowed(Symbol a, Symbol b) const { return allowed_[a * size_ + b]; }
  bool is_full_shift() const { return full_; }
  bool admissible(const Word& word) const;

 private:
  std::size_t size_ = 0;
  bool full_ = true;
  std::vector<bool> allowed_;
};

// Smallest j >= 1 with A n T^{-j} A nonempty. Throws std::invalid_argument
// for empty or inadmissible words and std::domain_error if A never returns.
std::size_t recurrence_time(const Word& word, const Admissibility& rules);

// A^{(w)}: the cylinder fixed by the last w symbols of the word.
Word outer_cylinder(const Word& word, std::size_t w);

struct BernoulliProduct {
  std::vector<double> weights;
};

struct MarkovChain {
  Matrix chain;
  std::vector<double> stationary;
};

struct Empirical {
  std::shared_ptr<const SymbolStream> reference;
  std::size_t alphabet_size = 2;
};

using MeasureModel = std::variant<BernoulliProduct, MarkovChain, Empirical>;

MeasureModel fair_coin();
MeasureModel markov_model(const Matrix& chain);
MeasureModel markov_model(const SftSystem& system);

// Throws std::invalid_argument when weights or stationary vectors are not
// probability vectors (tolerance 1e-12).
void validate(const MeasureModel& model);

std::size_t alphabet_size(const MeasureModel& model);
Admissibility admissibility_of(const MeasureModel& model);

// mu(A). Probability-zero Markov paths give 0. Empirical models return the
// sliding-window frequency in the reference stream.
double measure(const Word& word, const MeasureModel& model);

// mu(A n T^{-shift} B) for exact models (product or Markov).
double joint_measure(const Word& a, const Word& b, std::size_t shift,
                     const MeasureModel& model);

struct TestCylinder {
  Word word;
  double mu = 0.0;
  std::size_t recurrence = 0;
};

// Samples distinct admissible n-words from the model with r_A > constraint.
// Throws std::runtime_error once more than 99.9% of at least 1000 draws have
// been rejected.
std::vector<TestCylinder> select_test_cylinders(std::size_t n,
                                                std::size_t how_many,
                                                std::size_t constraint,
                                                const MeasureModel& model,
                                                std::uint64_t seed);

}  // namespace rtlab

#endif  // RTLAB_CYLINDERS_HPP_
