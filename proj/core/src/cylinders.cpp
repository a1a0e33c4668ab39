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

#include "rtlab/cylinders.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

namespace rtlab {

std::string to_string(const Word& word, std::size_t alphabet_size) {
  std::string out;
  const bool separated = alphabet_size > 10;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (separated && i > 0) out.push_back('-');
    out += std::to_string(word[i]);
  }
  return out;
}

Word parse_word(std::string_view text) {
  Word word;
  if (text.empty()) throw std::invalid_argument("parse_word: empty text");
  const bool separated = text.find('-') != std::string_view::npos;
  if (!separated) {
    for (char c : text) {
      if (c < '0' || c > '9') {
        throw std::invalid_argument("parse_word: unexpected character");
      }
      word.symbols.push_back(static_cast<Symbol>(c - '0'));
    }
    return word;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find('-', start), text.size());
    const auto token = text.substr(start, end - start);
    if (token.empty()) throw std::invalid_argument("parse_word: empty token");
    Symbol value = 0;
    for (char c : token) {
      if (c < '0' || c > '9') {
        throw std::invalid_argument("parse_word: unexpected character");
      }
      value = value * 10 + static_cast<Symbol>(c - '0');
    }
    word.symbols.push_back(value);
    start = end + 1;
  }
  return word;
}

Admissibility Admissibility::full_shift(std::size_t alphabet_size) {
  Admissibility a;
  a.size_ = alphabet_size;
  a.full_ = true;
  a.allowed_.assign(alphabet_size * alphabet_size, true);
  return a;
}

Admissibility Admissibility::from_transition(
    const std::vector<std::vector<int>>& transition) {
  Admissibility a;
  a.size_ = transition.size();
  a.allowed_.assign(a.size_ * a.size_, false);
  a.full_ = true;
  for (std::size_t i = 0; i < a.size_; ++i) {
    for (std::size_t j = 0; j < a.size_; ++j) {
      const bool ok = transition[i].at(j) != 0;
      a.allowed_[i * a.size_ + j] = ok;
      a.full_ = a.full_ && ok;
    }
  }
  return a;
}

bool Admissibility::admissible(const Word& word) const {
  for (Symbol s : word.symbols) {
    if (s >= size_) return false;
  }
  for (std::size_t i = 0; i + 1 < word.size(); ++i) {
    if (!allowed(word[i], word[i + 1])) return false;
  }
  return true;
}

std::size_t recurrence_time(const Word& word, const Admissibility& rules) {
  const std::size_t n = word.size();
  if (n == 0) throw std::invalid_argument("recurrence_time: empty word");
  if (!rules.admissible(word)) {
    throw std::invalid_argument("recurrence_time: inadmissible word");
  }
  // Shifts below n: the word must agree with itself on the overlap. The
  // merged word then only contains pairs already present in the word.
  for (std::size_t j = 1; j < n; ++j) {
    bool overlap = true;
    for (std::size_t i = 0; i + j < n && overlap; ++i) {
      overlap = word[i + j] == word[i];
    }
    if (overlap) return j;
  }
  // Shifts j >= n: a path with j - n + 1 transitions from the last symbol
  // back to the first.
  const std::size_t m = rules.alphabet_size();
  std::vector<bool> reach(m, false);
  reach[word[n - 1]] = true;
  std::set<std::vector<bool>> seen;
  for (std::size_t steps = 1;; ++steps) {
    std::vector<bool> next(m, false);
    for (std::size_t a = 0; a < m; ++a) {
      if (!reach[a]) continue;
      for (std::size_t b = 0; b < m; ++b) {
        if (rules.allowed(static_cast<Symbol>(a), static_cast<Symbol>(b))) {
          next[b] = true;
        }
      }
    }
    if (next[word[0]]) return n + steps - 1;
    if (!seen.insert(next).second) {
      throw std::domain_error(
          "recurrence_time: the cylinder never returns (non-communicating "
          "classes)");
    }
    reach = std::move(next);
  }
}

Word outer_cylinder(const Word& word, std::size_t w) {
  if (w < 1 || w > word.size()) {
    throw std::invalid_argument("outer_cylinder: need 1 <= w <= n");
  }
  return Word(std::vector<Symbol>(word.symbols.end() - static_cast<long>(w),
                                  word.symbols.end()));
}

MeasureModel fair_coin() { return BernoulliProduct{{0.5, 0.5}}; }

MeasureModel markov_model(const Matrix& chain) {
  return MarkovChain{chain, stationary_distribution(chain)};
}

MeasureModel markov_model(const SftSystem& system) {
  return MarkovChain{system.chain(), system.stationary()};
}

namespace {

void require_probability_vector(const std::vector<double>& p,
                                const char* what) {
  if (p.empty()) throw std::invalid_argument(std::string(what) + ": empty");
  double total = 0.0;
  for (double v : p) {
    if (!(v >= 0.0)) {
      throw std::invalid_argument(std::string(what) + ": negative entry");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument(std::string(what) + ": does not sum to 1");
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_symbols(const Word& word, std::size_t m) {
  for (Symbol s : word.symbols) {
    if (s >= m) throw std::invalid_argument("measure: symbol out of range");
  }
}

double markov_path(const Word& word, const MarkovChain& mc) {
  double p = mc.stationary[word[0]];
  for (std::size_t i = 0; i + 1 < word.size() && p > 0.0; ++i) {
    p *= mc.chain[word[i]][word[i + 1]];
  }
  return p;
}

// Row `from` of P^steps.
std::vector<double> chain_power_row(const Matrix& chain, Symbol from,
                                    std::size_t steps) {
  const std::size_t m = chain.size();
  std::vector<double> row(m, 0.0), next(m);
  row[from] = 1.0;
  for (std::size_t s = 0; s < steps; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      if (row[a] == 0.0) continue;
      for (std::size_t b = 0; b < m; ++b) next[b] += row[a] * chain[a][b];
    }
    row.swap(next);
  }
  return row;
}

}  // namespace

void validate(const MeasureModel& model) {
  std::visit(Overloaded{
                 [](const BernoulliProduct& b) {
                   require_probability_vector(b.weights, "BernoulliProduct");
                 },
                 [](const MarkovChain& mc) {
                   require_probability_vector(mc.stationary,
                                              "MarkovChain stationary");
                   for (const auto& row : mc.chain) {
                     require_probability_vector(row, "MarkovChain row");
                   }
                 },
                 [](const Empirical& e) {
                   if (!e.reference || e.reference->size() == 0) {
                     throw std::invalid_argument("Empirical: no reference");
                   }
                 },
             },
             model);
}

std::size_t alphabet_size(const MeasureModel& model) {
  return std::visit(
      Overloaded{
          [](const BernoulliProduct& b) { return b.weights.size(); },
          [](const MarkovChain& mc) { return mc.stationary.size(); },
          [](const Empirical& e) { return e.alphabet_size; },
      },
      model);
}

Admissibility admissibility_of(const MeasureModel& model) {
  if (const auto* mc = std::get_if<MarkovChain>(&model)) {
    std::vector<std::vector<int>> t(mc->chain.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (double p : mc->chain[i]) t[i].push_back(p > 0.0 ? 1 : 0);
    }
    return Admissibility::from_transition(t);
  }
  return Admissibility::full_shift(alphabet_size(model));
}

double measure(const Word& word, const MeasureModel& model) {
  if (word.size() == 0) throw std::invalid_argument("measure: empty word");
  check_symbols(word, alphabet_size(model));
  return std::visit(
      Overloaded{
          [&](const BernoulliProduct& b) {
            double p = 1.0;
            for (Symbol s : word.symbols) p *= b.weights[s];
            return p;
          },
          [&](const MarkovChain& mc) { return markov_path(word, mc); },
          [&](const Empirical& e) {
            const auto& ref = e.reference->symbols;
            const std::size_t n = word.size();
            if (ref.size() < n) return 0.0;
            std::size_t hits = 0;
            for (std::size_t j = 0; j + n <= ref.size(); ++j) {
              if (std::equal(word.symbols.begin(), word.symbols.end(),
                             ref.begin() + static_cast<long>(j))) {
                ++hits;
              }
            }
            return static_cast<double>(hits) /
                   static_cast<double>(ref.size() - n + 1);
          },
      },
      model);
}

double joint_measure(const Word& a, const Word& b, std::size_t shift,
                     const MeasureModel& model) {
  if (std::holds_alternative<Empirical>(model)) {
    throw std::invalid_argument("joint_measure: exact models only");
  }
  if (a.size() == 0 || b.size() == 0) {
    throw std::invalid_argument("joint_measure: empty word");
  }
  if (shift < a.size()) {
    // Overlapping or adjacent placement: merge into a single word.
    std::vector<Symbol> merged = a.symbols;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::size_t pos = shift + i;
      if (pos < merged.size()) {
        if (merged[pos] != b[i]) return 0.0;
      } else {
        merged.push_back(b[i]);
      }
    }
    return measure(Word(std::move(merged)), model);
  }
  const double mu_a = measure(a, model);
  const double mu_b = measure(b, model);
  if (std::holds_alternative<BernoulliProduct>(model) || mu_a == 0.0 ||
      mu_b == 0.0) {
    return mu_a * mu_b;
  }
  const auto& mc = std::get<MarkovChain>(model);
  const std::size_t steps = shift - a.size() + 1;
  const auto row = chain_power_row(mc.chain, a[a.size() - 1], steps);
  return mu_a * row[b[0]] * mu_b / mc.stationary[b[0]];
}

std::vector<TestCylinder> select_test_cylinders(std::size_t n,
                                                std::size_t how_many,
                                                std::size_t constraint,
                                                const MeasureModel& model,
                                                std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("select_test_cylinders: n < 2");
  validate(model);
  const Admissibility rules = admissibility_of(model);
  Rng rng(seed);

  // Product measures sample as a chain whose rows all equal the weights.
  std::optional<MarkovSource> source;
  if (const auto* b = std::get_if<BernoulliProduct>(&model)) {
    source.emplace(Matrix(b->weights.size(), b->weights), b->weights);
  } else if (const auto* mc = std::get_if<MarkovChain>(&model)) {
    source.emplace(mc->chain, mc->stationary);
  }

  auto sample_word = [&]() -> Word {
    std::vector<Symbol> s(n);
    if (source) {
      s[0] = source->first(rng);
      for (std::size_t i = 1; i < n; ++i) s[i] = source->next(s[i - 1], rng);
      return Word(std::move(s));
    }
    const auto& ref = std::get<Empirical>(model).reference->symbols;
    if (ref.size() < n) {
      throw std::invalid_argument(
          "select_test_cylinders: reference shorter than n");
    }
    const auto start = rng.below(ref.size() - n + 1);
    std::copy_n(ref.begin() + static_cast<long>(start), n, s.begin());
    return Word(std::move(s));
  };

  std::vector<TestCylinder> out;
  std::set<std::vector<Symbol>> taken;
  std::size_t attempts = 0, rejected = 0;
  while (out.size() < how_many) {
    ++attempts;
    Word w = sample_word();
    bool accept = rules.admissible(w) && !taken.count(w.symbols);
    double mu = 0.0;
    std::size_t r = 0;
    if (accept) {
      mu = measure(w, model);
      accept = mu > 0.0;
    }
    if (accept) {
      r = recurrence_time(w, rules);
      accept = r > constraint;
    }
    if (accept) {
      taken.insert(w.symbols);
      out.push_back({std::move(w), mu, r});
    } else {
      ++rejected;
      if (attempts >= 1000 &&
          static_cast<double>(rejected) > 0.999 * static_cast<double>(attempts)) {
        throw std::runtime_error(
            "select_test_cylinders: rejection rate above 99.9%; constraint "
            "unsatisfiable at this n");
      }
    }
  }
  return out;
}

}  // namespace rtlab
