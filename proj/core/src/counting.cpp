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

#include "rtlab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rtlab/stein.hpp"

namespace rtlab {

namespace {

bool matches_at(const SymbolStream& stream, const Word& word, std::size_t j) {
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (stream[j + i] != word[i]) return false;
  }
  return true;
}

std::size_t alphabet_bound(const Word& word) {
  Symbol top = 0;
  for (Symbol s : word.symbols) top = std::max(top, s);
  return static_cast<std::size_t>(top) + 1;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

VisitRecord count_visits(const SymbolStream& stream, const Word& word,
                         std::size_t m) {
  if (word.size() == 0) throw std::invalid_argument("count_visits: empty word");
  if (stream.size() < m + word.size()) {
    throw std::invalid_argument("count_visits: stream shorter than m + n");
  }
  VisitRecord record{word, m, {}};
  for (std::size_t j = 1; j <= m; ++j) {
    if (matches_at(stream, word, j)) record.hit_times.push_back(j);
  }
  return record;
}

ReturnTimes return_times(const SymbolStream& stream, const Word& word,
                         std::size_t k_max, bool start_in_A) {
  if (word.size() == 0) throw std::invalid_argument("return_times: empty word");
  ReturnTimes out;
  if (start_in_A &&
      (stream.size() < word.size() || !matches_at(stream, word, 0))) {
    throw std::invalid_argument("return_times: stream does not start in A");
  }
  for (std::size_t j = 1; j + word.size() <= stream.size(); ++j) {
    if (out.times.size() == k_max) break;
    if (matches_at(stream, word, j)) out.times.push_back(j);
  }
  out.truncated = out.times.size() < k_max;
  return out;
}

WordMatcher::WordMatcher(const Word& word, std::size_t alphabet_size)
    : length_(word.size()), alphabet_(alphabet_size) {
  if (length_ == 0) throw std::invalid_argument("WordMatcher: empty word");
  if (alphabet_bound(word) > alphabet_) {
    throw std::invalid_argument("WordMatcher: symbol outside alphabet");
  }
  table_.assign((length_ + 1) * alphabet_, 0);
  // Standard KMP automaton; `fallback` is the state reached by the word
  // shifted by one.
  table_[word[0]] = 1;
  std::size_t fallback = 0;
  for (std::size_t q = 1; q <= length_; ++q) {
    for (std::size_t a = 0; a < alphabet_; ++a) {
      table_[q * alphabet_ + a] = table_[fallback * alphabet_ + a];
    }
    if (q < length_) {
      table_[q * alphabet_ + word[q]] = q + 1;
      fallback = table_[fallback * alphabet_ + word[q]];
    }
  }
  std::size_t state = 0;
  for (Symbol s : word.symbols) state = step(state, s);
  full_state_ = state;
}

std::vector<double> exact_first_hit_cdf(const Word& word,
                                        const MeasureModel& model,
                                        std::size_t t_max, bool start_in_A) {
  if (std::holds_alternative<Empirical>(model)) {
    throw std::invalid_argument("exact_first_hit_cdf: needs an exact model");
  }
  validate(model);
  const std::size_t m = alphabet_size(model);
  const WordMatcher matcher(word, m);
  const std::size_t n = word.size();
  Matrix chain;
  std::vector<double> initial;
  if (const auto* b = std::get_if<BernoulliProduct>(&model)) {
    chain.assign(m, b->weights);
    initial = b->weights;
  } else {
    const auto& mc = std::get<MarkovChain>(model);
    chain = mc.chain;
    initial = mc.stationary;
  }

  // mass[q * m + s]: probability of automaton state q with last symbol s and
  // no hit at any time >= 1 so far.
  std::vector<double> mass((n + 1) * m, 0.0), next(mass.size());
  std::size_t pos = 0;  // index of the last symbol read
  if (start_in_A) {
    const double mu = measure(word, model);
    if (!(mu > 0.0)) {
      throw std::invalid_argument("exact_first_hit_cdf: mu(A) is zero");
    }
    mass[matcher.full_state() * m + word[n - 1]] = 1.0;
    pos = n - 1;
  } else {
    for (std::size_t s = 0; s < m; ++s) {
      mass[matcher.step(0, static_cast<Symbol>(s)) * m + s] += initial[s];
    }
  }
  std::vector<double> cdf(t_max + 1, 0.0);
  double hit = 0.0;
  // Symbols up to index pos are read; a hit at time j ends at j + n - 1.
  for (std::size_t j = 1; j <= t_max; ++j) {
    while (pos < j + n - 1) {
      std::fill(next.begin(), next.end(), 0.0);
      ++pos;
      for (std::size_t q = 0; q <= n; ++q) {
        for (std::size_t s = 0; s < m; ++s) {
          const double p = mass[q * m + s];
          if (p == 0.0) continue;
          for (std::size_t c = 0; c < m; ++c) {
            const double pc = p * chain[s][c];
            if (pc == 0.0) continue;
            const std::size_t q2 = matcher.step(q, static_cast<Symbol>(c));
            if (matcher.accepting(q2) && pos >= n) {
              hit += pc;
            } else {
              next[q2 * m + c] += pc;
            }
          }
        }
      }
      mass.swap(next);
    }
    cdf[j] = hit;
  }
  return cdf;
}

void validate(const EmpiricalLaw& law) {
  if (law.samples.empty()) throw std::invalid_argument("empty law");
  for (double x : law.samples) {
    if (!std::isfinite(x) || x < 0.0) {
      throw std::invalid_argument("law samples must be finite and >= 0");
    }
    if (law.kind == LawKind::kCount && x != std::floor(x)) {
      throw std::invalid_argument("count law samples must be integers");
    }
  }
}

EmpiricalLaw rescaled_law(std::span<const std::uint64_t> times, double mu) {
  EmpiricalLaw law{{}, LawKind::kRescaledReturn};
  law.samples.reserve(times.size());
  for (auto t : times) law.samples.push_back(mu * static_cast<double>(t));
  return law;
}

EmpiricalLaw count_law(std::span<const std::uint64_t> counts) {
  EmpiricalLaw law{{}, LawKind::kCount};
  law.samples.assign(counts.begin(), counts.end());
  return law;
}

std::vector<double> default_t_grid() {
  std::vector<double> grid(30);
  const double lo = std::log(0.05), hi = std::log(5.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / 29.0);
  }
  grid.front() = 0.05;
  grid.back() = 5.0;
  return grid;
}

std::vector<double> survival_curve(const EmpiricalLaw& law,
                                   std::span<const double> t_grid) {
  validate(law);
  std::vector<double> sorted = law.samples;
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  std::vector<double> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) {
    const auto above = sorted.end() -
                       std::upper_bound(sorted.begin(), sorted.end(), t);
    out.push_back(static_cast<double>(above) / n);
  }
  return out;
}

double grid_deviation(const EmpiricalLaw& law, std::span<const double> t_grid,
                      const std::function<double(double)>& target) {
  const auto curve = survival_curve(law, t_grid);
  double worst = 0.0;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    worst = std::max(worst, std::abs(curve[i] - target(t_grid[i])));
  }
  return worst;
}

double tv_distance(const EmpiricalLaw& law, double t) {
  validate(law);
  if (law.kind != LawKind::kCount) {
    throw std::invalid_argument("tv_distance: needs a count law");
  }
  std::vector<double> pmf;
  for (double x : law.samples) {
    const auto k = static_cast<std::size_t>(x);
    if (k >= pmf.size()) pmf.resize(k + 1, 0.0);
    pmf[k] += 1.0;
  }
  for (double& p : pmf) p /= static_cast<double>(law.samples.size());
  double sum = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double q = poisson_pmf(t, k);
    const double e = k < pmf.size() ? pmf[k] : 0.0;
    sum += std::abs(e - q);
    if (k + 1 >= pmf.size() && static_cast<double>(k) > t &&
        1.0 - erlang_tail(t, k + 1) < 1e-12) {
      break;
    }
  }
  return 0.5 * sum;
}

double ks_distance(const EmpiricalLaw& law,
                   const std::function<double(double)>& target) {
  validate(law);
  const std::function<double(double)> f =
      target ? target : [](double x) { return std::exp(-x); };
  std::vector<double> sorted = law.samples;
  std::sort(sorted.begin(), sorted.end());
  const auto n = static_cast<double>(sorted.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double s = f(sorted[i]);
    // Survival is (#>=x)/n just before the jump at x and (#>x)/n at x.
    const double before = static_cast<double>(sorted.size() - i) / n;
    const double after = static_cast<double>(sorted.size() - j) / n;
    worst = std::max({worst, std::abs(before - s), std::abs(after - s)});
    i = j;
  }
  return worst;
}

double ks_distance(const EmpiricalLaw& a, const EmpiricalLaw& b) {
  validate(a);
  validate(b);
  std::vector<double> x = a.samples, y = b.samples;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const auto nx = static_cast<double>(x.size());
  const auto ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double worst = 0.0;
  while (i < x.size() || j < y.size()) {
    double v;
    if (j == y.size() || (i < x.size() && x[i] <= y[j])) {
      v = x[i];
    } else {
      v = y[j];
    }
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    const double sx = static_cast<double>(x.size() - i) / nx;
    const double sy = static_cast<double>(y.size() - j) / ny;
    worst = std::max(worst, std::abs(sx - sy));
  }
  return worst;
}

GapSplit gap_split(const VisitRecord& record, std::size_t i,
                   std::size_t delta) {
  if (i < 1 || i > record.m) {
    throw std::invalid_argument("gap_split: need 1 <= i <= m");
  }
  GapSplit out;
  for (std::size_t j : record.hit_times) {
    if (j == i) continue;
    if (j < i) {
      if (i - j > delta) {
        ++out.w_minus;
      } else {
        ++out.u_minus;
      }
    } else if (j - i > delta) {
      ++out.w_plus;
    } else {
      ++out.u_plus;
    }
  }
  return out;
}

NeighbourCounts neighbour_counts(const VisitRecord& record,
                                 std::size_t delta) {
  NeighbourCounts out;
  const auto& h = record.hit_times;
  for (std::size_t idx = 0; idx < h.size(); ++idx) {
    const std::size_t j = h[idx];
    if (j <= delta || j + delta > record.m) continue;
    ++out.inspected;
    if (idx > 0 && j - h[idx - 1] <= delta) ++out.preceded;
    if (idx + 1 < h.size() && h[idx + 1] - j <= delta) ++out.followed;
  }
  return out;
}

void write_law_csv(std::ostream& out, const EmpiricalLaw& law,
                   const LawMetadata& meta) {
  out << "# word=" << meta.word << '\n'
      << "# n=" << meta.n << '\n'
      << "# mu_A=" << format_double(meta.mu_A) << '\n'
      << "# r_A=" << meta.r_A << '\n'
      << "# seed=" << meta.seed << '\n'
      << "# m=" << meta.m << '\n'
      << "# kind=" << (law.kind == LawKind::kCount ? "count" : "rescaled_return")
      << '\n'
      << "sample\n";
  for (double x : law.samples) out << format_double(x) << '\n';
}

EmpiricalLaw read_law_csv(std::istream& in, LawMetadata* meta) {
  EmpiricalLaw law;
  LawMetadata local;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos || line.size() < 2) {
        throw std::invalid_argument("read_law_csv: bad metadata line");
      }
      const std::string key = line.substr(2, eq - 2);
      const std::string value = line.substr(eq + 1);
      if (key == "word") local.word = value;
      else if (key == "n") local.n = std::stoull(value);
      else if (key == "mu_A") local.mu_A = std::stod(value);
      else if (key == "r_A") local.r_A = std::stoull(value);
      else if (key == "seed") local.seed = std::stoull(value);
      else if (key == "m") local.m = std::stoull(value);
      else if (key == "kind")
        law.kind = value == "count" ? LawKind::kCount : LawKind::kRescaledReturn;
      continue;
    }
    if (!header_seen) {
      if (line != "sample") {
        throw std::invalid_argument("read_law_csv: missing header");
      }
      header_seen = true;
      continue;
    }
    law.samples.push_back(std::stod(line));
  }
  if (meta) *meta = local;
  validate(law);
  return law;
}

}  // namespace rtlab
