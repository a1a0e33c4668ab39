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

#include "rtlab/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "rtlab/regression.hpp"

namespace rtlab {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Geometric continuation of a table: alpha(K + j) = last * rate^j.
struct TableTail {
  double last = 0.0;
  double rate = 0.0;
};

TableTail fit_tail(const Table& table) {
  const auto& v = table.values;
  TableTail tail{v.back(), 0.0};
  if (tail.last == 0.0) return tail;
  std::vector<double> x, y;
  for (std::size_t i = v.size() - std::min<std::size_t>(v.size(), 8);
       i < v.size(); ++i) {
    if (v[i] > 0.0) {
      x.push_back(static_cast<double>(i + 1));
      y.push_back(v[i]);
    }
  }
  if (x.size() < 2) {
    tail.rate = 1.0;
    return tail;
  }
  const double slope = fit_log_linear(x, y).slope;
  tail.rate = std::min(1.0, std::exp(slope));
  return tail;
}

// sum_{j >= n} j^{-beta} for beta > 1 and n >= 1.
double zeta_tail(double beta, std::size_t n) {
  const std::size_t cut = std::max<std::size_t>(n, 1000);
  double partial = 0.0;
  for (std::size_t j = cut; j-- > n;) {
    partial += std::pow(static_cast<double>(j), -beta);
  }
  const auto N = static_cast<double>(cut);
  const double em = std::pow(N, 1.0 - beta) / (beta - 1.0) +
                    0.5 * std::pow(N, -beta) +
                    beta / 12.0 * std::pow(N, -beta - 1.0) -
                    beta * (beta + 1.0) * (beta + 2.0) / 720.0 *
                        std::pow(N, -beta - 3.0);
  return partial + em;
}

void for_each_word(std::size_t length, std::size_t alphabet,
                   const std::function<void(const Word&)>& fn) {
  Word w(std::vector<Symbol>(length, 0));
  while (true) {
    fn(w);
    std::size_t i = length;
    while (i > 0) {
      --i;
      if (++w.symbols[i] < alphabet) break;
      w.symbols[i] = 0;
      if (i == 0) return;
    }
    if (length == 0) return;
  }
}

}  // namespace

void validate(const MixingProfile& profile) {
  std::visit(
      Overloaded{
          [](const ExactZero&) {},
          [](const Exponential& p) {
            if (!(p.c >= 0.0) || !(p.theta > 0.0 && p.theta < 1.0)) {
              throw std::invalid_argument(
                  "exponential profile needs c >= 0 and theta in (0,1)");
            }
          },
          [](const Polynomial& p) {
            if (!(p.c >= 0.0) || !(p.beta > 0.0)) {
              throw std::invalid_argument(
                  "polynomial profile needs c >= 0 and beta > 0");
            }
          },
          [](const Table& p) {
            if (p.values.empty()) throw std::invalid_argument("empty table");
            for (std::size_t i = 0; i < p.values.size(); ++i) {
              if (!(p.values[i] >= 0.0) || !std::isfinite(p.values[i])) {
                throw std::invalid_argument("table entries must be >= 0");
              }
              if (i > 0 && p.values[i] > p.values[i - 1]) {
                throw std::invalid_argument("table must be non-increasing");
              }
            }
          }},
      profile);
}

AlphaValue alpha_value(const MixingProfile& profile, std::size_t k) {
  if (k == 0) throw std::invalid_argument("alpha: k must be >= 1");
  const auto x = static_cast<double>(k);
  return std::visit(
      Overloaded{
          [](const ExactZero&) { return AlphaValue{}; },
          [x](const Exponential& p) {
            return AlphaValue{p.c * std::pow(p.theta, x), false};
          },
          [x](const Polynomial& p) {
            return AlphaValue{p.c * std::pow(x, -p.beta), false};
          },
          [k](const Table& p) {
            if (k <= p.values.size()) return AlphaValue{p.values[k - 1], false};
            const TableTail tail = fit_tail(p);
            const auto beyond = static_cast<double>(k - p.values.size());
            return AlphaValue{tail.last * std::pow(tail.rate, beyond), true};
          }},
      profile);
}

double alpha(const MixingProfile& profile, std::size_t k) {
  return alpha_value(profile, k).value;
}

double alpha_at_gap(const MixingProfile& profile, std::size_t gap) {
  if (gap > 0) return alpha(profile, gap);
  return std::holds_alternative<ExactZero>(profile) ? 0.0 : 1.0;
}

double alpha_bar(const MixingProfile& profile, std::size_t n) {
  if (n == 0) throw std::invalid_argument("alpha_bar: n must be >= 1");
  return std::visit(
      Overloaded{
          [](const ExactZero&) { return 0.0; },
          [n](const Exponential& p) {
            return p.c * std::pow(p.theta, static_cast<double>(n)) /
                   (1.0 - p.theta);
          },
          [n](const Polynomial& p) {
            if (!(p.beta > 1.0)) {
              throw std::domain_error("alpha_bar: beta <= 1 is not summable");
            }
            return p.c * zeta_tail(p.beta, n);
          },
          [n](const Table& p) {
            double sum = 0.0;
            for (std::size_t j = n; j <= p.values.size(); ++j) {
              sum += p.values[j - 1];
            }
            const TableTail tail = fit_tail(p);
            if (tail.last == 0.0) return sum;
            if (tail.rate >= 1.0) {
              throw std::domain_error("alpha_bar: table tail not summable");
            }
            const std::size_t from = std::max(n, p.values.size() + 1);
            const auto skip = static_cast<double>(from - p.values.size());
            return sum + tail.last * std::pow(tail.rate, skip) /
                             (1.0 - tail.rate);
          }},
      profile);
}

double alpha_bar_upper(const MixingProfile& profile, std::size_t n) {
  if (const auto* p = std::get_if<Polynomial>(&profile)) {
    if (n == 0) throw std::invalid_argument("alpha_bar: n must be >= 1");
    if (!(p->beta > 1.0)) {
      throw std::domain_error("alpha_bar: beta <= 1 is not summable");
    }
    if (n == 1) return p->c * p->beta / (p->beta - 1.0);
    return p->c * std::pow(static_cast<double>(n - 1), 1.0 - p->beta) /
           (p->beta - 1.0);
  }
  return alpha_bar(profile, n);
}

double alpha_empirical(const MeasureModel& model, std::size_t n, std::size_t k,
                       std::size_t max_b) {
  if (std::holds_alternative<Empirical>(model)) {
    throw std::invalid_argument("alpha_empirical: needs an exact model");
  }
  if (n == 0 || max_b == 0) {
    throw std::invalid_argument("alpha_empirical: n and max_b must be >= 1");
  }
  const std::size_t m = alphabet_size(model);
  double words_a = std::pow(static_cast<double>(m), static_cast<double>(n));
  double words_b = 0.0;
  for (std::size_t b = 1; b <= max_b; ++b) {
    words_b += std::pow(static_cast<double>(m), static_cast<double>(b));
  }
  if (words_a * words_b > 1e7) {
    throw std::length_error("alpha_empirical: enumeration above 10^7 pairs");
  }
  std::vector<Word> as;
  std::vector<double> mu_as;
  for_each_word(n, m, [&](const Word& a) {
    const double mu = measure(a, model);
    if (mu > 0.0) {
      as.push_back(a);
      mu_as.push_back(mu);
    }
  });
  double worst = 0.0;
  for (std::size_t b = 1; b <= max_b; ++b) {
    for_each_word(b, m, [&](const Word& bw) {
      const double mu_b = measure(bw, model);
      if (!(mu_b > 0.0)) return;
      for (std::size_t i = 0; i < as.size(); ++i) {
        const double joint = joint_measure(as[i], bw, n + k, model);
        worst = std::max(worst, std::abs(joint / mu_b - mu_as[i]));
      }
    });
  }
  return worst;
}

DeltaValue delta_from_suffix_measures(std::span<const double> suffix_mu,
                                      std::size_t k,
                                      const MixingProfile& profile) {
  if (k == 0) throw std::invalid_argument("delta_A: k must be >= 1");
  if (suffix_mu.empty()) throw std::invalid_argument("delta_A: empty word");
  DeltaValue best{std::numeric_limits<double>::infinity(), 0};
  const std::size_t top = std::min(k, suffix_mu.size());
  for (std::size_t w = 1; w <= top; ++w) {
    const double v = suffix_mu[w - 1] + alpha_at_gap(profile, k - w);
    if (v < best.value) best = {v, w};
  }
  return best;
}

DeltaValue delta_A(const Word& word, std::size_t k,
                   const MixingProfile& profile, const MeasureModel& model) {
  std::vector<double> suffix_mu;
  const std::size_t top = std::min(k, word.size());
  for (std::size_t w = 1; w <= top; ++w) {
    suffix_mu.push_back(measure(outer_cylinder(word, w), model));
  }
  return delta_from_suffix_measures(suffix_mu, k, profile);
}

std::size_t mixing_recurrence_bound(const MixingProfile& profile,
                                    std::size_t n, double mu_A) {
  for (std::size_t l = 0; l < 10'000'000; ++l) {
    if (alpha_at_gap(profile, l) < mu_A) return n + l;
  }
  throw std::runtime_error("mixing_recurrence_bound: alpha never below mu(A)");
}

nlohmann::json to_json(const MixingProfile& profile) {
  return std::visit(
      Overloaded{
          [](const ExactZero&) { return nlohmann::json{{"kind", "exact_zero"}}; },
          [](const Exponential& p) {
            return nlohmann::json{
                {"kind", "exponential"}, {"c", p.c}, {"theta", p.theta}};
          },
          [](const Polynomial& p) {
            return nlohmann::json{
                {"kind", "polynomial"}, {"c", p.c}, {"beta", p.beta}};
          },
          [](const Table& p) {
            return nlohmann::json{{"kind", "table"}, {"values", p.values}};
          }},
      profile);
}

MixingProfile profile_from_json(const nlohmann::json& j) {
  MixingProfile out;
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "exact_zero") {
      out = ExactZero{};
    } else if (kind == "exponential") {
      out = Exponential{j.value("c", 1.0), j.at("theta").get<double>()};
    } else if (kind == "polynomial") {
      out = Polynomial{j.value("c", 1.0), j.at("beta").get<double>()};
    } else if (kind == "table") {
      out = Table{j.at("values").get<std::vector<double>>()};
    } else {
      throw std::invalid_argument("unknown mixing profile kind: " + kind);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("mixing profile json: ") +
                                e.what());
  }
  validate(out);
  return out;
}

}  // namespace rtlab
