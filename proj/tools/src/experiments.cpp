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

#include "rtlab/cli/experiments.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "rtlab/bounds.hpp"
#include "rtlab/counting.hpp"
#include "rtlab/cylinders.hpp"
#include "rtlab/dynamics.hpp"
#include "rtlab/mixing.hpp"
#include "rtlab/regression.hpp"
#include "rtlab/rng.hpp"
#include "rtlab/stein.hpp"
#include "rtlab/tower.hpp"

namespace rtlab::cli {

namespace {

using nlohmann::json;

const json& defaults_for(const std::string& experiment) {
  static const std::map<std::string, json> table = {
      {"stein_selftest",
       {{"t_values", {0.5, 1.0, 5.0, 20.0}},
        {"events", 50},
        {"event_max", 50},
        {"k_max", 100},
        {"thresholds", {{"max_residual", 1e-10}}}}},
      {"return_law",
       {{"system", {{"kind", "doubling"}}},
        {"n", 10},
        {"k_max", 3},
        {"cylinders", 20},
        {"min_recurrence", 5},
        {"blocks", 50000},
        {"max_block_length", 0},
        {"t_grid", json()},
        {"thresholds",
         {{"first_return", 0.02},
          {"higher_returns", 0.03},
          {"kac_low", 0.98},
          {"kac_high", 1.02}}}}},
      {"count_law",
       {{"system", {{"kind", "doubling"}}},
        {"words", {"0000000001"}},
        {"t", 1.0},
        {"blocks", 100000},
        {"start_in_A", false},
        {"thresholds", {{"max_tv", json()}}}}},
      {"periodic_counterexample",
       {{"system", {{"kind", "doubling"}}},
        {"word", "0000000000"},
        {"t", 1.0},
        {"blocks", 100000},
        {"thresholds", {{"min_tv", 0.05}}}}},
      {"gw_tail",
       {{"alphas", {0.5, 0.75}},
        {"i_max", 100000},
        {"fit_range", {50, 500}},
        {"thresholds", {{"max_residual", 1e-12}, {"slope_relative", 0.1}}}}},
      {"tower_occupancy",
       {{"tower", {{"gaspard_wang", {{"alpha", 0.25}, {"i_max", 100000}}}}},
        {"tower_file", json()},
        {"steps", 10000000},
        {"min_mass", 1e-3},
        {"thresholds", {{"max_relative_error", 0.01}}}}},
      {"ulam_decay",
       {{"map", "doubling"},
        {"alpha", 0.0},
        {"bins", 4096},
        {"k_max", 30},
        {"initial", {{"center", 0.3}, {"half_width", 8}}},
        {"fit_range", {2, 20}},
        {"thresholds", {{"min_r_squared", 0.98}, {"uniform_tolerance", 1e-8}}}}},
      {"bound_table",
       {{"profile", {{"kind", "exponential"}, {"c", 1.0}, {"theta", 0.5}}},
        {"eta", 1.0},
        {"K", std::log(2.0)},
        {"n_min", 10},
        {"n_max", 40},
        {"t", 1.0},
        {"epsilon", 0.1},
        {"prefactor", "t_times_max"},
        {"thresholds", {{"min_r_squared", 0.99}}}}},
  };
  const auto it = table.find(experiment);
  if (it == table.end()) {
    throw std::invalid_argument("unknown experiment: " + experiment);
  }
  return it->second;
}

std::uint64_t seed_at(const json& cfg, std::size_t i) {
  return cfg.at("seeds").at(i).get<std::uint64_t>();
}

std::vector<std::uint64_t> seeds_of(const json& cfg) {
  return cfg.at("seeds").get<std::vector<std::uint64_t>>();
}

struct System {
  MeasureModel model;
  std::variant<DoublingSource, MarkovSource> source;
};

System system_from(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "doubling") return {fair_coin(), DoublingSource{}};
  if (kind == "markov") {
    const auto chain = j.at("matrix").get<Matrix>();
    return {markov_model(chain),
            MarkovSource(chain, stationary_distribution(chain))};
  }
  throw std::invalid_argument("unknown system kind: " + kind);
}

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      if (!first) out_ << ',';
      out_ << h;
      first = false;
    }
    out_ << '\n';
  }
  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ","), put(cells), first = false), ...);
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  void put(double v) { out_ << format_double(v); }
  void put(const std::string& s) { out_ << s; }
  void put(const char* s) { out_ << s; }
  template <class I>
    requires std::is_integral_v<I>
  void put(I v) { out_ << v; }
  std::ostringstream out_;
};

Check at_most(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value <= threshold};
}

Check at_least(std::string name, double value, double threshold) {
  return {std::move(name), value, threshold, value >= threshold};
}

ExperimentOutput stein_selftest(const json& cfg) {
  const auto t_values = cfg.at("t_values").get<std::vector<double>>();
  const auto events = cfg.at("events").get<std::size_t>();
  const auto event_max = cfg.at("event_max").get<std::size_t>();
  const auto k_max = cfg.at("k_max").get<std::size_t>();
  Csv csv({"t", "event", "k", "f", "residual"});
  double worst = 0.0;
  std::size_t violations = 0, solutions = 0;
  for (std::size_t ti = 0; ti < t_values.size(); ++ti) {
    const double t = t_values[ti];
    for (std::size_t e = 0; e < events; ++e) {
      Rng rng(derive_seed(seed_at(cfg, 0), ti * events + e));
      std::vector<std::size_t> event;
      for (std::size_t i = 0; i <= event_max; ++i) {
        if (rng.bit()) event.push_back(i);
      }
      const auto s = stein_solve(t, event, k_max + 1);
      ++solutions;
      double prefix = 0.0;
      for (std::size_t k = 0; k <= k_max; ++k) {
        const double h = s.in_event(k) ? 1.0 : 0.0;
        const double lhs =
            t * s.f(k + 1) - static_cast<double>(k) * s.f(k);
        const double r = std::abs(lhs - (h - s.event_mass()));
        worst = std::max(worst, r);
        if (k >= 1) {
          const double fk = std::abs(s.f(k));
          prefix += fk;
          if (fk > stein_bound_pointwise(t, k)) ++violations;
          if (prefix > stein_bound_sum(t, k)) ++violations;
        }
        csv.row(t, e, k, s.f(k), r);
      }
    }
  }
  ExperimentOutput out;
  out.samples_csv = csv.str();
  out.summary["results"] = {{"solutions", solutions},
                            {"max_residual", worst},
                            {"bound_violations", violations}};
  out.checks.push_back(at_most("max_residual", worst,
                               cfg["thresholds"]["max_residual"].get<double>()));
  out.checks.push_back(
      at_most("bound_violations", static_cast<double>(violations), 0.0));
  return out;
}

ExperimentOutput return_law(const json& cfg) {
  const System sys = system_from(cfg.at("system"));
  const auto n = cfg.at("n").get<std::size_t>();
  const auto k_max = cfg.at("k_max").get<std::size_t>();
  const auto how_many = cfg.at("cylinders").get<std::size_t>();
  const auto constraint = cfg.at("min_recurrence").get<std::size_t>();
  const auto blocks = cfg.at("blocks").get<std::size_t>();
  const auto max_len = cfg.at("max_block_length").get<std::uint64_t>();
  const auto grid = cfg.at("t_grid").is_null()
                        ? default_t_grid()
                        : cfg.at("t_grid").get<std::vector<double>>();
  const json& th = cfg.at("thresholds");

  Csv csv({"seed", "cylinder", "word", "k", "t", "empirical", "target"});
  json per_seed = json::array();
  double worst_first = 0.0, worst_higher = 0.0;
  double kac_min = INFINITY, kac_max = -INFINITY;
  for (const std::uint64_t seed : seeds_of(cfg)) {
    const auto cyl = select_test_cylinders(n, how_many, constraint, sys.model,
                                           derive_seed(seed, 0));
    json rows = json::array();
    for (std::size_t c = 0; c < cyl.size(); ++c) {
      const auto& tc = cyl[c];
      const auto harvest = std::visit(
          [&](const auto& src) {
            return harvest_return_times(src, tc.word, k_max, blocks,
                                        derive_seed(seed, c + 1), true,
                                        max_len);
          },
          sys.source);
      const auto text = to_string(tc.word, alphabet_size(sys.model));
      json row = {{"word", text},
                  {"mu", tc.mu},
                  {"recurrence", tc.recurrence},
                  {"samples", harvest.tau[0].size()},
                  {"truncated", harvest.truncated}};
      json devs = json::array();
      for (std::size_t k = 1; k <= k_max; ++k) {
        const auto law = rescaled_law(harvest.tau[k - 1], tc.mu);
        const auto target = [k](double t) { return erlang_tail(t, k); };
        const double dev = grid_deviation(law, grid, target);
        devs.push_back(dev);
        (k == 1 ? worst_first : worst_higher) =
            std::max(k == 1 ? worst_first : worst_higher, dev);
        const auto curve = survival_curve(law, grid);
        for (std::size_t g = 0; g < grid.size(); ++g) {
          csv.row(seed, c, text, k, grid[g], curve[g], target(grid[g]));
        }
        if (k == 1) row["ks_exponential"] = ks_distance(law);
      }
      const auto& first = harvest.tau[0];
      const double mean =
          std::accumulate(first.begin(), first.end(), 0.0) /
          static_cast<double>(first.size());
      const double kac = mean * tc.mu;
      kac_min = std::min(kac_min, kac);
      kac_max = std::max(kac_max, kac);
      row["sup_deviation"] = devs;
      row["kac"] = kac;
      rows.push_back(row);
    }
    per_seed.push_back({{"seed", seed}, {"cylinders", rows}});
  }
  ExperimentOutput out;
  out.samples_csv = csv.str();
  out.summary["results"] = {{"t_grid", grid},
                            {"per_seed", per_seed},
                            {"max_deviation_first_return", worst_first},
                            {"max_deviation_higher_returns", worst_higher},
                            {"kac_min", kac_min},
                            {"kac_max", kac_max}};
  out.checks.push_back(at_most("first_return_deviation", worst_first,
                               th["first_return"].get<double>()));
  if (k_max > 1) {
    out.checks.push_back(at_most("higher_return_deviation", worst_higher,
                                 th["higher_returns"].get<double>()));
  }
  out.checks.push_back(at_least("kac_min", kac_min, th["kac_low"].get<double>()));
  out.checks.push_back(at_most("kac_max", kac_max, th["kac_high"].get<double>()));
  return out;
}

struct CountSummary {
  EmpiricalLaw law;
  double mean = 0.0;
  double variance = 0.0;
  std::size_t m = 0;
};

CountSummary run_counts(const System& sys, const Word& word, double t,
                        std::size_t blocks, std::uint64_t seed,
                        bool start_in_A) {
  CountSummary s;
  const double mu = measure(word, sys.model);
  if (!(mu > 0.0)) throw std::invalid_argument("count law: mu(A) = 0");
  s.m = static_cast<std::size_t>(std::floor(t / mu));
  if (s.m == 0) throw std::invalid_argument("count law: t / mu(A) < 1");
  const auto counts = std::visit(
      [&](const auto& src) {
        return harvest_counts(src, word, s.m, blocks, seed, start_in_A);
      },
      sys.source);
  s.law = count_law(counts);
  const double n = static_cast<double>(counts.size());
  s.mean = std::accumulate(s.law.samples.begin(), s.law.samples.end(), 0.0) / n;
  for (double v : s.law.samples) s.variance += (v - s.mean) * (v - s.mean);
  s.variance /= n - 1.0;
  return s;
}

void count_rows(Csv& csv, std::uint64_t seed, const std::string& word,
                const CountSummary& s, double t) {
  std::size_t top = 0;
  for (double v : s.law.samples) top = std::max(top, static_cast<std::size_t>(v));
  std::vector<std::size_t> hist(top + 1, 0);
  for (double v : s.law.samples) ++hist[static_cast<std::size_t>(v)];
  for (std::size_t c = 0; c <= top; ++c) {
    csv.row(seed, word, c,
            static_cast<double>(hist[c]) / static_cast<double>(s.law.samples.size()),
            poisson_pmf(t, c), poisson_pmf(s.mean, c));
  }
}

ExperimentOutput count_law_experiment(const json& cfg) {
  const System sys = system_from(cfg.at("system"));
  const double t = cfg.at("t").get<double>();
  const auto blocks = cfg.at("blocks").get<std::size_t>();
  const bool start = cfg.at("start_in_A").get<bool>();
  const auto words = cfg.at("words").get<std::vector<std::string>>();
  Csv csv({"seed", "word", "count", "empirical", "poisson_t", "poisson_matched"});
  json per_seed = json::array();
  double worst_tv = 0.0;
  for (const std::uint64_t seed : seeds_of(cfg)) {
    json rows = json::array();
    for (std::size_t w = 0; w < words.size(); ++w) {
      const Word word = parse_word(words[w]);
      const auto s = run_counts(sys, word, t, blocks, derive_seed(seed, w), start);
      const double tv = tv_distance(s.law, t);
      worst_tv = std::max(worst_tv, tv);
      rows.push_back({{"word", words[w]},
                      {"m", s.m},
                      {"mean", s.mean},
                      {"variance", s.variance},
                      {"tv_poisson_t", tv},
                      {"tv_poisson_matched", tv_distance(s.law, s.mean)}});
      count_rows(csv, seed, words[w], s, t);
    }
    per_seed.push_back({{"seed", seed}, {"words", rows}});
  }
  ExperimentOutput out;
  out.samples_csv = csv.str();
  out.summary["results"] = {{"per_seed", per_seed}, {"max_tv", worst_tv}};
  const json& limit = cfg["thresholds"]["max_tv"];
  if (!limit.is_null()) {
    out.checks.push_back(at_most("max_tv", worst_tv, limit.get<double>()));
  }
  return out;
}

ExperimentOutput periodic_counterexample(const json& cfg) {
  const System sys = system_from(cfg.at("system"));
  const double t = cfg.at("t").get<double>();
  const auto blocks = cfg.at("blocks").get<std::size_t>();
  const auto text = cfg.at("word").get<std::string>();
  const Word word = parse_word(text);
  Csv csv({"seed", "word", "count", "empirical", "poisson_t", "poisson_matched"});
  json per_seed = json::array();
  double least_tv = INFINITY;
  for (const std::uint64_t seed : seeds_of(cfg)) {
    const auto s = run_counts(sys, word, t, blocks, derive_seed(seed, 0), false);
    const double tv = tv_distance(s.law, s.mean);
    least_tv = std::min(least_tv, tv);
    per_seed.push_back(
        {{"seed", seed},
         {"recurrence", recurrence_time(word, admissibility_of(sys.model))},
         {"m", s.m},
         {"mean", s.mean},
         {"variance", s.variance},
         {"dispersion", s.variance / s.mean},
         {"tv_poisson_matched", tv}});
    count_rows(csv, seed, text, s, t);
  }
  ExperimentOutput out;
  out.samples_csv = csv.str();
  out.summary["results"] = {{"per_seed", per_seed}, {"min_tv", least_tv}};
  out.checks.push_back(
      at_least("min_tv", least_tv, cfg["thresholds"]["min_tv"].get<double>()));
  return out;
}

ExperimentOutput gw_tail(const json& cfg) {
  const auto alphas = cfg.at("alphas").get<std::vector<double>>();
  const auto i_max = cfg.at("i_max").get<std::size_t>();
  const auto range = cfg.at("fit_range").get<std::vector<std::size_t>>();
  if (range.size() != 2 || range[0] < 1 || range[0] >= range[1] ||
      range[1] >= i_max) {
    throw std::invalid_argument("gw_tail: fit_range must be [lo, hi] inside [1, i_max)");
  }
  const json& th = cfg.at("thresholds");
  Csv csv({"alpha", "n", "tail"});
  json rows = json::array();
  double worst_res = 0.0, worst_rel = 0.0;
  for (const double a : alphas) {
    const auto sys = gw_ladder(a, i_max);
    double res = 0.0;
    for (std::size_t i = 1; i <= sys.depth(); ++i) {
      res = std::max(res, std::abs(gw_step(sys.boundaries[i], a) -
                                   sys.boundaries[i - 1]));
    }
    const auto spec = gw_tower(a, i_max);
    const auto tail = tower_tail(spec);
    std::vector<double> ns, vs;
    for (std::size_t j = range[0]; j <= range[1]; ++j) {
      ns.push_back(static_cast<double>(j));
      vs.push_back(tail[j]);
    }
    for (std::size_t j = 1; j <= range[1]; ++j) csv.row(a, j, tail[j]);
    const auto fit = fit_log_log(ns, vs);
    const double rel = std::abs(fit.slope * a + 1.0);
    worst_res = std::max(worst_res, res);
    worst_rel = std::max(worst_rel, rel);
    rows.push_back({{"alpha", a},
                    {"max_residual", res},
                    {"slope", fit.slope},
                    {"expected_slope", -1.0 / a},
                    {"r_squared", fit.r_squared},
                    {"mean_return", spec.mean_return()},
                    {"truncation_mass", spec.truncation_mass},
                    {"warnings", spec.warnings}});
  }
  ExperimentOutput out;
  out.samples_csv = csv.str();
  out.summary["results"] = {{"alphas", rows}};
  out.checks.push_back(
      at_most("max_residual", worst_res, th["max_residual"].get<double>()));
  out.checks.push_back(
      at_most("slope_relative_error", worst_rel, th["slope_relative"].get<double>()));
  return out;
}

ExperimentOutput tower_occupancy_experiment(const json& cfg) {
  json tower_json = cfg.at("tower");
  if (!cfg.at("tower_file").is_null()) {
    std::ifstream in(cfg.at("tower_file").get<std::string>());
    tower_json = json::parse(in);
  }
  if (tower_json.contains("gaspard_wang")) {
    const double a = tower_json["gaspard_wang"].at("alpha").get<double>();
    if (!(a > 0.0 && a < 1.0 / 3.0)) {
      throw std::invalid_argument(
          "tower_occupancy: Gaspard-Wang towers need alpha in (0, 1/3)");
    }
  }
  const TowerSpec spec = tower_from_json(tower_json);
  const auto steps = cfg.at("steps").get<std::size_t>();
  const double min_mass = cfg.at("min_mass").get<double>();
  const auto inv = tower_invariant(spec);
  Csv csv({"seed", "level", "invariant", "empirical", "relative_error"});
  json per_seed = json::array();
  double worst = 0.0;
  for (const std::uint64_t seed : seeds_of(cfg)) {
    const auto occ = tower_occupancy(spec, steps, derive_seed(seed, 0));
    double seed_worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t j = 0; j < inv.size(); ++j) {
      if (inv[j] < 1e-6) break;
      const double f = static_cast<double>(occ[j]) / static_cast<double>(steps);
      const double rel = std::abs(f / inv[j] - 1.0);
      csv.row(seed, j, inv[j], f, rel);
      if (inv[j] >= min_mass) {
        seed_worst = std::max(seed_worst, rel);
        ++checked;
      }
    }
    worst = std::max(worst, seed_worst);
    per_seed.push_back({{"seed", seed},
                        {"levels_checked", checked},
                        {"max_relative_error", seed_worst}});
  }
  ExperimentOutput out;
  out.samples_csv = csv.str();
  out.summary["results"] = {{"mean_return", spec.mean_return()},
                            {"height", spec.height()},
                            {"truncation_mass", spec.truncation_mass},
                            {"warnings", spec.warnings},
                            {"per_seed", per_seed}};
  out.checks.push_back(at_most("max_relative_error", worst,
                               cfg["thresholds"]["max_relative_error"].get<double>()));
  return out;
}

ExperimentOutput ulam_decay_experiment(const json& cfg) {
  const auto map_name = cfg.at("map").get<std::string>();
  UlamMap map;
  if (map_name == "doubling") {
    map = UlamMap::kDoubling;
  } else if (map_name == "gaspard_wang") {
    map = UlamMap::kGaspardWang;
  } else {
    throw std::invalid_argument("ulam_decay: unknown map " + map_name);
  }
  const auto bins = cfg.at("bins").get<std::size_t>();
  const auto k_max = cfg.at("k_max").get<std::size_t>();
  const auto range = cfg.at("fit_range").get<std::vector<std::size_t>>();
  if (range.size() != 2 || range[0] >= range[1] || range[1] > k_max) {
    throw std::invalid_argument("ulam_decay: fit_range must be [lo, hi] with hi <= k_max");
  }
  const json& th = cfg.at("thresholds");
  const auto op = ulam_build(map, bins, cfg.at("alpha").get<double>());
  const auto h = ulam_stationary(op);
  const auto init = smoothed_point_mass(
      bins, cfg["initial"].at("center").get<double>(),
      cfg["initial"].at("half_width").get<std::size_t>());
  const auto p = ulam_decay(op, init, k_max);

  Csv csv({"k", "p_hat"});
  for (std::size_t k = 0; k < p.size(); ++k) csv.row(k, p[k]);
  std::size_t increases = 0;
  for (std::size_t k = 1; k < p.size(); ++k) increases += p[k] > p[k - 1];

  ExperimentOutput out;
  json results = {{"monotone_violations", increases}};
  std::size_t resolved = 0;
  while (resolved < p.size() && p[resolved] > 0.0) ++resolved;
  results["last_positive_k"] = resolved == 0 ? json() : json(resolved - 1);
  std::vector<double> ks, vs;
  for (std::size_t k = range[0]; k < std::min(range[1] + 1, resolved); ++k) {
    ks.push_back(static_cast<double>(k));
    vs.push_back(p[k]);
  }
  const bool complete = resolved > range[1];
  double r2 = 0.0;
  bool negative = false;
  if (map == UlamMap::kGaspardWang) {
    if (ks.size() >= 2) {
      const auto fit = fit_log_log(ks, vs);
      results["log_log_slope"] = fit.slope;
      results["log_log_r_squared"] = fit.r_squared;
    }
  } else if (complete) {
    const auto fit = fit_log_linear(ks, vs);
    r2 = fit.r_squared;
    negative = fit.slope < 0.0;
    results["slope"] = fit.slope;
    results["r_squared"] = fit.r_squared;
  } else {
    results["fit_error"] = "p_hat vanishes inside the fit range";
    if (ks.size() >= 2) {
      const auto fit = fit_log_linear(ks, vs);
      results["resolved_range"] = {range[0], resolved - 1};
      results["resolved_slope"] = fit.slope;
      results["resolved_r_squared"] = fit.r_squared;
    }
  }
  if (map == UlamMap::kDoubling) {
    double dev = 0.0;
    for (double v : h) dev = std::max(dev, std::abs(v - 1.0 / static_cast<double>(bins)));
    results["stationary_max_deviation"] = dev;
    out.checks.push_back(
        at_most("stationary_uniform", dev, th["uniform_tolerance"].get<double>()));
    out.checks.push_back(
        at_least("r_squared", r2, th["min_r_squared"].get<double>()));
    out.checks.push_back({"negative_slope", negative ? 1.0 : 0.0, 1.0, negative});
  }
  out.samples_csv = csv.str();
  out.summary["results"] = results;
  out.checks.push_back(
      at_most("monotone_violations", static_cast<double>(increases), 0.0));
  return out;
}

ExperimentOutput bound_table(const json& cfg) {
  const MixingProfile profile = profile_from_json(cfg.at("profile"));
  const double eta = cfg.at("eta").get<double>();
  const double K = cfg.at("K").get<double>();
  const auto n_min = cfg.at("n_min").get<std::size_t>();
  const auto n_max = cfg.at("n_max").get<std::size_t>();
  const double t = cfg.at("t").get<double>();
  const double eps = cfg.at("epsilon").get<double>();
  const auto pre = cfg.at("prefactor").get<std::string>();
  if (pre != "t_times_max" && pre != "max") {
    throw std::invalid_argument("bound_table: prefactor is t_times_max or max");
  }
  if (n_min < 1 || n_max <= n_min) {
    throw std::invalid_argument("bound_table: need 1 <= n_min < n_max");
  }
  const Prefactor mode = pre == "max" ? Prefactor::kMax : Prefactor::kTTimesMax;
  Csv csv({"n", "mu_A", "delta_prescribed", "value_prescribed", "delta_best",
           "value_best"});
  std::vector<double> ns, best, prescribed;
  json table = json::array();
  for (std::size_t n = n_min; n <= n_max; ++n) {
    const auto in = synthetic_bound_input(n, eta, K, profile, t);
    const auto opt = optimize_gap(in, eps, mode);
    csv.row(n, in.mu_A, opt.prescribed.delta_star, opt.prescribed.value,
            opt.best.delta_star, opt.best.value);
    ns.push_back(static_cast<double>(n));
    best.push_back(opt.best.value);
    prescribed.push_back(opt.prescribed.value);
    table.push_back({{"n", n},
                     {"prescribed", to_json(opt.prescribed)},
                     {"best", to_json(opt.best)},
                     {"grid_beats_prescription", opt.grid_beats_prescription}});
  }
  json results = {{"table", table}};
  ExperimentOutput out;
  if (std::holds_alternative<Exponential>(profile)) {
    const auto fit = fit_log_linear(ns, best);
    const auto fit_p = fit_log_linear(ns, prescribed);
    results["gamma"] = -fit.slope;
    results["r_squared"] = fit.r_squared;
    results["gamma_prescribed"] = -fit_p.slope;
    results["r_squared_prescribed"] = fit_p.r_squared;
    out.checks.push_back(at_least("r_squared", fit.r_squared,
                                  cfg["thresholds"]["min_r_squared"].get<double>()));
    out.checks.push_back({"positive_gamma", -fit.slope, 0.0, -fit.slope > 0.0});
  } else if (const auto* p = std::get_if<Polynomial>(&profile)) {
    results["polynomial_exponent"] = theorem2_rate(n_min, eta, *p).exponent;
  }
  out.samples_csv = csv.str();
  out.summary["results"] = results;
  return out;
}

using Runner = std::function<ExperimentOutput(const json&)>;

const std::map<std::string, Runner>& runners() {
  static const std::map<std::string, Runner> table = {
      {"stein_selftest", stein_selftest},
      {"return_law", return_law},
      {"count_law", count_law_experiment},
      {"periodic_counterexample", periodic_counterexample},
      {"gw_tail", gw_tail},
      {"tower_occupancy", tower_occupancy_experiment},
      {"ulam_decay", ulam_decay_experiment},
      {"bound_table", bound_table},
  };
  return table;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << bytes;
    if (!out) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, run] : runners()) v.push_back(name);
    return v;
  }();
  return names;
}

bool ExperimentOutput::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const Check& c) { return c.passed; });
}

nlohmann::json resolve_config(const std::string& experiment,
                              const nlohmann::json& config,
                              const std::filesystem::path& base_dir) {
  json out = defaults_for(experiment);
  out["experiment"] = experiment;
  if (!config.is_object()) {
    throw std::invalid_argument("config must be a JSON object");
  }
  for (const auto& [key, value] : config.items()) {
    if (key == "experiment") {
      if (value != experiment) {
        throw std::invalid_argument("config is for experiment " + value.dump());
      }
    } else if (key == "output_dir") {
      continue;
    } else if (key != "seeds" && !out.contains(key)) {
      throw std::invalid_argument("unknown config key: " + key);
    } else if (key == "thresholds") {
      for (const auto& [tk, tv] : value.items()) {
        if (!out["thresholds"].contains(tk)) {
          throw std::invalid_argument("unknown threshold: " + tk);
        }
        out["thresholds"][tk] = tv;
      }
    } else {
      out[key] = value;
    }
  }
  if (!out.contains("seeds") || !out["seeds"].is_array() ||
      out["seeds"].empty()) {
    throw std::invalid_argument("config needs a non-empty \"seeds\" list");
  }
  for (const auto& s : out["seeds"]) {
    if (!s.is_number_integer() || s.get<std::int64_t>() < 0) {
      throw std::invalid_argument("seeds must be non-negative integers");
    }
  }
  for (const char* key : {"blocks", "steps"}) {
    if (out.contains(key) && out[key].get<std::int64_t>() < 1) {
      throw std::invalid_argument(std::string(key) + " must be >= 1");
    }
  }
  if (out.contains("tower_file") && !out["tower_file"].is_null()) {
    std::filesystem::path p = out["tower_file"].get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    if (!std::filesystem::exists(p)) {
      throw std::invalid_argument("tower_file not found: " + p.string());
    }
    out["tower_file"] = p.lexically_normal().string();
  }
  return out;
}

ExperimentOutput run_experiment(const std::string& experiment,
                                const nlohmann::json& resolved) {
  const auto it = runners().find(experiment);
  if (it == runners().end()) {
    throw std::invalid_argument("unknown experiment: " + experiment);
  }
  ExperimentOutput out;
  try {
    out = it->second(resolved);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  const std::string canonical = resolved.dump();
  json summary = {{"experiment", experiment},
                  {"config", resolved},
                  {"config_sha1", git_blob_sha1(canonical)},
                  {"rng", std::string(kRngAlgorithm)},
                  {"seeds", resolved.at("seeds")}};
  summary["results"] = std::move(out.summary["results"]);
  json checks = json::array();
  for (const auto& c : out.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"passed", c.passed}});
  }
  summary["checks"] = checks;
  summary["passed"] = out.passed();
  out.summary = std::move(summary);
  return out;
}

std::string git_blob_sha1(const std::string& bytes) {
  const std::string blob =
      "blob " + std::to_string(bytes.size()) + std::string(1, '\0') + bytes;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(),
       digest);
  std::string hex;
  char buf[3];
  for (unsigned char c : digest) {
    std::snprintf(buf, sizeof buf, "%02x", c);
    hex += buf;
  }
  return hex;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_outputs(const std::filesystem::path& dir,
                   const std::string& experiment,
                   const ExperimentOutput& output) {
  std::filesystem::create_directories(dir);
  write_file(dir / (experiment + ".samples.csv"), output.samples_csv);
  write_file(dir / (experiment + ".summary.json"), output.summary.dump(2) + "\n");
}

int run_from_file(const std::string& experiment, const RunOptions& options) {
  const json raw = json::parse(read_file(options.config_path));
  json resolved =
      resolve_config(experiment, raw, options.config_path.parent_path());
  if (options.seed_override) resolved["seeds"] = {*options.seed_override};
  std::filesystem::path dir = raw.value("output_dir", std::string("out"));
  if (options.out_dir) dir = *options.out_dir;
  const auto out = run_experiment(experiment, resolved);
  write_outputs(dir, experiment, out);
  return options.check && !out.passed() ? 2 : 0;
}

}  // namespace rtlab::cli
