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

#include <vector>

#include <benchmark/benchmark.h>

#include "rtlab/counting.hpp"
#include "rtlab/mixing.hpp"
#include "rtlab/stein.hpp"
#include "rtlab/tower.hpp"

namespace {

using namespace rtlab;

void BM_HarvestFirstReturn(benchmark::State& state) {
  const Word w = parse_word("0001011011");
  const auto blocks = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 1;
  std::size_t steps = 0;
  for (auto _ : state) {
    const auto h = harvest_return_times(DoublingSource{}, w, 1, blocks, seed++, true);
    for (auto t : h.tau[0]) steps += t;
    benchmark::DoNotOptimize(h.tau.data());
  }
  state.counters["steps/s"] =
      benchmark::Counter(static_cast<double>(steps), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_HarvestFirstReturn)->Arg(1000)->Arg(10000);

void BM_SteinSolve(benchmark::State& state) {
  std::vector<std::size_t> event;
  for (std::size_t i = 0; i < 60; i += 3) event.push_back(i);
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(stein_solve(t, event, 10000).f(1));
  }
}
BENCHMARK(BM_SteinSolve)->Arg(1)->Arg(20);

void BM_UlamDoubling(benchmark::State& state) {
  const auto bins = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    const auto op = ulam_build(UlamMap::kDoubling, bins);
    benchmark::DoNotOptimize(ulam_stationary(op).data());
  }
}
BENCHMARK(BM_UlamDoubling)->Arg(1024)->Arg(4096);

void BM_UlamGaspardWang(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ulam_build(UlamMap::kGaspardWang, 1024, 0.5).rows.data());
  }
}
BENCHMARK(BM_UlamGaspardWang);

void BM_GwLadder(benchmark::State& state) {
  const auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gw_ladder(0.5, depth).boundaries.data());
  }
}
BENCHMARK(BM_GwLadder)->Arg(10000)->Arg(100000);

void BM_TowerOccupancy(benchmark::State& state) {
  const auto spec = gw_tower(0.25, 10000);
  std::uint64_t seed = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(tower_occupancy(spec, 1'000'000, seed++).data());
  }
  state.SetItemsProcessed(state.iterations() * 1'000'000);
}
BENCHMARK(BM_TowerOccupancy);

void BM_AlphaEmpirical(benchmark::State& state) {
  const auto chain = markov_model(Matrix{{0.9, 0.1}, {0.2, 0.8}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(alpha_empirical(chain, 4, 3));
  }
}
BENCHMARK(BM_AlphaEmpirical);

}  // namespace

BENCHMARK_MAIN();
