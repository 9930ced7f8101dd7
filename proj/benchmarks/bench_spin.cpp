// Copyright 2026 The kipa-esr Authors
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

#include <benchmark/benchmark.h>

#include "kipa/constants.hpp"
#include "kipa/spin.hpp"

namespace {

using namespace kipa;

const TransitionSelector kProbe{StateLabel::of(4, -4), StateLabel::of(5, -5)};

void BM_Solve(benchmark::State& state) {
  const SpinSystem sys = bismuth209();
  for (auto _ : state) benchmark::DoNotOptimize(solve(sys, 6.78e-3));
}
BENCHMARK(BM_Solve);

void BM_Transitions(benchmark::State& state) {
  const SpinSystem sys = bismuth209();
  const EigenSolution sol = solve(sys, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(transitions(sys, sol, SpinOperator::Sx));
}
BENCHMARK(BM_Transitions);

void BM_ResonantField(benchmark::State& state) {
  const SpinSystem sys = bismuth209();
  for (auto _ : state) benchmark::DoNotOptimize(resonant_field(sys, kProbe, rad(7.203e9)));
}
BENCHMARK(BM_ResonantField)->Unit(benchmark::kMillisecond);

// Crossing search over the default spectrum range; items are grid points.
void BM_Crossings(benchmark::State& state) {
  const SpinSystem sys = bismuth209();
  for (auto _ : state) benchmark::DoNotOptimize(find_crossings(sys, SpinOperator::Sx, rad(7.2e9), 0.0, 0.37, 5e-4));
  state.SetItemsProcessed(state.iterations() * 741);
}
BENCHMARK(BM_Crossings)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
