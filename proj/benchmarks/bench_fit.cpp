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

#include <cmath>
#include <random>

#include "kipa/echo.hpp"
#include "kipa/fit.hpp"

namespace {

using namespace kipa;

void BM_FitLorentzian(benchmark::State& state) {
  std::mt19937 rng(3);
  std::normal_distribution<double> n(0.0, 0.01);
  std::vector<double> x, y;
  for (int k = 0; k <= 200; ++k) {
    x.push_back(6.5e-3 + 0.5e-3 * k / 200);
    y.push_back(lorentzian(x.back(), 6.76e-3, 0.1e-3, 1.0, 0.05) + n(rng));
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_lorentzian(x, y));
}
BENCHMARK(BM_FitLorentzian)->Unit(benchmark::kMicrosecond);

void BM_FitSnrVsGain(benchmark::State& state) {
  std::vector<double> G, s;
  for (double db = 0; db <= 30; db += 1) {
    G.push_back(std::pow(10.0, db / 20));
    s.push_back(snr_vs_gain(G.back(), 0.01, 1 / 22.1));
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_snr_vs_gain(G, s));
}
BENCHMARK(BM_FitSnrVsGain)->Unit(benchmark::kMicrosecond);

void BM_EchoSnr(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(4);
  std::normal_distribution<double> g(0.0, 1.0);
  Trace sig, blank;
  for (int k = 0; k < n; ++k) {
    const double t = 20e-6 * k / n;
    const double e = (t > 8e-6 && t < 12e-6) ? 2.0 : 0.0;
    sig.t.push_back(t);
    sig.I.push_back(e + g(rng));
    sig.Q.push_back(g(rng));
    blank.t.push_back(t);
    blank.I.push_back(g(rng));
    blank.Q.push_back(g(rng));
  }
  for (auto _ : state) benchmark::DoNotOptimize(echo_snr(sig, blank, 8e-6, 12e-6));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EchoSnr)->Arg(2000)->Arg(20000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
