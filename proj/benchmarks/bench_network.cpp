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
#include "kipa/field_model.hpp"
#include "kipa/network.hpp"
#include "kipa/reference_device.hpp"
#include "kipa/sensitivity.hpp"

namespace {

using namespace kipa;
namespace ref = kipa::reference;

SifNetwork reference() { return reference_sif(ref::kEpsR, ref::kLk0Sq, rad(ref::kSifDesignHz), ref::kPortZ0); }

void BM_CpwParams(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(cpw_params(1e-6, 10e-6, 11.9, 3.5e-12, 1.75e-3));
}
BENCHMARK(BM_CpwParams);

void BM_SifSweep(benchmark::State& state) {
  const SifNetwork net = reference();
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    double acc = 0.0;
    for (int k = 1; k <= n; ++k) acc += std::abs(s21(net, rad(20e9 * k / n), net.Z0));
    benchmark::DoNotOptimize(acc);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SifSweep)->Arg(2000);

void BM_BetaB(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(pulse_overlap(rad(2.55e6), rad(0.5e6), ref::kQL, rad(ref::kFEsrHz), ref::kPulseDuration));
}
BENCHMARK(BM_BetaB)->Unit(benchmark::kMicrosecond);

void BM_AnalyticFieldMap(benchmark::State& state) {
  const SifNetwork net = reference();
  const CpwLine res = cpw_params(ref::kResonatorW, ref::kResonatorGap, ref::kEpsR, ref::kLk0Sq, ref::kResonatorLength);
  for (auto _ : state) benchmark::DoNotOptimize(analytic_field_map(DeviceLayout{res, net.segments, true}));
}
BENCHMARK(BM_AnalyticFieldMap)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
