/*
 * Copyright 2026 The bosonwalk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <benchmark/benchmark.h>

#include "bosonwalk/control.hpp"

namespace {

using namespace bosonwalk;

void evaluate(benchmark::State& state, ControlFamily family, GradientMethod method) {
  const Index d = state.range(0);
  const LatticeModel model = model_for_dimension(family, d);
  GrapeConfig config;
  config.seed = 1;
  const ControlWaveform wf = initial_waveform(model, config);
  const UnitaryMatrix target = haar_unitary(d, RngSeed{2});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_fidelity(model, wf, target, method).fidelity);
  state.counters["params"] = static_cast<double>(wf.parameters().size());
}

void BM_SpinorAnalyticGradient(benchmark::State& state) {
  evaluate(state, ControlFamily::kSpinor, GradientMethod::kAnalytic);
}
BENCHMARK(BM_SpinorAnalyticGradient)->Arg(4)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_MicroscopeAnalyticGradient(benchmark::State& state) {
  evaluate(state, ControlFamily::kMicroscope, GradientMethod::kAnalytic);
}
BENCHMARK(BM_MicroscopeAnalyticGradient)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_MicroscopeFiniteDifference(benchmark::State& state) {
  evaluate(state, ControlFamily::kMicroscope, GradientMethod::kFiniteDifference);
}
BENCHMARK(BM_MicroscopeFiniteDifference)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_GrapeSpinorD8(benchmark::State& state) {
  const LatticeModel model = model_for_dimension(ControlFamily::kSpinor, 8);
  const UnitaryMatrix target = haar_unitary(8, RngSeed{3});
  GrapeConfig config;
  config.seed = 4;
  for (auto _ : state) benchmark::DoNotOptimize(grape_optimize(model, target, config).infidelity);
}
BENCHMARK(BM_GrapeSpinorD8)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
