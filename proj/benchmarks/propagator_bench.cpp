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

#include "bosonwalk/lattice.hpp"
#include "bosonwalk/sampling.hpp"

namespace {

using namespace bosonwalk;

void BM_RingPropagatorFft(benchmark::State& state) {
  const UniformRing ring{state.range(0), 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(ring_propagator(ring, 80.0).matrix().data());
}
BENCHMARK(BM_RingPropagatorFft)->Arg(64)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_RingPropagatorDense(benchmark::State& state) {
  const UniformRing ring{state.range(0), 1.0};
  const ComplexMatrix h = ring_hamiltonian(ring);
  for (auto _ : state) benchmark::DoNotOptimize(expm_hermitian(h, 80.0).matrix().data());
}
BENCHMARK(BM_RingPropagatorDense)->Arg(64)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_ExactDistribution(benchmark::State& state) {
  const Index m = state.range(0);
  const UnitaryMatrix u = ring_propagator({m, 1.0}, 2.0);
  std::vector<Index> occupied;
  for (Index p = 0; p < state.range(1); ++p) occupied.push_back(2 * p);
  const FockState in = FockState::from_modes(m, occupied);
  for (auto _ : state) benchmark::DoNotOptimize(exact_distribution(u, in).size());
}
BENCHMARK(BM_ExactDistribution)->Args({8, 3})->Args({12, 4})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
