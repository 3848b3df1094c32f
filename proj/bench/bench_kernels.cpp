// Copyright 2026 The estlab Authors
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

// Parallel kernels against their serial reference formulations.

#include <benchmark/benchmark.h>

#include <vector>

#include "estlab/collapse.hpp"
#include "estlab/kernels.hpp"

namespace {

using namespace estlab;

PauliTermSum transverse(int env_spins) { return build_hamiltonian({ModelKind::TransverseCoupled, env_spins, 1.0, {}}); }

StateVector test_state(int sites) {
  CounterRng rng(3, 0);
  return StateVector::random(sites, rng);
}

void BM_ApplyParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto h = transverse(n);
  const auto psi = test_state(n + 1);
  std::vector<Complex> out(psi.dimension());
  for (auto _ : state) {
    apply_operator_into(h, psi.amplitudes(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(psi.dimension()));
}

void BM_ApplyReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto h = transverse(n);
  const auto psi = test_state(n + 1);
  std::vector<Complex> out(psi.dimension());
  for (auto _ : state) {
    reference::apply_operator_into(h, psi.amplitudes(), out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(psi.dimension()));
}

ScanOptions grid_options(int points) {
  ScanOptions opts;
  opts.theta_points = points;
  opts.phi_points = points;
  return opts;
}

void BM_ScanGridParallel(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Propagator prop(transverse(n));
  const auto psi = prop.evolve(StateVector::plus_state(n + 1), 0.5);
  const auto opts = grid_options(16);
  for (auto _ : state) {
    const BasisObjective objective(psi, prop, opts.acceleration);
    benchmark::DoNotOptimize(scan_grid(objective, opts).data());
  }
}

void BM_ScanGridReference(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Propagator prop(transverse(n));
  const auto psi = prop.evolve(StateVector::plus_state(n + 1), 0.5);
  const auto opts = grid_options(16);
  for (auto _ : state) benchmark::DoNotOptimize(reference::scan_grid_serial(psi, prop, opts).data());
}

}  // namespace

BENCHMARK(BM_ApplyParallel)->Arg(8)->Arg(14)->Arg(18);
BENCHMARK(BM_ApplyReference)->Arg(8)->Arg(14)->Arg(18);
BENCHMARK(BM_ScanGridParallel)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ScanGridReference)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
