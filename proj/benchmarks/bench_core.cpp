// Copyright 2026 The poptransfer Authors
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

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "poptransfer/analysis.hpp"
#include "poptransfer/integrator.hpp"
#include "poptransfer/spectral.hpp"

namespace {

using namespace poptransfer;

void BM_EigenDecompose(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto w = build_coupling(design_transfer(n, 1).system());
  for (auto _ : state) benchmark::DoNotOptimize(eigen_decompose(w));
}
BENCHMARK(BM_EigenDecompose)->Arg(4)->Arg(10)->Arg(100);

void BM_PropagateState(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = design_transfer(n, 1);
  const auto es = eigen_decompose(build_coupling(d.system()));
  const auto start = AmplitudeVector::basis(n, 0);
  for (auto _ : state) benchmark::DoNotOptimize(propagate_state(es, d.area, start));
}
BENCHMARK(BM_PropagateState)->Arg(4)->Arg(10)->Arg(100);

void BM_Propagator(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = design_transfer(n, 1);
  const auto es = eigen_decompose(build_coupling(d.system()));
  for (auto _ : state) benchmark::DoNotOptimize(propagator(es, d.area));
}
BENCHMARK(BM_Propagator)->Arg(10)->Arg(100);

void BM_IntegrateDesign(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = design_transfer(n, 1);
  const Pulse p(CosinePulse{1.0, 1.0 / (1.05 * d.area)});
  IntegratorConfig cfg;
  cfg.t_end = invert_area(p, d.area);
  cfg.sample_stride = 100;
  for (auto _ : state) benchmark::DoNotOptimize(integrate(d.system(), p, cfg));
}
BENCHMARK(BM_IntegrateDesign)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_LeakageScan(benchmark::State& state) {
  std::vector<double> ratios;
  for (int i = 0; i < 8; ++i) ratios.push_back(0.01 * std::pow(10.0, i / 7.0));
  LeakageScanOptions opts;
  opts.parallel = state.range(0) != 0;
  for (auto _ : state) benchmark::DoNotOptimize(leakage_scan(4, 1, 1.0, ratios, opts));
}
BENCHMARK(BM_LeakageScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
