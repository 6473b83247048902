// Copyright 2026 The geodual Authors
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

#include "geodual/duality.hpp"
#include "geodual/parser.hpp"

using namespace geodual;

namespace {

TheoryPtr theory(const char* text) { return std::make_shared<const Theory>(parse_theory(text)); }

TheoryPtr symmetric() { return theory("rel E/2\naxiom E(x,y) |- [x,y] E(y,x)\n"); }

void BM_ModelClass(benchmark::State& state) {
  const auto T = symmetric();
  const IndexSet S(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_model_class(T, S).iso_count());
}
BENCHMARK(BM_ModelClass)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_ModelGroupoid(benchmark::State& state) {
  const auto mc = std::make_shared<const ModelClass>(
      build_model_class(symmetric(), IndexSet(static_cast<int>(state.range(0)))));
  for (auto _ : state) benchmark::DoNotOptimize(build_model_groupoid(mc).groupoid);
}
BENCHMARK(BM_ModelGroupoid)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_StableOpens(benchmark::State& state) {
  const auto g = mod_functor(theory(""), IndexSet(2));
  const auto U = pullback_sheaf(g.over, generic_sheaf(g.sets));
  const auto P = fiber_power(U, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(stable_open_sets(P).size());
}
BENCHMARK(BM_StableOpens)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_Counit(benchmark::State& state) {
  const auto g = mod_functor(theory(""), IndexSet(2));
  for (auto _ : state) {
    const auto C = syntactic_category(g.models, 1, 3);
    const auto F = form_functor(g, 1);
    benchmark::DoNotOptimize(counit(C, F).outcome);
  }
}
BENCHMARK(BM_Counit)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
