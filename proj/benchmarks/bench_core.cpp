// Copyright 2026 The milpeq authors
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

#include "generators.hpp"
#include "milpeq/equivalence.hpp"
#include "milpeq/lp_format.hpp"
#include "milpeq/sd.hpp"

using namespace milpeq;

namespace {

void BM_wl_refinement(benchmark::State& state) {
  Instance inst = testgen::synthetic_sd_instance(
      static_cast<int>(state.range(0)), 1234);
  BipartiteGraph g = encode(inst);
  for (auto _ : state) {
    Coloring coloring = run_wl(g);
    benchmark::DoNotOptimize(coloring.num_colors);
  }
}
BENCHMARK(BM_wl_refinement)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000);

void BM_check_permuted(benchmark::State& state) {
  Instance inst = testgen::synthetic_sd_instance(
      static_cast<int>(state.range(0)), 77);
  Instance partner = apply_permutation(
      inst, random_permutation(inst.num_vars, 1),
      random_permutation(inst.num_constraints(), 2));
  for (auto _ : state) {
    EquivalenceReport report = check_equivalence(inst, partner);
    benchmark::DoNotOptimize(report.guaranteed);
  }
}
BENCHMARK(BM_check_permuted)->Arg(500)->Arg(1000)->Arg(2000)->Arg(4000);

void BM_sd_detection_bin_packing(benchmark::State& state) {
  const int bins = static_cast<int>(state.range(0));
  std::vector<long> sizes;
  for (int i = 0; i < 6; ++i) sizes.push_back(1 + 3 * i);
  Instance inst = testgen::bin_packing(bins, 6, sizes, 100);
  BipartiteGraph g = encode(inst);
  Coloring coloring = run_wl(g);
  StablePartition partition = stable_partition(g, coloring, 0);
  for (auto _ : state) {
    SdReport report =
        detect_symmetric_decomposable(g, coloring, 0, partition);
    benchmark::DoNotOptimize(report.is_sd);
  }
}
BENCHMARK(BM_sd_detection_bin_packing)->Arg(8)->Arg(32)->Arg(128);

void BM_parse_lp(benchmark::State& state) {
  Instance inst = testgen::synthetic_sd_instance(
      static_cast<int>(state.range(0)), 5150);
  std::string text = write_lp(inst);
  for (auto _ : state) {
    LpDocument doc = parse_lp(text);
    benchmark::DoNotOptimize(doc.ok());
  }
}
BENCHMARK(BM_parse_lp)->Arg(500)->Arg(2000);

void BM_brute_force_oracle(benchmark::State& state) {
  Rng rng(31);
  Instance inst = testgen::random_small_instance(rng, 6, 6);
  Instance partner = apply_permutation(
      inst, random_permutation(inst.num_vars, 3),
      random_permutation(inst.num_constraints(), 4));
  for (auto _ : state) {
    auto verdict = brute_force_isomorphic(inst, partner);
    benchmark::DoNotOptimize(verdict.has_value());
  }
}
BENCHMARK(BM_brute_force_oracle);

}  // namespace

BENCHMARK_MAIN();
