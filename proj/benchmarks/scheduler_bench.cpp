// Copyright 2026 The DreamSched Authors
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

#include "dreamsched/cost_model.hpp"
#include "dreamsched/profile.hpp"
#include "dreamsched/scheduler.hpp"
#include "dreamsched/simulator.hpp"

namespace {

using namespace dreamsched;

void BM_ScheduleDfs(benchmark::State& state) {
  const auto profile =
      synth_profile(static_cast<int>(state.range(0)), 7, Regime::kBalanced);
  for (auto _ : state) {
    benchmark::DoNotOptimize(schedule_dfs(profile, 5).best_cost);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ScheduleDfs)->DenseRange(10, 60, 10)->Complexity();

void BM_ScheduleBruteForce(benchmark::State& state) {
  const auto profile =
      synth_profile(static_cast<int>(state.range(0)), 7, Regime::kBalanced);
  for (auto _ : state) {
    benchmark::DoNotOptimize(schedule_brute_force(profile, 5).best_cost);
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ScheduleBruteForce)->DenseRange(10, 30, 5)->Complexity();

void BM_PeriodObjective(benchmark::State& state) {
  const auto profile =
      synth_profile(static_cast<int>(state.range(0)), 11, Regime::kCommHeavy);
  const auto schedule =
      Schedule::equal_number_partition(profile.layer_count(), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(period_objective(schedule, profile).objective);
  }
}
BENCHMARK(BM_PeriodObjective)->Arg(30)->Arg(120);

void BM_SimulatePlsgdPeriod(benchmark::State& state) {
  const auto profile =
      synth_profile(static_cast<int>(state.range(0)), 11, Regime::kCommHeavy);
  const auto schedule =
      Schedule::equal_number_partition(profile.layer_count(), 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_run(profile, Mode::kPlsgd, schedule, 5).makespan);
  }
}
BENCHMARK(BM_SimulatePlsgdPeriod)->Arg(30)->Arg(120);

}  // namespace

BENCHMARK_MAIN();
