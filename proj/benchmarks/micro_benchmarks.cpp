// Copyright 2026 The leanplan Authors
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

#include <string>

#include "leanplan/bench.hpp"
#include "leanplan/grid_search.hpp"
#include "leanplan/memory.hpp"
#include "leanplan/plan_codec.hpp"
#include "leanplan/prompt.hpp"

namespace {

using namespace leanplan;

void BM_ShortestPathAcrossWarehouse(benchmark::State& state) {
  const SceneMap scene = canonical_scene();
  const Site* far = scene.find_site("purchase table");
  const Cell goal = far->approach.begin()->second.cell;
  for (auto _ : state) {
    benchmark::DoNotOptimize(shortest_path(scene.grid, scene.robot.cell, goal));
  }
}
BENCHMARK(BM_ShortestPathAcrossWarehouse);

void BM_DistanceField(benchmark::State& state) {
  const SceneMap scene = canonical_scene();
  for (auto _ : state) {
    DistanceField f(scene.grid, scene.robot.cell);
    benchmark::DoNotOptimize(f.steps({63, 63}));
  }
}
BENCHMARK(BM_DistanceField);

void BM_ParseInitialPlan(benchmark::State& state) {
  Plan p;
  p.reasoning = "move three objects";
  for (const char* site : {"drink table", "toy rack", "fruit table"}) {
    p.subtasks.push_back({std::string("fetch from ") + site,
                          {navigate_to(site), pick_object("apple"), navigate_to("shipping table"), place_held()}});
  }
  p.first_action = navigate_to("drink table");
  const std::string text = "Here is the plan:\n" + encode_plan(p) + "\nGood luck.";
  for (auto _ : state) benchmark::DoNotOptimize(parse_initial_plan(text));
}
BENCHMARK(BM_ParseInitialPlan);

void BM_StmRetrieve(benchmark::State& state) {
  HashedBagOfWords embedder;
  ShortTermStore store(embedder);
  const SceneMap scene = canonical_scene();
  const auto n = static_cast<int>(state.range(0));
  for (int i = 0; i < n; ++i) {
    const auto& obj = scene.objects[static_cast<std::size_t>(i) % scene.objects.size()];
    const auto& site = scene.sites[static_cast<std::size_t>(i) % scene.sites.size()];
    store.upsert(obj.name + " " + std::to_string(i), site.name, Side::kClose, "a " + obj.attribute("color") + " object",
                 i);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(store.retrieve("find the yellow banana and place it on the dining table"));
  }
}
BENCHMARK(BM_StmRetrieve)->Arg(10)->Arg(100)->Arg(1000);

void BM_RenderPrompt(benchmark::State& state) {
  const SceneMap scene = canonical_scene();
  for (auto _ : state) {
    benchmark::DoNotOptimize(render_initial_prompt("find lemon and put it on the drink table", scene, {}));
  }
}
BENCHMARK(BM_RenderPrompt);

void BM_OracleEpisode(benchmark::State& state) {
  Suite one = builtin_suite("level1");
  one.tasks.resize(1);
  RunConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(run_suite(one, cfg));
}
BENCHMARK(BM_OracleEpisode)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
