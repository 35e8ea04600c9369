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
#include <doctest.h>

#include "generators.hpp"
#include "leanplan/error.hpp"
#include "leanplan/metrics.hpp"

using namespace leanplan;
using leanplan::testing::Gen;

TEST_SUITE("metrics") {
  TEST_CASE("SPL edge cases") {
    CHECK_THROWS_AS(spl({}), Error);
    CHECK_THROWS_AS(spl({{1.0, -1.0, 1.0}}), Error);
    CHECK_THROWS_AS(spl({{2.0, 1.0, 1.0}}), Error);
    CHECK(spl({{1.0, 0.0, 0.0}}) == 1.0);
    CHECK(spl({{0.0, 0.0, 0.0}}) == 0.0);
    CHECK(spl({{1.0, 2.0, 4.0}}) == doctest::Approx(0.5));
    CHECK(spl({{1.0, 2.0, 1.0}}) == doctest::Approx(1.0));  // shorter than optimal is capped
  }

  TEST_CASE("SPL stays in [0, 1], equals the success rate on optimal paths, and is order-free") {
    Gen g(17);
    for (int trial = 0; trial < 200; ++trial) {
      std::vector<NavSample> xs;
      std::vector<NavSample> optimal;
      double successes = 0.0;
      const int n = g.range(1, 20);
      for (int i = 0; i < n; ++i) {
        const double l = g.unit() * 10.0;
        const double s = g.coin() ? 1.0 : 0.0;
        xs.push_back({s, l, l + g.unit() * 5.0});
        optimal.push_back({s, l, l});
        successes += s;
      }
      const double v = spl(xs);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(spl(optimal) == doctest::Approx(successes / n));
      auto shuffled = xs;
      std::shuffle(shuffled.begin(), shuffled.end(), g.engine());
      CHECK(spl(shuffled) == doctest::Approx(v));
      CHECK(v <= successes / n + 1e-12);
    }
  }

  TEST_CASE("FLOPs token law reproduces the component cells") {
    const ComponentCostModel m;
    CHECK(flops_token_model(m.llm_params_millions, m.prompt_tokens) == 26064.0);
    CHECK(flops_token_model(m.llm_params_millions, m.fb1_tokens) == 1056.0);
    CHECK(flops_token_model(m.llm_params_millions, m.fb2_tokens) == 144.0);
    CHECK(flops_token_model(m.vlm_params_millions, m.vlm_side_tokens) == 10710.0);
    CHECK(flops_token_model(m.vlm_params_millions, m.vlm_describe_tokens) == 8862.0);
  }

  TEST_CASE("episode cost and latency from counters") {
    EpisodeSummary e;
    e.planner_calls = {{"prompt", 600, 80}, {"fb1", 30, 20}, {"fb2", 5, 20}, {"reprompt", 5, 10}};
    e.vlm_calls = {"side", "describe"};
    e.counters.llm_calls = 4;
    e.counters.vlm_calls = 2;
    e.counters.navigate_calls = 2;
    e.counters.pick_attempts = 1;
    e.counters.place_attempts = 1;
    const CostBreakdown c = episode_cost(e);
    CHECK(c.c_plan == doctest::Approx(26064.0 + 1056.0 + 144.0 + 144.0));
    CHECK(c.c_vlm == doctest::Approx(10710.0 + 8862.0));
    CHECK(c.c_grasp == doctest::Approx(837.6));
    CHECK(c.peak == 26064.0);

    ComponentCostModel measured;
    measured.source = TokenSource::kMeasured;
    CHECK(episode_cost(e, measured).c_plan == doctest::Approx(6.0 * 8.0 * (600 + 30 + 5 + 5)));

    const LatencyBreakdown l = episode_latency(e);
    CHECK(l.t_planner == doctest::Approx(4 * 3.18));
    CHECK(latency_total(l) == doctest::Approx(4 * 3.18 + 2 * 106.02 + 2 * 10.41 + 230.17 + 43.92));
  }

  TEST_CASE("success rates and run-set statistics") {
    EpisodeSummary a;
    a.success = true;
    a.ideal = true;
    a.samples = {{1.0, 1.0, 1.0}};
    EpisodeSummary b;
    b.ideal = true;
    b.samples = {{0.0, 1.0, 3.0}};
    const SuccessRates r = success_rates({a, b});
    CHECK(r.ideal == 1.0);
    CHECK(r.execute == 0.5);
    const RunSetStats s = run_set_stats("x", {a, b});
    CHECK(s.spl_samples == 2);
    CHECK(*s.spl == doctest::Approx(0.5));
    CHECK_THROWS_AS(success_rates({}), Error);
  }

  TEST_CASE("ablation report carries diffs after the first set") {
    EpisodeSummary a;
    a.success = true;
    a.counters.vlm_calls = 4;
    EpisodeSummary b;
    b.counters.vlm_calls = 1;
    const Report r = ablation_report({{"base", {a}}, {"variant", {b}}});
    REQUIRE(r.json["run_sets"].size() == 2);
    CHECK_FALSE(r.json["run_sets"][0].contains("diff"));
    CHECK(r.json["run_sets"][1]["diff"]["sr_execute"] == -1.0);
    CHECK(r.json["run_sets"][1]["diff"]["vlm_calls"] == -3);
    CHECK(r.text.find("variant") != std::string::npos);
  }
}
