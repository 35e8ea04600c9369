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
#include "leanplan/metrics.hpp"

#include <algorithm>

#include "leanplan/error.hpp"

namespace leanplan {

double spl(const std::vector<NavSample>& samples) {
  if (samples.empty()) throw Error(ErrorCode::kEmptyInput, "SPL needs at least one sample");
  double sum = 0.0;
  for (const auto& x : samples) {
    if (x.l < 0.0 || x.p < 0.0 || x.s < 0.0 || x.s > 1.0) {
      throw Error(ErrorCode::kInvalidConfig, "SPL sample out of range");
    }
    const double denom = std::max(x.p, x.l);
    sum += denom == 0.0 ? x.s : x.s * x.l / denom;
  }
  return sum / static_cast<double>(samples.size());
}

double flops_token_model(double params_millions, double tokens) { return 6.0 * (params_millions / 1000.0) * tokens; }

CostBreakdown episode_cost(const EpisodeSummary& e, const ComponentCostModel& m) {
  CostBreakdown c;
  auto note = [&c](double x) { c.peak = std::max(c.peak, x); };
  for (const auto& call : e.planner_calls) {
    double tokens = 0.0;
    if (m.source == TokenSource::kMeasured) {
      tokens = static_cast<double>(call.prompt_tokens);
    } else if (call.kind == "prompt") {
      tokens = m.prompt_tokens;
    } else if (call.kind == "fb1") {
      tokens = m.fb1_tokens;
    } else {
      tokens = m.fb2_tokens;
    }
    const double f = flops_token_model(m.llm_params_millions, tokens);
    c.c_plan += f;
    note(f);
  }
  for (const auto& kind : e.vlm_calls) {
    const double f =
        flops_token_model(m.vlm_params_millions, kind == "side" ? m.vlm_side_tokens : m.vlm_describe_tokens);
    c.c_vlm += f;
    note(f);
  }
  c.c_navi = m.navi_gflops * e.counters.navigate_calls;
  if (e.counters.navigate_calls > 0) note(m.navi_gflops);
  c.c_grasp = m.grasp_gflops * e.counters.pick_attempts;
  if (e.counters.pick_attempts > 0) note(m.grasp_gflops);
  c.c_place = m.place_gflops * e.counters.place_attempts;
  if (e.counters.place_attempts > 0) note(m.place_gflops);
  return c;
}

double latency_total(const LatencyBreakdown& b) { return b.t_planner + b.t_navi + b.t_vlm + b.t_grasp + b.t_place; }

LatencyBreakdown episode_latency(const EpisodeSummary& e, const LatencyModel& m) {
  LatencyBreakdown b;
  b.t_planner = m.planner * e.counters.llm_calls;
  b.t_navi = m.navi * e.counters.navigate_calls;
  b.t_vlm = m.vlm * e.counters.vlm_calls;
  b.t_grasp = m.grasp * e.counters.pick_attempts;
  b.t_place = m.place * e.counters.place_attempts;
  return b;
}

SuccessRates success_rates(const std::vector<EpisodeSummary>& episodes) {
  if (episodes.empty()) throw Error(ErrorCode::kEmptyInput, "no episodes");
  SuccessRates r;
  for (const auto& e : episodes) {
    r.ideal += e.ideal ? 1.0 : 0.0;
    r.execute += e.success ? 1.0 : 0.0;
  }
  r.ideal /= static_cast<double>(episodes.size());
  r.execute /= static_cast<double>(episodes.size());
  return r;
}

RunSetStats run_set_stats(std::string label, const std::vector<EpisodeSummary>& episodes,
                          const ComponentCostModel& cost, const LatencyModel& latency) {
  RunSetStats s;
  s.label = std::move(label);
  s.rates = success_rates(episodes);
  s.episodes = static_cast<int>(episodes.size());
  std::vector<NavSample> pooled;
  for (const auto& e : episodes) {
    pooled.insert(pooled.end(), e.samples.begin(), e.samples.end());
    const LatencyBreakdown l = episode_latency(e, latency);
    s.latency.t_planner += l.t_planner;
    s.latency.t_navi += l.t_navi;
    s.latency.t_vlm += l.t_vlm;
    s.latency.t_grasp += l.t_grasp;
    s.latency.t_place += l.t_place;
    const CostBreakdown c = episode_cost(e, cost);
    s.cost.c_plan += c.c_plan;
    s.cost.c_navi += c.c_navi;
    s.cost.c_vlm += c.c_vlm;
    s.cost.c_grasp += c.c_grasp;
    s.cost.c_place += c.c_place;
    s.cost.peak = std::max(s.cost.peak, c.peak);
    s.calls.llm_calls += e.counters.llm_calls;
    s.calls.vlm_calls += e.counters.vlm_calls;
    s.calls.vlm_describe_calls += e.counters.vlm_describe_calls;
    s.calls.navigate_calls += e.counters.navigate_calls;
    s.calls.replans += e.counters.replans;
    s.calls.pick_attempts += e.counters.pick_attempts;
    s.calls.place_attempts += e.counters.place_attempts;
    s.calls.retries += e.counters.retries;
  }
  const double n = static_cast<double>(episodes.size());
  for (double* x : {&s.latency.t_planner, &s.latency.t_navi, &s.latency.t_vlm, &s.latency.t_grasp, &s.latency.t_place,
                    &s.cost.c_plan, &s.cost.c_navi, &s.cost.c_vlm, &s.cost.c_grasp, &s.cost.c_place}) {
    *x /= n;
  }
  s.spl_samples = static_cast<int>(pooled.size());
  if (!pooled.empty()) s.spl = spl(pooled);
  return s;
}

}  // namespace leanplan
