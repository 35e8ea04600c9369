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
#include <cstdio>

#include "leanplan/metrics.hpp"

namespace leanplan {

namespace {

using ojson = nlohmann::ordered_json;

ojson stats_json(const RunSetStats& s) {
  ojson j;
  j["label"] = s.label;
  j["episodes"] = s.episodes;
  j["sr_ideal"] = s.rates.ideal;
  j["sr_execute"] = s.rates.execute;
  j["spl"] = s.spl ? ojson(*s.spl) : ojson(nullptr);
  j["spl_samples"] = s.spl_samples;
  j["latency"] = {{"t_planner", s.latency.t_planner}, {"t_navi", s.latency.t_navi}, {"t_vlm", s.latency.t_vlm},
                  {"t_grasp", s.latency.t_grasp}, {"t_place", s.latency.t_place},
                  {"total", latency_total(s.latency)}};
  j["cost_gflops"] = {{"c_plan", s.cost.c_plan}, {"c_navi", s.cost.c_navi}, {"c_vlm", s.cost.c_vlm},
                      {"c_grasp", s.cost.c_grasp}, {"c_place", s.cost.c_place}, {"total", s.cost.total()},
                      {"peak", s.cost.peak}};
  j["calls"] = {{"llm", s.calls.llm_calls},
                {"vlm", s.calls.vlm_calls},
                {"vlm_describe", s.calls.vlm_describe_calls},
                {"navigate", s.calls.navigate_calls},
                {"replans", s.calls.replans},
                {"pick", s.calls.pick_attempts},
                {"place", s.calls.place_attempts},
                {"retries", s.calls.retries}};
  return j;
}

ojson diff_json(const RunSetStats& s, const RunSetStats& base) {
  ojson j;
  j["sr_ideal"] = s.rates.ideal - base.rates.ideal;
  j["sr_execute"] = s.rates.execute - base.rates.execute;
  j["spl"] = (s.spl && base.spl) ? ojson(*s.spl - *base.spl) : ojson(nullptr);
  j["latency_total"] = latency_total(s.latency) - latency_total(base.latency);
  j["llm_calls"] = s.calls.llm_calls - base.calls.llm_calls;
  j["vlm_calls"] = s.calls.vlm_calls - base.calls.vlm_calls;
  j["vlm_describe_calls"] = s.calls.vlm_describe_calls - base.calls.vlm_describe_calls;
  return j;
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

}  // namespace

Report ablation_report(const std::vector<std::pair<std::string, std::vector<EpisodeSummary>>>& run_sets,
                       const ComponentCostModel& cost, const LatencyModel& latency) {
  Report r;
  r.json["run_sets"] = ojson::array();
  std::vector<RunSetStats> stats;
  for (const auto& [label, episodes] : run_sets) stats.push_back(run_set_stats(label, episodes, cost, latency));

  std::string& t = r.text;
  t += pad("run set", 28) + pad("n", 5) + pad("SR ideal", 10) + pad("SR exec", 10) + pad("SPL", 9) +
       pad("latency s", 11) + pad("LLM", 6) + pad("VLM", 6) + pad("describe", 10) + "peak GFLOPs\n";
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto& s = stats[i];
    ojson j = stats_json(s);
    if (i > 0) j["diff"] = diff_json(s, stats.front());
    r.json["run_sets"].push_back(std::move(j));
    t += pad(s.label, 28) + pad(std::to_string(s.episodes), 5) + pad(fixed(s.rates.ideal, 2), 10) +
         pad(fixed(s.rates.execute, 2), 10) + pad(s.spl ? fixed(*s.spl, 4) : "-", 9) +
         pad(fixed(latency_total(s.latency), 2), 11) + pad(std::to_string(s.calls.llm_calls), 6) +
         pad(std::to_string(s.calls.vlm_calls), 6) + pad(std::to_string(s.calls.vlm_describe_calls), 10) +
         fixed(s.cost.peak, 1) + "\n";
  }
  for (std::size_t i = 1; i < stats.size(); ++i) {
    const auto& s = stats[i];
    const auto& b = stats.front();
    t += "diff " + s.label + " - " + b.label + ": SR exec " + fixed(s.rates.execute - b.rates.execute, 2) +
         ", SPL " + ((s.spl && b.spl) ? fixed(*s.spl - *b.spl, 4) : "-") + ", latency " +
         fixed(latency_total(s.latency) - latency_total(b.latency), 2) + " s, VLM calls " +
         std::to_string(s.calls.vlm_calls - b.calls.vlm_calls) + "\n";
  }
  return r;
}

}  // namespace leanplan
