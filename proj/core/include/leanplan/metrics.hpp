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
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "leanplan/executor.hpp"

namespace leanplan {

/// (1/N) sum S_i * l_i / max(p_i, l_i); a sample with l = p = 0 contributes
/// S_i. Throws Error(kEmptyInput) for no samples and Error(kInvalidConfig)
/// for negative lengths or S outside [0, 1].
double spl(const std::vector<NavSample>& samples);

/// 6 * params (billions) * tokens, in GFLOPs.
double flops_token_model(double params_millions, double tokens);

enum class TokenSource {
  kTable,     // fixed per-call token counts
  kMeasured,  // prompt tokens recorded by the backend
};

struct ComponentCostModel {
  double llm_params_millions = 8000.0;
  double vlm_params_millions = 7000.0;
  double prompt_tokens = 543.0;
  double fb1_tokens = 22.0;
  double fb2_tokens = 3.0;
  double vlm_side_tokens = 59.0 + 196.0;      // text + image patches
  double vlm_describe_tokens = 15.0 + 196.0;
  double navi_gflops = 0.002;
  double grasp_gflops = 837.6;
  double place_gflops = 27.0;  // listed without a unit; taken as GFLOPs
  TokenSource source = TokenSource::kTable;
};

struct CostBreakdown {
  double c_plan = 0.0;
  double c_navi = 0.0;
  double c_vlm = 0.0;
  double c_grasp = 0.0;
  double c_place = 0.0;
  double peak = 0.0;  // largest single call

  double total() const { return c_plan + c_navi + c_vlm + c_grasp + c_place; }
};

CostBreakdown episode_cost(const EpisodeSummary& episode, const ComponentCostModel& model = {});

struct LatencyBreakdown {
  double t_planner = 0.0;
  double t_navi = 0.0;
  double t_vlm = 0.0;
  double t_grasp = 0.0;
  double t_place = 0.0;
};

double latency_total(const LatencyBreakdown& b);

/// Seconds per call. Defaults divide the Level-1 component times by that
/// level's call counts (5 planner, 2 navigate, 2 VLM, 1 grasp, 1 place).
struct LatencyModel {
  double planner = 3.18;
  double navi = 106.02;
  double vlm = 10.41;
  double grasp = 230.17;
  double place = 43.92;
};

LatencyBreakdown episode_latency(const EpisodeSummary& episode, const LatencyModel& model = {});

struct SuccessRates {
  double ideal = 0.0;
  double execute = 0.0;
};

/// Throws Error(kEmptyInput).
SuccessRates success_rates(const std::vector<EpisodeSummary>& episodes);

struct RunSetStats {
  std::string label;
  int episodes = 0;
  SuccessRates rates;
  std::optional<double> spl;  // pooled over every navigation sample
  int spl_samples = 0;
  LatencyBreakdown latency;   // mean per episode
  CostBreakdown cost;         // mean per episode; peak is the maximum
  Counters calls;             // totals
};

/// Throws Error(kEmptyInput).
RunSetStats run_set_stats(std::string label, const std::vector<EpisodeSummary>& episodes,
                          const ComponentCostModel& cost = {}, const LatencyModel& latency = {});

struct Report {
  nlohmann::ordered_json json;
  std::string text;
};

/// Statistics per labeled run set; every set after the first also carries
/// its difference from the first.
Report ablation_report(const std::vector<std::pair<std::string, std::vector<EpisodeSummary>>>& run_sets,
                       const ComponentCostModel& cost = {}, const LatencyModel& latency = {});

}  // namespace leanplan
