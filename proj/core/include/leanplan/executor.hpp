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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "leanplan/memory.hpp"
#include "leanplan/model_gateway.hpp"
#include "leanplan/plan_codec.hpp"
#include "leanplan/prompt.hpp"
#include "leanplan/sim_env.hpp"
#include "leanplan/task.hpp"

namespace leanplan {

struct EpisodePolicy {
  int max_steps = 40;
  int max_retries_per_subgoal = 3;
  bool feedback_enabled = true;
  bool memory_enabled = false;
  bool side_refinement_enabled = true;
  PromptVariant prompt_variant = PromptVariant::kLean;

  /// Throws Error(kInvalidConfig).
  void validate() const;

  friend bool operator==(const EpisodePolicy&, const EpisodePolicy&) = default;
};

enum class FailureReason {
  kStepBudgetExhausted,
  kRetryBudget,
  kPlannerProtocolError,
  kBackendError,
  kGoalNotMet,
  kImpossibleTask,
};

std::string_view to_string(FailureReason r);
std::optional<FailureReason> parse_failure_reason(std::string_view text);

struct Verdict {
  bool success = false;
  std::optional<FailureReason> reason;
  std::string detail;
  bool done_trusted = false;  // no goal to check; the planner's done was taken at its word

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

/// One navigation leg: S in {0, 1}, l the grid-optimal length from the leg's
/// start to where the robot ended up, p the distance traveled. Meters.
struct NavSample {
  double s = 0.0;
  double l = 0.0;
  double p = 0.0;

  friend bool operator==(const NavSample&, const NavSample&) = default;
};

struct Counters {
  int llm_calls = 0;
  int vlm_calls = 0;
  int vlm_describe_calls = 0;
  int navigate_calls = 0;
  int replans = 0;
  int pick_attempts = 0;
  int place_attempts = 0;
  int retries = 0;

  friend bool operator==(const Counters&, const Counters&) = default;
};

/// kind: "prompt" for the initial plan request, "fb1" for feedback carrying
/// an observation, "fb2" for other feedback, "reprompt" after a bad reply.
struct PlannerExchange {
  std::string kind;
  std::string stimulus;
  std::string reply;
  BackendUsage usage;
  std::string raw_request;
  std::string raw_response;
};

/// kind: "side" or "describe".
struct VlmExchange {
  std::string kind;
  std::string object;
  std::string answer;
  BackendUsage usage;
};

struct Turn {
  int step = 0;  // 0 is the planning turn
  std::optional<SkillCall> action;
  std::optional<SkillOutcome> outcome;
  std::string feedback;
  std::vector<PlannerExchange> planner;
  std::vector<VlmExchange> vlm;
  std::vector<SimEvent> events;
  std::string note;
};

struct EpisodeTask {
  std::string id;
  int level = 0;
  std::string instruction;
  std::optional<ResolvedGoal> goal;
};

struct EpisodeTranscript {
  std::string task_id;
  int level = 0;
  std::string instruction;
  std::string backend;
  std::uint64_t seed = 0;
  EpisodePolicy policy;
  std::optional<Plan> plan;
  std::vector<Turn> turns;
  Verdict verdict;
  bool ideal = false;
  std::vector<NavSample> samples;
  Counters counters;
};

/// Short-term store and map used when memory is enabled; both optional.
struct MemoryStores {
  ShortTermStore* stm = nullptr;
  const LongTermMemory* ltm = nullptr;
};

/// Plan, then execute one skill per step and feed its outcome back until the
/// planner says done or a budget runs out. Never throws for planner, backend
/// or environment failures; those end in a failed verdict.
EpisodeTranscript run_episode(SimEnv& env, PlannerBackend& planner, VlmBackend& vlm, MemoryStores stores,
                              const EpisodePolicy& policy, const EpisodeTask& task);

/// Line-delimited JSON: a header line, one line per turn, then a summary line
/// with the verdict, counters, samples and per-call records.
std::string transcript_jsonl(const EpisodeTranscript& transcript);

/// What the metrics need from one episode.
struct PlannerCallRecord {
  std::string kind;
  long prompt_tokens = 0;
  long completion_tokens = 0;

  friend bool operator==(const PlannerCallRecord&, const PlannerCallRecord&) = default;
};

struct EpisodeSummary {
  std::string task_id;
  int level = 0;
  bool success = false;
  bool ideal = false;
  std::string reason;
  std::vector<NavSample> samples;
  Counters counters;
  std::vector<PlannerCallRecord> planner_calls;
  std::vector<std::string> vlm_calls;  // kinds in call order

  friend bool operator==(const EpisodeSummary&, const EpisodeSummary&) = default;
};

EpisodeSummary summarize(const EpisodeTranscript& transcript);
nlohmann::ordered_json encode_summary(const EpisodeSummary& summary);
/// Throws Error(kSchemaMismatch).
EpisodeSummary decode_summary(const nlohmann::json& j);
/// Summary from the last line of a transcript file. Throws Error(kSchemaMismatch).
EpisodeSummary summary_from_jsonl(std::string_view text);

}  // namespace leanplan
