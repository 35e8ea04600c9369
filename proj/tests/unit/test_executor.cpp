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

#include <nlohmann/json.hpp>

#include "leanplan/executor.hpp"
#include "leanplan/model_gateway.hpp"
#include "leanplan/oracle_planner.hpp"
#include "leanplan/task.hpp"

using namespace leanplan;

namespace {

GoalClause move(std::string object, std::string to) {
  GoalClause c;
  c.object = std::move(object);
  c.to = std::move(to);
  return c;
}

struct Rig {
  SceneMap scene = canonical_scene();
  HashedBagOfWords embedder;
  ShortTermStore stm{embedder};
  LongTermMemory ltm = LongTermMemory::from_scene(scene);
  SimulatedVlm vlm;

  EpisodeTranscript oracle(const std::vector<GoalClause>& clauses, EpisodePolicy policy = {}, FaultModel faults = {},
                           std::uint64_t seed = 1) {
    const ResolvedGoal goal = resolve_goal(clauses, scene);
    SimEnv env(scene, seed, faults);
    OraclePlanner planner(env, goal);
    std::string instruction;
    for (const auto& c : clauses) {
      instruction += (instruction.empty() ? "find the " : " then find the ") + c.object + " and put it on the " + c.to;
    }
    auto tr = run_episode(env, planner, vlm, {&stm, &ltm}, policy, {"t", 1, instruction, goal});
    scene = env.scene();
    return tr;
  }

  EpisodeTranscript scripted(const std::vector<std::string>& replies, std::optional<ResolvedGoal> goal,
                             EpisodePolicy policy = {}) {
    nlohmann::json turns = nlohmann::json::array();
    for (const auto& r : replies) turns.push_back({{"reply", r}});
    SimEnv env(scene, 1);
    ScriptedPlanner planner(parse_script(nlohmann::json{{"turns", turns}}.dump()));
    auto tr = run_episode(env, planner, vlm, {&stm, &ltm}, policy, {"s", 1, "test", goal});
    scene = env.scene();
    return tr;
  }
};

std::string step(const std::string& action) {
  return nlohmann::json{{"step_by_step_reasoning", ""}, {"next_action", action}}.dump();
}

std::string plan(const std::vector<std::string>& actions) {
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t i = 0; i < actions.size(); ++i) list.push_back(std::to_string(i + 1) + ". " + actions[i]);
  return nlohmann::json{{"reasoning", ""}, {"action_list", list}, {"first_action", "1. " + actions.front()}}.dump();
}

}  // namespace

TEST_SUITE("executor") {
  TEST_CASE("oracle delivers a single object") {
    Rig rig;
    const auto tr = rig.oracle({move("lemon", "drink table")});
    CHECK(tr.verdict.success);
    CHECK(tr.ideal);
    CHECK(tr.counters.llm_calls == 5);
    CHECK(tr.counters.pick_attempts == 1);
    CHECK(tr.counters.place_attempts == 1);
    CHECK(tr.counters.vlm_calls == 2);
    CHECK(tr.counters.vlm_describe_calls == 1);
    CHECK(tr.samples.size() == 2);
    for (const auto& s : tr.samples) CHECK(s.s == 1.0);
    REQUIRE(tr.plan.has_value());
    CHECK(tr.turns.front().step == 0);
  }

  TEST_CASE("retry budget ends an episode whose grasps always fail") {
    Rig rig;
    FaultModel f;
    f.grasp_fail_prob = 1.0;
    const auto tr = rig.oracle({move("lemon", "drink table")}, {}, f);
    CHECK_FALSE(tr.verdict.success);
    CHECK(tr.verdict.reason == FailureReason::kRetryBudget);
    CHECK(tr.counters.pick_attempts == EpisodePolicy{}.max_retries_per_subgoal + 1);
    CHECK(tr.counters.retries >= 1);
  }

  TEST_CASE("step budget") {
    Rig rig;
    EpisodePolicy p;
    p.max_steps = 2;
    const auto tr = rig.oracle({move("lemon", "drink table")}, p);
    CHECK(tr.verdict.reason == FailureReason::kStepBudgetExhausted);
  }

  TEST_CASE("policy validation") {
    EpisodePolicy p;
    p.max_steps = 0;
    CHECK_THROWS(p.validate());
    p = {};
    p.max_retries_per_subgoal = -1;
    CHECK_THROWS(p.validate());
  }

  TEST_CASE("feedback recovers from a moved object, open loop does not") {
    for (bool feedback : {true, false}) {
      Rig rig;
      FaultModel f;
      PerturbEvent ev;
      ev.kind = PerturbKind::kMoveObject;
      for (const auto& o : rig.scene.objects) {
        if (o.name == "apple") ev.object = o.id;
      }
      ev.site = "dining table";
      f.scripted_perturbations.push_back({1, ev});
      EpisodePolicy p;
      p.feedback_enabled = feedback;
      const auto tr = rig.oracle({move("apple", "shipping table")}, p, f);
      CHECK(tr.verdict.success == feedback);
      if (feedback) CHECK(tr.counters.replans >= 1);
      if (!feedback) CHECK(tr.counters.llm_calls == 1);
    }
  }

  TEST_CASE("unparseable plans are reprompted twice then abandoned") {
    Rig rig;
    const auto tr = rig.scripted({"no json here", "still none", "nope"}, std::nullopt);
    CHECK(tr.verdict.reason == FailureReason::kPlannerProtocolError);
    CHECK(tr.counters.llm_calls == 3);
  }

  TEST_CASE("a reprompt that succeeds continues the episode") {
    Rig rig;
    const auto tr = rig.scripted({"oops", plan({"go_to(fruit table)"}), step("done")}, std::nullopt);
    CHECK(tr.verdict.success);
    CHECK(tr.verdict.done_trusted);
  }

  TEST_CASE("running out of script is a backend error") {
    Rig rig;
    const auto tr = rig.scripted({plan({"go_to(fruit table)", "pick_up(apple)"})}, std::nullopt);
    CHECK(tr.verdict.reason == FailureReason::kBackendError);
  }

  TEST_CASE("precondition violations become failure feedback") {
    Rig rig;
    const auto tr = rig.scripted({plan({"place()"}), step("done")}, std::nullopt);
    REQUIRE(tr.turns.size() >= 2);
    CHECK(tr.turns[1].feedback.rfind("#feedback: place failed", 0) == 0);
    CHECK(tr.verdict.success);
  }

  TEST_CASE("a false done fails the goal check") {
    Rig rig;
    const ResolvedGoal goal = resolve_goal({move("lemon", "drink table")}, rig.scene);
    const auto tr = rig.scripted({plan({"go_to(fruit table)"}), step("done")}, goal);
    CHECK_FALSE(tr.verdict.success);
    CHECK(tr.verdict.reason == FailureReason::kGoalNotMet);
    CHECK_FALSE(tr.ideal);
  }

  TEST_CASE("memory skips VLM calls for a remembered object") {
    Rig rig;
    EpisodePolicy p;
    p.memory_enabled = true;
    const auto first = rig.oracle({move("apple", "storage rack")}, p);
    REQUIRE(first.verdict.success);
    REQUIRE(rig.stm.find("apple") != nullptr);
    CHECK(rig.stm.find("apple")->site == "storage rack");
    const auto second = rig.oracle({move("apple", "dining table")}, p);
    CHECK(second.verdict.success);
    CHECK(second.counters.vlm_calls == 0);
    CHECK(second.counters.vlm_describe_calls == 0);
    REQUIRE_FALSE(second.turns.front().planner.empty());
    CHECK(second.turns.front().planner.front().stimulus.find("#MEMORY#") != std::string::npos);
  }

  TEST_CASE("side refinement off skips the side query") {
    Rig rig;
    EpisodePolicy p;
    p.side_refinement_enabled = false;
    const auto tr = rig.oracle({move("lemon", "drink table")}, p);
    CHECK(tr.counters.vlm_calls == 0);
  }

  TEST_CASE("transcripts are deterministic and summaries survive JSONL") {
    FaultModel f;
    f.grasp_fail_prob = 0.3;
    f.nav_fail_prob = 0.2;
    Rig a;
    Rig b;
    const auto ta = a.oracle({move("lemon", "drink table"), move("toy duck", "fruit table")}, {}, f, 9);
    const auto tb = b.oracle({move("lemon", "drink table"), move("toy duck", "fruit table")}, {}, f, 9);
    CHECK(transcript_jsonl(ta) == transcript_jsonl(tb));
    CHECK(summary_from_jsonl(transcript_jsonl(ta)) == summarize(ta));
    CHECK(decode_summary(nlohmann::json::parse(encode_summary(summarize(ta)).dump())) == summarize(ta));
  }

  TEST_CASE("failure reasons have stable names") {
    for (auto r : {FailureReason::kStepBudgetExhausted, FailureReason::kRetryBudget,
                   FailureReason::kPlannerProtocolError, FailureReason::kBackendError, FailureReason::kGoalNotMet,
                   FailureReason::kImpossibleTask}) {
      CHECK(parse_failure_reason(to_string(r)) == r);
    }
  }
}
