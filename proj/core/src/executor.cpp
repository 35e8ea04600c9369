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
#include "leanplan/executor.hpp"

#include <algorithm>
#include <map>

#include "leanplan/error.hpp"
#include "leanplan/grid_search.hpp"
#include "leanplan/skill_isa.hpp"

namespace leanplan {

void EpisodePolicy::validate() const {
  if (max_steps < 1) throw Error(ErrorCode::kInvalidConfig, "max_steps must be at least 1");
  if (max_retries_per_subgoal < 0) throw Error(ErrorCode::kInvalidConfig, "max_retries_per_subgoal must be >= 0");
}

std::string_view to_string(FailureReason r) {
  switch (r) {
    case FailureReason::kStepBudgetExhausted: return "StepBudgetExhausted";
    case FailureReason::kRetryBudget: return "RetryBudget";
    case FailureReason::kPlannerProtocolError: return "PlannerProtocolError";
    case FailureReason::kBackendError: return "BackendError";
    case FailureReason::kGoalNotMet: return "GoalNotMet";
    case FailureReason::kImpossibleTask: return "ImpossibleTask";
  }
  return "BackendError";
}

std::optional<FailureReason> parse_failure_reason(std::string_view text) {
  for (auto r : {FailureReason::kStepBudgetExhausted, FailureReason::kRetryBudget,
                 FailureReason::kPlannerProtocolError, FailureReason::kBackendError, FailureReason::kGoalNotMet,
                 FailureReason::kImpossibleTask}) {
    if (to_string(r) == text) return r;
  }
  return std::nullopt;
}

namespace {

constexpr int kMaxReprompts = 2;

bool is_reply_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::kNoJsonFound:
    case ErrorCode::kSchemaMismatch:
    case ErrorCode::kMissingNextAction:
    case ErrorCode::kUnknownSkill:
    case ErrorCode::kMalformedCall: return true;
    default: return false;
  }
}

FailureReason reason_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::kImpossibleTask: return FailureReason::kImpossibleTask;
    case ErrorCode::kPlannerProtocolError: return FailureReason::kPlannerProtocolError;
    default: return FailureReason::kBackendError;
  }
}

class Episode {
 public:
  Episode(SimEnv& env, PlannerBackend& planner, VlmBackend& vlm, MemoryStores stores, const EpisodePolicy& policy,
          const EpisodeTask& task)
      : env_(env), planner_(planner), vlm_(vlm), stores_(stores), policy_(policy), task_(task) {
    tr_.task_id = task.id;
    tr_.level = task.level;
    tr_.instruction = task.instruction;
    tr_.backend = planner.name();
    tr_.seed = env.seed();
    tr_.policy = policy;
  }

  EpisodeTranscript run() {
    const SceneMap initial_scene = env_.scene();
    // A robot that starts the episode already facing a table sees its contents.
    if (const auto faced = initial_scene.faced_site()) {
      for (const auto* o : initial_scene.objects_at(faced->site->name)) last_observation_.push_back(o->name);
    }
    Turn t0;
    try {
      std::vector<std::string> hints;
      if (memory_on()) hints = memory_hints(*stores_.stm, *stores_.ltm, task_.instruction);
      const std::string prompt =
          render_initial_prompt(task_.instruction, env_.scene(), hints, policy_.prompt_variant);
      tr_.plan = obtain_plan(t0, prompt);
    } catch (const Error& e) {
      t0.events = events_since(0);
      tr_.turns.push_back(std::move(t0));
      fail(reason_for(e.code()), e.what());
      return finish();
    }
    t0.events = events_since(0);
    tr_.turns.push_back(std::move(t0));

    if (task_.goal) ideal_plan_ = plan_reaches_goal(tr_.plan->flattened(), initial_scene, *task_.goal);
    flat_ = tr_.plan->flattened();
    const auto first = std::find(flat_.begin(), flat_.end(), tr_.plan->first_action);
    cursor_ = first == flat_.end() ? 0 : static_cast<std::size_t>(first - flat_.begin());
    SkillCall pending = tr_.plan->first_action;

    int step = 0;
    try {
      while (true) {
        if (pending.skill == Skill::kDone) {
          Turn t;
          t.step = step + 1;
          t.action = pending;
          SkillOutcome out;
          out.ok = true;
          out.detail = "done";
          t.outcome = out;
          tr_.turns.push_back(std::move(t));
          done_ = true;
          break;
        }
        if (step >= policy_.max_steps) {
          fail(FailureReason::kStepBudgetExhausted, "no done after " + std::to_string(step) + " steps");
          break;
        }
        ++step;
        const auto next = execute(step, pending);
        if (!next) break;
        pending = *next;
      }
    } catch (const Error& e) {
      if (!tr_.turns.empty() && pending_turn_) tr_.turns.push_back(std::move(*pending_turn_));
      fail(reason_for(e.code()), e.what());
    }
    return finish();
  }

 private:
  bool memory_on() const { return policy_.memory_enabled && stores_.stm != nullptr && stores_.ltm != nullptr; }

  std::vector<SimEvent> events_since(std::size_t mark) const {
    const auto& log = env_.event_log();
    return {log.begin() + static_cast<std::ptrdiff_t>(std::min(mark, log.size())), log.end()};
  }

  ChatResult ask(Turn& turn, const std::string& kind, const std::string& stimulus, bool initial) {
    ++tr_.counters.llm_calls;
    ChatResult r = initial ? planner_.initial(stimulus) : planner_.step(stimulus);
    turn.planner.push_back({kind, stimulus, r.reply, r.usage, r.raw_request, r.raw_response});
    return r;
  }

  Plan obtain_plan(Turn& turn, const std::string& prompt) {
    ChatResult r = ask(turn, "prompt", prompt, true);
    for (int attempt = 0;; ++attempt) {
      try {
        return parse_initial_plan(r.reply);
      } catch (const Error& e) {
        if (!is_reply_error(e.code())) throw;
        if (attempt >= kMaxReprompts) throw Error(ErrorCode::kPlannerProtocolError, e.what());
        r = ask(turn, "reprompt", render_reprompt(e.what()), false);
      }
    }
  }

  SkillCall obtain_step(Turn& turn, const std::string& kind, const std::string& feedback) {
    ChatResult r = ask(turn, kind, feedback, false);
    for (int attempt = 0;; ++attempt) {
      try {
        return parse_step_reply(r.reply).next_action;
      } catch (const Error& e) {
        if (!is_reply_error(e.code())) throw;
        if (attempt >= kMaxReprompts) throw Error(ErrorCode::kPlannerProtocolError, e.what());
        r = ask(turn, "reprompt", render_reprompt(e.what()), false);
      }
    }
  }

  double optimal_from(Cell start) const {
    const DistanceField field(env_.scene().grid, start);
    const Cell end = env_.scene().robot.cell;
    return field.reachable(end) ? field.meters(end) : 0.0;
  }

  bool observed(std::string_view name) const {
    const std::string key = normalize_label(name);
    return std::any_of(last_observation_.begin(), last_observation_.end(),
                       [&](const std::string& n) { return normalize_label(n) == key; });
  }

  SkillOutcome pick_with_refinement(Turn& t, const SkillCall& call, int step) {
    const std::string& name = call.params.front();
    const SceneMap& scene = env_.scene();
    std::optional<std::string> hint;
    const auto faced = scene.faced_site();
    const MemoryUnit* unit = nullptr;
    if (faced && memory_on()) {
      unit = stores_.stm->find(name);
      if (unit != nullptr && !(unit->site == faced->site->name && observed(unit->object))) unit = nullptr;
    }
    auto not_found = [&] {
      SkillOutcome out;
      out.detail = "target not found";
      return out;
    };
    if (faced && (policy_.side_refinement_enabled || memory_on())) {
      if (policy_.side_refinement_enabled) {
        Side rel = Side::kClose;
        if (unit != nullptr) {
          rel = to_relative(unit->side, scene.robot.facing);
          t.note = "side from memory";
        } else {
          ++tr_.counters.vlm_calls;
          try {
            const SideAnswer a = vlm_.table_side(name, env_);
            rel = a.side;
            t.vlm.push_back({"side", name, std::to_string(static_cast<int>(a.side)) + " " + a.color + " " + a.shape,
                             vlm_.last_usage()});
          } catch (const Error& e) {
            if (e.code() == ErrorCode::kObjectNotVisible) {
              t.vlm.push_back({"side", name, "not visible", vlm_.last_usage()});
              return not_found();
            }
            if (e.code() != ErrorCode::kParseFail) throw;
            t.vlm.push_back({"side", name, e.what(), vlm_.last_usage()});
            rel = Side::kClose;
          }
        }
        if (rel != Side::kClose) {
          const Site& site = *faced->site;
          const Side target = to_absolute(rel, scene.robot.facing);
          if (site.approach.count(target) != 0) {
            ++tr_.counters.navigate_calls;
            const Cell start = leg_start_.value_or(scene.robot.cell);
            SkillOutcome nav;
            try {
              nav = env_.navigate_site(site, target);
            } catch (const Error& e) {
              if (e.code() != ErrorCode::kUnreachable) throw;
              nav.detail = "unreachable";
            }
            t.note = "refined to " + format_site_ref(site.name, target) + (nav.ok ? "" : ": " + nav.detail);
            if (last_sample_ && leg_start_) {
              NavSample& s = tr_.samples[*last_sample_];
              s.p += nav.traveled.value_or(0.0);
              s.l = optimal_from(start);
              s.s = nav.ok ? s.s : 0.0;
            } else {
              tr_.samples.push_back({nav.ok ? 1.0 : 0.0, optimal_from(start), nav.traveled.value_or(0.0)});
              last_sample_ = tr_.samples.size() - 1;
              leg_start_ = start;
            }
            if (!nav.ok) {
              SkillOutcome out;
              out.detail = nav.detail.empty() ? "navigation interrupted" : nav.detail;
              out.transient = nav.transient;
              return out;
            }
            if (nav.observation) last_observation_ = *nav.observation;
          }
        }
      }
      if (unit != nullptr) {
        hint = unit->img_summary;
      } else {
        ++tr_.counters.vlm_calls;
        ++tr_.counters.vlm_describe_calls;
        try {
          hint = vlm_.describe(name, env_);
          t.vlm.push_back({"describe", name, *hint, vlm_.last_usage()});
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kObjectNotVisible) throw;
          t.vlm.push_back({"describe", name, "not visible", vlm_.last_usage()});
          return not_found();
        }
      }
    }
    ++tr_.counters.pick_attempts;
    SkillOutcome out = dispatch(call, env_, hint);
    if (out.ok && memory_on()) {
      if (const auto at = env_.scene().faced_site()) {
        stores_.stm->upsert(out.detail, at->site->name, at->side, hint.value_or(out.detail), step);
      }
    }
    return out;
  }

  std::optional<SkillCall> execute(int step, const SkillCall& call) {
    env_.set_clock(step);
    pending_turn_ = Turn{};
    Turn& t = *pending_turn_;
    t.step = step;
    t.action = call;
    const std::size_t mark = env_.event_log().size();
    try {
      env_.fire_scripted(step);
    } catch (const Error& e) {
      t.note = std::string("perturbation skipped: ") + e.what();
    }

    SkillOutcome out;
    if (const auto v = check_preconditions(call, env_.scene())) {
      out.detail = violation_detail(*v, env_.scene());
      if (call.skill == Skill::kNavigate) {
        tr_.samples.push_back({0.0, 0.0, 0.0});
        last_sample_.reset();
        leg_start_.reset();
      }
    } else {
      switch (call.skill) {
        case Skill::kNavigate: {
          ++tr_.counters.navigate_calls;
          const Cell start = env_.scene().robot.cell;
          out = dispatch(call, env_);
          tr_.samples.push_back({out.ok ? 1.0 : 0.0, optimal_from(start), out.traveled.value_or(0.0)});
          last_sample_ = tr_.samples.size() - 1;
          leg_start_ = start;
          if (out.ok && out.observation) last_observation_ = *out.observation;
          break;
        }
        case Skill::kPick: out = pick_with_refinement(t, call, step); break;
        case Skill::kPlace: {
          ++tr_.counters.place_attempts;
          std::string held_name;
          std::string summary;
          if (const auto h = env_.scene().robot.held) {
            held_name = env_.scene().find_object(*h)->name;
            summary = held_name;
            if (memory_on()) {
              if (const auto* u = stores_.stm->find(held_name)) summary = u->img_summary;
            }
          }
          const auto at = env_.scene().faced_site();
          out = dispatch(call, env_);
          if (out.ok && memory_on() && at) stores_.stm->upsert(held_name, at->site->name, at->side, summary, step);
          break;
        }
        case Skill::kDone: break;
      }
    }
    const FeedbackEvent fb = feedback_for(call, out);
    t.outcome = out;
    t.feedback = render_feedback(fb);

    const std::string key = call_key(call);
    if (!out.ok) {
      const int fails = ++fails_[key];
      if (fails > policy_.max_retries_per_subgoal) {
        t.events = events_since(mark);
        tr_.turns.push_back(std::move(t));
        pending_turn_.reset();
        fail(FailureReason::kRetryBudget, key + " failed " + std::to_string(fails) + " times");
        return std::nullopt;
      }
      if (out.transient) {
        ++tr_.counters.retries;
        t.note += t.note.empty() ? "retry" : "; retry";
        t.events = events_since(mark);
        tr_.turns.push_back(std::move(t));
        pending_turn_.reset();
        return call;
      }
    } else {
      fails_[key] = 0;
    }

    SkillCall next = done_call();
    if (policy_.feedback_enabled) {
      if (out.ok && cursor_ < flat_.size() && flat_[cursor_] == call) ++cursor_;
      const std::string kind = fb.kind == FeedbackKind::kNavSuccess ? "fb1" : "fb2";
      next = obtain_step(t, kind, t.feedback);
      const SkillCall expected = cursor_ < flat_.size() ? flat_[cursor_] : done_call();
      if (!(next == expected)) {
        ++tr_.counters.replans;
        const auto it = std::find(flat_.begin() + static_cast<std::ptrdiff_t>(cursor_), flat_.end(), next);
        if (it != flat_.end()) cursor_ = static_cast<std::size_t>(it - flat_.begin());
      }
    } else {
      ++cursor_;
      if (cursor_ < flat_.size()) next = flat_[cursor_];
    }
    t.events = events_since(mark);
    tr_.turns.push_back(std::move(t));
    pending_turn_.reset();
    return next;
  }

  void fail(FailureReason reason, std::string detail) {
    if (verdict_set_) return;
    verdict_set_ = true;
    tr_.verdict.success = false;
    tr_.verdict.reason = reason;
    tr_.verdict.detail = std::move(detail);
  }

  EpisodeTranscript finish() {
    if (!verdict_set_) {
      verdict_set_ = true;
      if (task_.goal) {
        tr_.verdict.success = goal_satisfied(*task_.goal, env_.scene());
        if (!tr_.verdict.success) {
          tr_.verdict.reason = FailureReason::kGoalNotMet;
          tr_.verdict.detail = "goal conditions do not hold";
        }
      } else {
        tr_.verdict.success = done_;
        tr_.verdict.done_trusted = true;
      }
    }
    tr_.ideal = ideal_plan_ || tr_.verdict.success;
    return std::move(tr_);
  }

  SimEnv& env_;
  PlannerBackend& planner_;
  VlmBackend& vlm_;
  MemoryStores stores_;
  const EpisodePolicy& policy_;
  const EpisodeTask& task_;
  EpisodeTranscript tr_;
  std::vector<SkillCall> flat_;
  std::size_t cursor_ = 0;
  std::map<std::string, int> fails_;
  std::vector<std::string> last_observation_;
  std::optional<std::size_t> last_sample_;
  std::optional<Cell> leg_start_;
  std::optional<Turn> pending_turn_;
  bool done_ = false;
  bool verdict_set_ = false;
  bool ideal_plan_ = false;
};

}  // namespace

EpisodeTranscript run_episode(SimEnv& env, PlannerBackend& planner, VlmBackend& vlm, MemoryStores stores,
                              const EpisodePolicy& policy, const EpisodeTask& task) {
  policy.validate();
  Episode episode(env, planner, vlm, stores, policy, task);
  return episode.run();
}

}  // namespace leanplan
