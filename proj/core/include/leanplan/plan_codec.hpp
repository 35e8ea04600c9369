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
#include <string_view>
#include <vector>

namespace leanplan {

enum class Skill { kNavigate, kPick, kPlace, kDone };

std::string_view to_string(Skill s);
/// Accepts canonical names and the surface aliases planners use (go_to,
/// pick_up, ...). Case-insensitive.
std::optional<Skill> parse_skill_name(std::string_view name);

/// navigate: one site param or two numeric params; pick: one object param;
/// place and done: no params.
struct SkillCall {
  Skill skill = Skill::kDone;
  std::vector<std::string> params;

  friend bool operator==(const SkillCall&, const SkillCall&) = default;
};

SkillCall navigate_to(std::string site);
SkillCall pick_object(std::string object);
SkillCall place_held();
SkillCall done_call();

/// Renders in the planner's surface syntax: go_to(x), go_to(x, y),
/// pick_up(x), place(), done. parse_skill_call inverts it.
std::string format_call(const SkillCall& call);
/// Canonical key used for retry bookkeeping, e.g. "navigate(fruit table)".
std::string call_key(const SkillCall& call);

struct Subtask {
  std::string desc;
  std::vector<SkillCall> calls;

  friend bool operator==(const Subtask&, const Subtask&) = default;
};

struct Plan {
  std::string reasoning;
  std::vector<Subtask> subtasks;
  SkillCall first_action;

  std::vector<SkillCall> flattened() const;

  friend bool operator==(const Plan&, const Plan&) = default;
};

struct StepReply {
  std::string reasoning;
  SkillCall next_action;

  friend bool operator==(const StepReply&, const StepReply&) = default;
};

enum class FeedbackKind { kNavSuccess, kNavFail, kPickSuccess, kPickFail, kPlaceSuccess, kPlaceFail };

std::string_view to_string(FeedbackKind k);

struct FeedbackEvent {
  FeedbackKind kind = FeedbackKind::kNavSuccess;
  std::optional<std::vector<std::string>> observation;  // nav_success only
  std::optional<std::string> detail;                    // failures only

  bool ok() const;

  friend bool operator==(const FeedbackEvent&, const FeedbackEvent&) = default;
};

FeedbackEvent nav_success(std::vector<std::string> observation);
FeedbackEvent failure(Skill skill, std::string detail);
FeedbackEvent success(Skill skill);

/// Accepts name(arg), name[arg], an optional "1." or "1. " prefix and quoted
/// arguments. Throws Error(kUnknownSkill) or Error(kMalformedCall).
SkillCall parse_skill_call(std::string_view text);

/// Extracts the outermost JSON object of a planner reply and canonicalizes
/// either plan format. Throws Error(kNoJsonFound), Error(kSchemaMismatch) with
/// the offending path, or Error(kUnknownSkill).
Plan parse_initial_plan(std::string_view text);

/// Throws Error(kNoJsonFound) or Error(kMissingNextAction).
StepReply parse_step_reply(std::string_view text);

/// Structured-form JSON; parse_initial_plan(encode_plan(p)) == p.
std::string encode_plan(const Plan& plan);

/// Calls found in one free-text plan sentence, in order of appearance.
std::vector<SkillCall> extract_calls(std::string_view sentence);

/// "#feedback: ..." lines. Object names must not contain ", " or " and ".
std::string render_feedback(const FeedbackEvent& event);
/// Inverse of render_feedback. Throws Error(kParseFail).
FeedbackEvent parse_feedback(std::string_view text);

}  // namespace leanplan
