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
#include <vector>

#include "leanplan/plan_codec.hpp"
#include "leanplan/scene.hpp"
#include "leanplan/sim_env.hpp"

namespace leanplan {

struct SkillSpec {
  Skill skill;
  std::string name;
  std::string params;   // human-readable arity/type description
  std::string returns;
  std::vector<int> arities;
  bool numeric_pair_allowed = false;
};

/// navigate, pick, place, done.
const std::vector<SkillSpec>& skill_catalog();

enum class PreconditionCode { kHoldOne, kNothingHeld, kUnknownSite, kBadArity };

std::string_view to_string(PreconditionCode code);

struct PreconditionViolation {
  PreconditionCode code;
  std::string detail;

  friend bool operator==(const PreconditionViolation&, const PreconditionViolation&) = default;
};

/// Never throws; never mutates the scene.
std::optional<PreconditionViolation> check_preconditions(const SkillCall& call, const SceneMap& scene);

/// Failure detail reported to the planner for a violation.
std::string violation_detail(const PreconditionViolation& v, const SceneMap& scene);

/// Routes a call into the environment. Environment errors (unreachable
/// targets) become failed outcomes. Throws Error(kPreconditionBypassed) if the
/// call violates its preconditions.
SkillOutcome dispatch(const SkillCall& call, SimEnv& env, const std::optional<std::string>& descriptor_hint = std::nullopt);

/// Feedback message for a dispatched call.
FeedbackEvent feedback_for(const SkillCall& call, const SkillOutcome& outcome);

}  // namespace leanplan
