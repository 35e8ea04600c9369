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
#include "leanplan/skill_isa.hpp"

#include <cstdlib>

#include "leanplan/error.hpp"

namespace leanplan {

const std::vector<SkillSpec>& skill_catalog() {
  static const std::vector<SkillSpec> kCatalog = {
      {Skill::kNavigate, "navigate", "location: site name, or double x, double y", "result, observation", {1, 2}, true},
      {Skill::kPick, "pick", "name of target object", "grasping result", {1}, false},
      {Skill::kPlace, "place", "null", "placing result", {0}, false},
      {Skill::kDone, "done", "null", "none", {0}, false},
  };
  return kCatalog;
}

std::string_view to_string(PreconditionCode code) {
  switch (code) {
    case PreconditionCode::kHoldOne: return "HoldOne";
    case PreconditionCode::kNothingHeld: return "NothingHeld";
    case PreconditionCode::kUnknownSite: return "UnknownSite";
    case PreconditionCode::kBadArity: return "BadArity";
  }
  return "BadArity";
}

std::optional<PreconditionViolation> check_preconditions(const SkillCall& call, const SceneMap& scene) {
  switch (call.skill) {
    case Skill::kNavigate: {
      if (call.params.size() == 2) {
        char* e0 = nullptr;
        char* e1 = nullptr;
        std::strtod(call.params[0].c_str(), &e0);
        std::strtod(call.params[1].c_str(), &e1);
        if (*e0 != '\0' || *e1 != '\0') return PreconditionViolation{PreconditionCode::kBadArity, "navigate"};
        return std::nullopt;
      }
      if (call.params.size() != 1) return PreconditionViolation{PreconditionCode::kBadArity, "navigate"};
      if (!resolve_site_ref(scene, call.params[0])) {
        return PreconditionViolation{PreconditionCode::kUnknownSite, call.params[0]};
      }
      return std::nullopt;
    }
    case Skill::kPick:
      if (call.params.size() != 1) return PreconditionViolation{PreconditionCode::kBadArity, "pick"};
      if (scene.robot.held) return PreconditionViolation{PreconditionCode::kHoldOne, call.params[0]};
      return std::nullopt;
    case Skill::kPlace:
      if (!scene.robot.held) return PreconditionViolation{PreconditionCode::kNothingHeld, ""};
      return std::nullopt;
    case Skill::kDone: return std::nullopt;
  }
  return std::nullopt;
}

std::string violation_detail(const PreconditionViolation& v, const SceneMap& scene) {
  switch (v.code) {
    case PreconditionCode::kHoldOne: {
      std::string held = "an object";
      if (scene.robot.held) {
        if (const auto* o = scene.find_object(*scene.robot.held)) held = o->name;
      }
      return "already holding " + held;
    }
    case PreconditionCode::kNothingHeld: return "nothing held";
    case PreconditionCode::kUnknownSite: return "unknown location " + v.detail;
    case PreconditionCode::kBadArity: return "malformed " + v.detail + " call";
  }
  return v.detail;
}

SkillOutcome dispatch(const SkillCall& call, SimEnv& env, const std::optional<std::string>& descriptor_hint) {
  if (const auto v = check_preconditions(call, env.scene())) {
    throw Error(ErrorCode::kPreconditionBypassed, std::string(to_string(v->code)) + " " + v->detail);
  }
  switch (call.skill) {
    case Skill::kNavigate: {
      const std::string target = call.params.size() == 2 ? call.params[0] + ", " + call.params[1] : call.params[0];
      try {
        return env.navigate(target);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kUnreachable) throw;
        SkillOutcome out;
        out.ok = false;
        out.traveled = 0.0;
        out.detail = "unreachable " + target;
        return out;
      }
    }
    case Skill::kPick: return env.pick(call.params[0], descriptor_hint);
    case Skill::kPlace: return env.place();
    case Skill::kDone: {
      SkillOutcome out;
      out.ok = true;
      out.detail = "done";
      return out;
    }
  }
  return {};
}

FeedbackEvent feedback_for(const SkillCall& call, const SkillOutcome& outcome) {
  if (!outcome.ok) return failure(call.skill, outcome.detail);
  if (call.skill == Skill::kNavigate) return nav_success(outcome.observation.value_or(std::vector<std::string>{}));
  return success(call.skill);
}

}  // namespace leanplan
