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
#include "leanplan/oracle_planner.hpp"

#include <nlohmann/json.hpp>

#include "leanplan/error.hpp"
#include "leanplan/prompt.hpp"

namespace leanplan {

namespace {

bool move_done(const SceneMap& scene, const Move& m) {
  const auto* o = scene.find_object(m.object);
  return o != nullptr && o->placement && o->placement->site == m.dest;
}

const ObjectInstance& require(const SceneMap& scene, ObjectId id) {
  const auto* o = scene.find_object(id);
  if (o == nullptr) throw Error(ErrorCode::kImpossibleTask, "object " + std::to_string(id.value) + " is gone");
  return *o;
}

ChatResult reply_with(std::string_view stimulus, std::string reply) {
  ChatResult r;
  r.usage.prompt_tokens = static_cast<long>(approx_tokens(stimulus));
  r.usage.completion_tokens = static_cast<long>(approx_tokens(reply));
  r.reply = std::move(reply);
  return r;
}

}  // namespace

OraclePlanner::OraclePlanner(const SimEnv& env, ResolvedGoal goal) : env_(&env), goal_(std::move(goal)) {}

Plan OraclePlanner::plan() const {
  const SceneMap& scene = env_->scene();
  Plan p;
  std::string reasoning = "The objects are located by ground truth.";
  std::optional<ObjectId> held = scene.robot.held;
  for (const auto& m : goal_.moves) {
    if (move_done(scene, m)) continue;
    const ObjectInstance& o = require(scene, m.object);
    Subtask st;
    st.desc = "move the " + o.name + " to the " + m.dest;
    if (held && *held == o.id) {
      held.reset();
    } else {
      st.calls.push_back(navigate_to(format_site_ref(o.placement->site, o.placement->side)));
      st.calls.push_back(pick_object(o.name));
      reasoning += " The object [" + o.name + "] is on the [" + o.placement->site + "].";
    }
    st.calls.push_back(navigate_to(m.dest));
    st.calls.push_back(place_held());
    p.subtasks.push_back(std::move(st));
  }
  if (goal_.end_at) p.subtasks.push_back({"go to the " + *goal_.end_at, {navigate_to(*goal_.end_at)}});
  p.subtasks.push_back({"finish", {done_call()}});
  p.reasoning = std::move(reasoning);
  p.first_action = next_action();
  return p;
}

SkillCall OraclePlanner::next_action() const {
  const SceneMap& scene = env_->scene();
  const auto faced = scene.faced_site();
  for (const auto& m : goal_.moves) require(scene, m.object);

  if (scene.robot.held) {
    const ObjectId h = *scene.robot.held;
    for (const auto& m : goal_.moves) {
      if (m.object != h) continue;
      if (faced && faced->site->name == m.dest) return place_held();
      return navigate_to(m.dest);
    }
    // Holding something the task does not need: put it down where we stand.
    if (faced) return place_held();
    return navigate_to(scene.sites.front().name);
  }
  for (const auto& m : goal_.moves) {
    if (move_done(scene, m)) continue;
    const ObjectInstance& o = require(scene, m.object);
    if (faced && faced->site->name == o.placement->site && faced->side == o.placement->side) {
      return pick_object(o.name);
    }
    return navigate_to(format_site_ref(o.placement->site, o.placement->side));
  }
  if (goal_.end_at && (!faced || faced->site->name != *goal_.end_at)) return navigate_to(*goal_.end_at);
  return done_call();
}

ChatResult OraclePlanner::initial(std::string_view prompt) { return reply_with(prompt, encode_plan(plan())); }

ChatResult OraclePlanner::step(std::string_view message) {
  const SkillCall next = next_action();
  nlohmann::ordered_json j;
  j["step_by_step_reasoning"] = "Based on the feedback and the known object locations, the next action is " +
                                format_call(next) + ".";
  j["next_action"] = format_call(next);
  return reply_with(message, j.dump(2));
}

}  // namespace leanplan
