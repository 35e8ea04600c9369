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

#include "leanplan/model_gateway.hpp"
#include "leanplan/plan_codec.hpp"
#include "leanplan/sim_env.hpp"
#include "leanplan/task.hpp"

namespace leanplan {

/// Rule-based planner reading the simulator's ground truth. It ignores the
/// text it is sent and answers from the live scene, so a moved object is
/// chased to wherever it now rests. Navigation targets name the table side
/// the object is on.
class OraclePlanner final : public PlannerBackend {
 public:
  /// \p env must outlive the planner.
  OraclePlanner(const SimEnv& env, ResolvedGoal goal);

  /// Structured plan JSON. Throws Error(kImpossibleTask).
  ChatResult initial(std::string_view prompt) override;
  /// {"step_by_step_reasoning", "next_action"}. Throws Error(kImpossibleTask).
  ChatResult step(std::string_view message) override;
  std::string name() const override { return "oracle"; }

  /// navigate(source side) -> pick -> navigate(dest) -> place per pending
  /// move, then done.
  Plan plan() const;
  SkillCall next_action() const;

  const ResolvedGoal& goal() const { return goal_; }

 private:
  const SimEnv* env_;
  ResolvedGoal goal_;
};

}  // namespace leanplan
