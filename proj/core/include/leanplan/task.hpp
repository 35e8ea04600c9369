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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leanplan/plan_codec.hpp"
#include "leanplan/scene.hpp"
#include "leanplan/sim_env.hpp"

namespace leanplan {

/// One goal clause of a suite task.
///   {"object": "apple", "to": "fruit table"}
///   {"select": {"category": "fruit"}, "count": "all", "from": "...", "to": "..."}
///   {"select": {...}, "count": "one", "min": "size_rank", "to": "..."}
///   {"go": "user entry"}
struct GoalClause {
  enum class Kind { kMove, kSelect, kGo };

  Kind kind = Kind::kMove;
  std::string object;                        // kMove
  std::map<std::string, std::string> select; // kSelect
  bool all = false;
  std::optional<std::string> from;
  std::optional<std::string> min_attr;
  std::optional<std::string> max_attr;
  bool distinct = false;  // kMove: a fresh instance of a repeated name
  std::string to;         // destination site (kGo: the site to end at)

  friend bool operator==(const GoalClause&, const GoalClause&) = default;
};

struct SetupItem {
  std::string object;
  std::string site;
  std::optional<Side> side;

  friend bool operator==(const SetupItem&, const SetupItem&) = default;
};

struct PerturbSpec {
  int at_step = 1;
  PerturbKind kind = PerturbKind::kMoveObject;
  std::string object;
  std::string site;
  std::optional<Side> side;
  std::vector<Cell> cells;

  friend bool operator==(const PerturbSpec&, const PerturbSpec&) = default;
};

struct Task {
  std::string id;
  int level = 0;
  std::string instruction;
  std::string session;  // tasks sharing a session run on one persistent scene
  std::vector<SetupItem> setup;
  std::vector<GoalClause> goal;
  std::vector<PerturbSpec> perturbations;

  friend bool operator==(const Task&, const Task&) = default;
};

struct Suite {
  std::string name;
  int level = 0;  // 0 for mixed-level suites
  std::vector<Task> tasks;
};

/// Throws Error(kSchemaMismatch) with the offending path.
Suite parse_suite(std::string_view json_text);
std::string encode_suite(const Suite& suite);

/// level1..level4, realworld, perturbation, memory_repeat.
std::vector<std::string> builtin_suite_names();
/// Throws Error(kInvalidConfig) for an unknown name.
Suite builtin_suite(std::string_view name);
/// Raw embedded data file (suites/..., scripts/..., baselines.json).
/// Throws Error(kInvalidConfig) for an unknown path.
std::string_view builtin_data(std::string_view path);

/// Moves each setup object (first matching instance not yet placed by this
/// setup) to its site. Throws Error(kUnknownObject) or Error(kUnknownSite).
void apply_setup(SceneMap& scene, const std::vector<SetupItem>& setup);

struct Move {
  ObjectId object;
  std::string dest;  // canonical site name

  friend bool operator==(const Move&, const Move&) = default;
};

/// At least \p need of \p candidates rest on \p dest.
struct GoalCheck {
  std::vector<ObjectId> candidates;
  int need = 1;
  std::string dest;

  friend bool operator==(const GoalCheck&, const GoalCheck&) = default;
};

struct ResolvedGoal {
  std::vector<Move> moves;            // in execution order, one per object
  std::vector<GoalCheck> checks;
  std::optional<std::string> end_at;  // site the robot must finally face

  friend bool operator==(const ResolvedGoal&, const ResolvedGoal&) = default;
};

/// Binds clauses to object instances of \p scene. A repeated name refers to
/// the same instance (its last destination wins) unless marked distinct.
/// Throws Error(kImpossibleTask) when a clause matches nothing and
/// Error(kUnknownSite) for an unknown destination.
ResolvedGoal resolve_goal(const std::vector<GoalClause>& clauses, const SceneMap& scene);

bool goal_satisfied(const ResolvedGoal& goal, const SceneMap& scene);

/// Perturbation specs bound to object ids. Throws Error(kUnknownObject).
std::vector<ScriptedPerturbation> resolve_perturbations(const std::vector<PerturbSpec>& specs,
                                                        const SceneMap& scene);

/// Adds one perturbation to every task that declares none: just before the
/// first step, the first object the goal moves is relocated to the first
/// table-like site that is neither its current site nor its destination.
/// Tasks whose goal cannot be read or moves nothing are left unchanged.
Suite with_default_perturbations(Suite suite, const SceneMap& scene);

/// Runs \p calls on a site-level abstraction of \p scene (no sides, no arm
/// range, no faults) and reports whether the end state meets \p goal.
bool plan_reaches_goal(const std::vector<SkillCall>& calls, const SceneMap& scene, const ResolvedGoal& goal);

/// Keyword reading of a free-text instruction into goal clauses: site names
/// mark destinations, object names and attribute words mark what to move.
/// Returns nothing when no clause can be read.
std::optional<std::vector<GoalClause>> read_instruction(std::string_view instruction, const SceneMap& scene);

}  // namespace leanplan
