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
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "leanplan/scene.hpp"

namespace leanplan {

enum class PerturbKind { kMoveObject, kRemoveObject, kBlockCells };

std::string_view to_string(PerturbKind k);
std::optional<PerturbKind> parse_perturb_kind(std::string_view text);

struct PerturbEvent {
  PerturbKind kind = PerturbKind::kMoveObject;
  ObjectId object;                 // move/remove
  std::string site;                // move destination
  std::optional<Side> side;        // move destination side, close if unset
  std::vector<Cell> cells;         // block

  friend bool operator==(const PerturbEvent&, const PerturbEvent&) = default;
};

struct ScriptedPerturbation {
  int at_step = 0;
  PerturbEvent event;
};

struct FaultModel {
  double misrecognition_prob = 0.0;
  double grasp_fail_prob = 0.0;
  double nav_fail_prob = 0.0;
  int forced_grasp_failures = 0;  // the first n grasp attempts fail
  std::vector<ScriptedPerturbation> scripted_perturbations;

  bool valid() const;
};

struct SimEvent {
  int t = 0;
  std::string kind;
  nlohmann::json payload;
};

struct SkillOutcome {
  bool ok = false;
  std::optional<std::vector<std::string>> observation;
  std::optional<double> traveled;
  std::string detail;
  bool transient = false;        // injected fault, worth a plain retry
  std::optional<double> optimal; // Dijkstra length of the attempted leg
};

struct Observation {
  ObjectId id;
  std::string name;
  std::map<std::string, std::string> attributes;
  Side side = Side::kClose;  // in the table frame
};

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Side codes as seen by a robot with the given facing, and back.
Side to_relative(Side absolute, Direction facing);
Side to_absolute(Side relative, Direction facing);

/// Table-frame side whose approach point faces this way.
std::optional<Side> side_for_facing(const Site& site, Direction facing, Cell cell);

/// World position of a resting object, in meters.
Point object_point(const Site& site, const Placement& placement, double resolution);
Point cell_center(Cell c, double resolution);

class SimEnv {
 public:
  static constexpr double kDefaultArmRange = 0.6;

  /// Throws Error(kInvalidConfig) for out-of-range fault probabilities and
  /// Error(kInvalidScene) for a scene with violations.
  SimEnv(SceneMap scene, std::uint64_t seed, FaultModel faults = {}, double arm_range = kDefaultArmRange);

  const SceneMap& scene() const { return scene_; }
  const FaultModel& faults() const { return faults_; }
  double arm_range() const { return arm_range_; }
  std::uint64_t seed() const { return seed_; }

  /// Episode step stamped on subsequent events.
  void set_clock(int step) { clock_ = step; }
  int clock() const { return clock_; }

  const std::vector<SimEvent>& event_log() const { return events_; }
  std::string event_log_jsonl() const;

  /// Site reference ("fruit table", "far side of fruit table") or "x, y" in
  /// meters. Throws Error(kUnknownSite) or Error(kUnreachable).
  SkillOutcome navigate(std::string_view target);
  SkillOutcome navigate_site(const Site& site, std::optional<Side> side);
  SkillOutcome navigate_point(double x, double y);

  /// Shortest travel from the robot to the site, over its approach points.
  double optimal_distance(const Site& site, std::optional<Side> side) const;

  SkillOutcome pick(std::string_view name, const std::optional<std::string>& hint = std::nullopt);
  SkillOutcome place();

  /// Objects at the faced site ordered by id. Throws Error(kNotFacingSite).
  std::vector<Observation> observe() const;

  /// 1 left, 2 right, 3 far, 4 close, relative to the robot's pose. Throws
  /// Error(kNotFacingSite) or Error(kObjectNotVisible).
  Side table_side(std::string_view name) const;

  /// Throws Error(kUnknownObject), Error(kUnknownSite) or
  /// Error(kInvalidPerturbation).
  void perturb(const PerturbEvent& event);

  /// Applies scripted perturbations registered for \p step.
  void fire_scripted(int step);

  /// Matching objects at the faced site, ordered by id.
  std::vector<const ObjectInstance*> visible(std::string_view name) const;
  /// The matching object within arm range, else the first visible match.
  const ObjectInstance* primary_visible(std::string_view name) const;
  bool in_reach(const ObjectInstance& object) const;

 private:
  double uniform();
  void log(std::string kind, nlohmann::json payload);
  SkillOutcome walk(const std::vector<Cell>& path, double optimal, Direction final_facing, nlohmann::json target);

  SceneMap scene_;
  std::uint64_t seed_;
  FaultModel faults_;
  double arm_range_;
  std::mt19937_64 rng_;
  int clock_ = 0;
  int forced_left_ = 0;
  std::vector<SimEvent> events_;
};

}  // namespace leanplan
