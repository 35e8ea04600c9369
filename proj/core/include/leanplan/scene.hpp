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

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace leanplan {

struct Cell {
  int x = 0;
  int y = 0;

  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Grid directions. "Up" is decreasing y (row index), matching the neighbor
/// expansion order used by the path planner: up, right, down, left.
enum class Direction { kUp, kRight, kDown, kLeft };

/// Table sides. The numeric values are the codes the vision model answers
/// with: 1 left, 2 right, 3 far, 4 close.
enum class Side { kLeft = 1, kRight = 2, kFar = 3, kClose = 4 };

enum class SiteKind { kTable, kShelf, kRack, kEntry };

std::string_view to_string(Direction d);
std::string_view to_string(Side s);
std::string_view to_string(SiteKind k);
std::optional<Direction> parse_direction(std::string_view text);
std::optional<Side> parse_side(std::string_view text);
std::optional<SiteKind> parse_site_kind(std::string_view text);
Cell step(Cell c, Direction d);

class GridMap {
 public:
  GridMap() = default;
  /// Throws Error(kInvalidScene) unless width, height and resolution are positive.
  GridMap(int width, int height, double resolution);

  int width() const { return width_; }
  int height() const { return height_; }
  double resolution() const { return resolution_; }
  std::size_t cell_count() const { return occupancy_.size(); }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  /// Out-of-bounds cells count as blocked.
  bool blocked(Cell c) const;
  bool free(Cell c) const { return in_bounds(c) && !blocked(c); }
  void set_blocked(Cell c, bool blocked);
  std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }
  Cell cell_at(std::size_t index) const;

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  double resolution_ = 0.0;
  std::vector<std::uint8_t> occupancy_;
};

struct ApproachPoint {
  Cell cell;
  Direction facing = Direction::kUp;

  friend bool operator==(const ApproachPoint&, const ApproachPoint&) = default;
};

struct Site {
  std::string name;
  SiteKind kind = SiteKind::kTable;
  std::vector<Cell> footprint;
  std::map<Side, ApproachPoint> approach;
  std::vector<std::string> aliases;

  friend bool operator==(const Site&, const Site&) = default;
};

struct ObjectId {
  int value = 0;

  friend auto operator<=>(const ObjectId&, const ObjectId&) = default;
};

/// Where an unheld object rests: a site, the table side it is on (in the
/// table's own frame, seen from its close approach) and a lateral offset in
/// meters along that edge.
struct Placement {
  std::string site;
  Side side = Side::kClose;
  double offset = 0.0;

  friend bool operator==(const Placement&, const Placement&) = default;
};

struct ObjectInstance {
  ObjectId id;
  std::string name;
  std::map<std::string, std::string> attributes;
  std::vector<std::string> aliases;
  std::optional<Placement> placement;  // empty while held

  bool held() const { return !placement.has_value(); }
  std::string attribute(std::string_view key) const;

  friend bool operator==(const ObjectInstance&, const ObjectInstance&) = default;
};

struct RobotState {
  Cell cell;
  Direction facing = Direction::kUp;
  std::optional<ObjectId> held;
  double odometer = 0.0;

  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct SiteSide {
  const Site* site = nullptr;
  Side side = Side::kClose;
};

struct SceneMap {
  GridMap grid;
  std::vector<Site> sites;
  std::vector<ObjectInstance> objects;
  RobotState robot;

  /// Resolves a site by name or alias, ignoring case, underscores, extra
  /// whitespace and a leading article.
  const Site* find_site(std::string_view name) const;
  const ObjectInstance* find_object(ObjectId id) const;
  ObjectInstance* find_object(ObjectId id);
  /// Objects currently resting on the named site, ordered by id.
  std::vector<const ObjectInstance*> objects_at(std::string_view site) const;
  /// The site and side whose approach point the robot occupies with the
  /// approach facing, if any.
  std::optional<SiteSide> faced_site() const;

  friend bool operator==(const SceneMap&, const SceneMap&) = default;
};

/// Lowercases, maps underscores to spaces, collapses whitespace and strips a
/// leading "the", "a" or "an".
std::string normalize_label(std::string_view text);

/// True when \p query names \p object: exact normalized match against the
/// name or an alias, tolerating a trailing plural "s".
bool object_matches(const ObjectInstance& object, std::string_view query);

/// A navigation target naming a site with an optional side, written as
/// "fruit table", "far side of fruit table" or "fruit table (far side)".
struct SiteRef {
  const Site* site = nullptr;
  std::optional<Side> side;
};
std::optional<SiteRef> resolve_site_ref(const SceneMap& scene, std::string_view text);
/// Inverse of resolve_site_ref for a side-qualified target.
std::string format_site_ref(std::string_view site, std::optional<Side> side);

enum class ViolationCode {
  kGridShape,
  kEmptyFootprint,
  kDuplicateSite,
  kBlockedApproach,
  kApproachOutOfBounds,
  kUnknownSite,
  kMultipleHeld,
  kHeldMismatch,
  kDuplicateObjectId,
  kRobotCellBlocked,
  kNegativeOdometer,
  kUnreachableSite,
};

std::string_view to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string entity;

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidateOptions {
  bool check_reachability = true;
};

/// Reports every broken scene invariant; an empty result means the scene is
/// valid. Never throws.
std::vector<Violation> validate_scene(const SceneMap& scene, ValidateOptions options = {});

/// The warehouse used by the builtin suites. \p seed only perturbs the lateral
/// placement of objects along their table edge.
SceneMap canonical_scene(std::uint64_t seed = 0);

/// Nominal lateral offset for the n-th object placed on one table edge.
double placement_slot_offset(int slot);

/// Scene config file codec (UTF-8 JSON, keys grid/sites/objects/robot).
/// Unknown keys are rejected with Error(kSchemaMismatch).
std::string encode_scene(const SceneMap& scene);
SceneMap decode_scene(std::string_view json_text);

}  // namespace leanplan
