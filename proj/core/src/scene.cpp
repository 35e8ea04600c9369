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
#include "leanplan/scene.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "leanplan/error.hpp"
#include "leanplan/grid_search.hpp"

namespace leanplan {

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::kUp: return "up";
    case Direction::kRight: return "right";
    case Direction::kDown: return "down";
    case Direction::kLeft: return "left";
  }
  return "up";
}

std::string_view to_string(Side s) {
  switch (s) {
    case Side::kLeft: return "left";
    case Side::kRight: return "right";
    case Side::kFar: return "far";
    case Side::kClose: return "close";
  }
  return "close";
}

std::string_view to_string(SiteKind k) {
  switch (k) {
    case SiteKind::kTable: return "table";
    case SiteKind::kShelf: return "shelf";
    case SiteKind::kRack: return "rack";
    case SiteKind::kEntry: return "entry";
  }
  return "table";
}

std::optional<Direction> parse_direction(std::string_view text) {
  for (auto d : {Direction::kUp, Direction::kRight, Direction::kDown, Direction::kLeft}) {
    if (to_string(d) == text) return d;
  }
  return std::nullopt;
}

std::optional<Side> parse_side(std::string_view text) {
  for (auto s : {Side::kLeft, Side::kRight, Side::kFar, Side::kClose}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

std::optional<SiteKind> parse_site_kind(std::string_view text) {
  for (auto k : {SiteKind::kTable, SiteKind::kShelf, SiteKind::kRack, SiteKind::kEntry}) {
    if (to_string(k) == text) return k;
  }
  return std::nullopt;
}

Cell step(Cell c, Direction d) {
  switch (d) {
    case Direction::kUp: return {c.x, c.y - 1};
    case Direction::kRight: return {c.x + 1, c.y};
    case Direction::kDown: return {c.x, c.y + 1};
    case Direction::kLeft: return {c.x - 1, c.y};
  }
  return c;
}

GridMap::GridMap(int width, int height, double resolution)
    : width_(width), height_(height), resolution_(resolution) {
  if (width <= 0 || height <= 0 || !(resolution > 0.0)) {
    throw Error(ErrorCode::kInvalidScene, "grid dimensions and resolution must be positive");
  }
  occupancy_.assign(static_cast<std::size_t>(width) * height, 0);
}

bool GridMap::blocked(Cell c) const {
  if (!in_bounds(c)) return true;
  return occupancy_[index(c)] != 0;
}

void GridMap::set_blocked(Cell c, bool blocked) {
  if (!in_bounds(c)) {
    throw Error(ErrorCode::kInvalidScene, "cell outside grid");
  }
  occupancy_[index(c)] = blocked ? 1 : 0;
}

Cell GridMap::cell_at(std::size_t index) const {
  return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
}

std::string ObjectInstance::attribute(std::string_view key) const {
  auto it = attributes.find(std::string(key));
  return it == attributes.end() ? std::string() : it->second;
}

std::string normalize_label(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (ch == '_' || std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  for (std::string_view article : {"the ", "a ", "an "}) {
    if (out.starts_with(article)) {
      out.erase(0, article.size());
      break;
    }
  }
  return out;
}

namespace {

bool label_equals(std::string_view normalized_query, std::string_view candidate) {
  return normalized_query == normalize_label(candidate);
}

std::string strip_plural(const std::string& s) {
  if (s.size() > 1 && s.back() == 's') return s.substr(0, s.size() - 1);
  return s;
}

}  // namespace

bool object_matches(const ObjectInstance& object, std::string_view query) {
  const std::string q = normalize_label(query);
  if (q.empty()) return false;
  auto matches = [&](std::string_view candidate) {
    const std::string c = normalize_label(candidate);
    return c == q || c == strip_plural(q);
  };
  if (matches(object.name)) return true;
  return std::any_of(object.aliases.begin(), object.aliases.end(), matches);
}

const Site* SceneMap::find_site(std::string_view name) const {
  const std::string q = normalize_label(name);
  for (const auto& site : sites) {
    if (label_equals(q, site.name)) return &site;
  }
  for (const auto& site : sites) {
    for (const auto& alias : site.aliases) {
      if (label_equals(q, alias)) return &site;
    }
  }
  return nullptr;
}

const ObjectInstance* SceneMap::find_object(ObjectId id) const {
  for (const auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

ObjectInstance* SceneMap::find_object(ObjectId id) {
  for (auto& o : objects) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

std::vector<const ObjectInstance*> SceneMap::objects_at(std::string_view site) const {
  std::vector<const ObjectInstance*> out;
  for (const auto& o : objects) {
    if (o.placement && o.placement->site == site) out.push_back(&o);
  }
  std::sort(out.begin(), out.end(),
            [](const ObjectInstance* a, const ObjectInstance* b) { return a->id < b->id; });
  return out;
}

std::optional<SiteSide> SceneMap::faced_site() const {
  for (const auto& site : sites) {
    for (const auto& [side, ap] : site.approach) {
      if (ap.cell == robot.cell && ap.facing == robot.facing) return SiteSide{&site, side};
    }
  }
  return std::nullopt;
}

std::optional<SiteRef> resolve_site_ref(const SceneMap& scene, std::string_view text) {
  const std::string norm = normalize_label(text);
  if (const Site* s = scene.find_site(norm)) return SiteRef{s, std::nullopt};
  // "far side of fruit table"
  for (auto side : {Side::kLeft, Side::kRight, Side::kFar, Side::kClose}) {
    const std::string prefix = std::string(to_string(side)) + " side of ";
    if (norm.starts_with(prefix)) {
      if (const Site* s = scene.find_site(norm.substr(prefix.size()))) return SiteRef{s, side};
    }
    // "fruit table (far side)" / "fruit table, far side"
    for (std::string suffix : {" (" + std::string(to_string(side)) + " side)",
                               ", " + std::string(to_string(side)) + " side",
                               " " + std::string(to_string(side)) + " side"}) {
      if (norm.size() > suffix.size() && norm.ends_with(suffix)) {
        if (const Site* s = scene.find_site(norm.substr(0, norm.size() - suffix.size()))) {
          return SiteRef{s, side};
        }
      }
    }
  }
  return std::nullopt;
}

std::string format_site_ref(std::string_view site, std::optional<Side> side) {
  if (!side) return std::string(site);
  return std::string(to_string(*side)) + " side of " + std::string(site);
}

std::string_view to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::kGridShape: return "GridShape";
    case ViolationCode::kEmptyFootprint: return "EmptyFootprint";
    case ViolationCode::kDuplicateSite: return "DuplicateSite";
    case ViolationCode::kBlockedApproach: return "BlockedApproach";
    case ViolationCode::kApproachOutOfBounds: return "ApproachOutOfBounds";
    case ViolationCode::kUnknownSite: return "UnknownSite";
    case ViolationCode::kMultipleHeld: return "MultipleHeld";
    case ViolationCode::kHeldMismatch: return "HeldMismatch";
    case ViolationCode::kDuplicateObjectId: return "DuplicateObjectId";
    case ViolationCode::kRobotCellBlocked: return "RobotCellBlocked";
    case ViolationCode::kNegativeOdometer: return "NegativeOdometer";
    case ViolationCode::kUnreachableSite: return "UnreachableSite";
  }
  return "Unknown";
}

std::vector<Violation> validate_scene(const SceneMap& scene, ValidateOptions options) {
  std::vector<Violation> out;
  const GridMap& grid = scene.grid;
  if (grid.width() <= 0 || grid.height() <= 0 || !(grid.resolution() > 0.0) ||
      grid.cell_count() != static_cast<std::size_t>(grid.width()) * grid.height()) {
    out.push_back({ViolationCode::kGridShape, "grid"});
    return out;
  }

  std::set<std::string> names;
  for (const auto& site : scene.sites) {
    if (!names.insert(normalize_label(site.name)).second) {
      out.push_back({ViolationCode::kDuplicateSite, site.name});
    }
    if (site.footprint.empty()) out.push_back({ViolationCode::kEmptyFootprint, site.name});
    for (const auto& [side, ap] : site.approach) {
      const std::string entity = site.name + "/" + std::string(to_string(side));
      if (!grid.in_bounds(ap.cell)) {
        out.push_back({ViolationCode::kApproachOutOfBounds, entity});
      } else if (grid.blocked(ap.cell)) {
        out.push_back({ViolationCode::kBlockedApproach, entity});
      }
    }
  }

  std::set<ObjectId> ids;
  int held_count = 0;
  for (const auto& o : scene.objects) {
    if (!ids.insert(o.id).second) {
      out.push_back({ViolationCode::kDuplicateObjectId, std::to_string(o.id.value)});
    }
    if (o.held()) {
      ++held_count;
      if (!scene.robot.held || *scene.robot.held != o.id) {
        out.push_back({ViolationCode::kHeldMismatch, o.name});
      }
    } else {
      // Placements reference canonical names, not aliases.
      bool found = std::any_of(scene.sites.begin(), scene.sites.end(),
                               [&](const Site& s) { return s.name == o.placement->site; });
      if (!found) out.push_back({ViolationCode::kUnknownSite, o.placement->site});
    }
  }
  if (held_count > 1) out.push_back({ViolationCode::kMultipleHeld, "robot"});
  if (scene.robot.held) {
    const ObjectInstance* h = scene.find_object(*scene.robot.held);
    if (h == nullptr || !h->held()) {
      out.push_back({ViolationCode::kHeldMismatch, std::to_string(scene.robot.held->value)});
    }
  }
  if (grid.blocked(scene.robot.cell)) out.push_back({ViolationCode::kRobotCellBlocked, "robot"});
  if (scene.robot.odometer < 0.0) out.push_back({ViolationCode::kNegativeOdometer, "robot"});

  if (options.check_reachability && grid.free(scene.robot.cell)) {
    const DistanceField field = distance_field(grid, scene.robot.cell);
    for (const auto& site : scene.sites) {
      for (const auto& [side, ap] : site.approach) {
        if (grid.free(ap.cell) && !field.reachable(ap.cell)) {
          out.push_back({ViolationCode::kUnreachableSite,
                         site.name + "/" + std::string(to_string(side))});
        }
      }
    }
  }
  return out;
}

}  // namespace leanplan
