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
#include "leanplan/sim_env.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "leanplan/error.hpp"
#include "leanplan/grid_search.hpp"

namespace leanplan {

namespace {

constexpr double kEdgeInset = 0.15;

struct Bounds {
  int x0, y0, x1, y1;
};

Bounds bounds_of(const Site& site) {
  Bounds b{std::numeric_limits<int>::max(), std::numeric_limits<int>::max(), std::numeric_limits<int>::min(),
           std::numeric_limits<int>::min()};
  for (Cell c : site.footprint) {
    b.x0 = std::min(b.x0, c.x);
    b.y0 = std::min(b.y0, c.y);
    b.x1 = std::max(b.x1, c.x);
    b.y1 = std::max(b.y1, c.y);
  }
  return b;
}

nlohmann::json cell_json(Cell c) { return nlohmann::json::array({c.x, c.y}); }

Direction move_direction(Cell from, Cell to) {
  if (to.y < from.y) return Direction::kUp;
  if (to.x > from.x) return Direction::kRight;
  if (to.y > from.y) return Direction::kDown;
  return Direction::kLeft;
}

std::vector<std::string> words_of(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '-') {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

int hint_score(const ObjectInstance& o, const std::vector<std::string>& words) {
  int score = 0;
  for (const char* key : {"color", "shape"}) {
    const std::string v = o.attribute(key);
    if (!v.empty() && std::find(words.begin(), words.end(), v) != words.end()) ++score;
  }
  return score;
}

}  // namespace

std::string_view to_string(PerturbKind k) {
  switch (k) {
    case PerturbKind::kMoveObject: return "move_object";
    case PerturbKind::kRemoveObject: return "remove_object";
    case PerturbKind::kBlockCells: return "block_cells";
  }
  return "move_object";
}

std::optional<PerturbKind> parse_perturb_kind(std::string_view text) {
  if (text == "move_object") return PerturbKind::kMoveObject;
  if (text == "remove_object") return PerturbKind::kRemoveObject;
  if (text == "block_cells") return PerturbKind::kBlockCells;
  return std::nullopt;
}

bool FaultModel::valid() const {
  auto in_unit = [](double p) { return p >= 0.0 && p <= 1.0; };
  return in_unit(misrecognition_prob) && in_unit(grasp_fail_prob) && in_unit(nav_fail_prob) &&
         forced_grasp_failures >= 0;
}

Side to_relative(Side absolute, Direction facing) {
  switch (facing) {
    case Direction::kUp: return absolute;
    case Direction::kDown:
      switch (absolute) {
        case Side::kLeft: return Side::kRight;
        case Side::kRight: return Side::kLeft;
        case Side::kFar: return Side::kClose;
        case Side::kClose: return Side::kFar;
      }
      break;
    case Direction::kRight:
      switch (absolute) {
        case Side::kLeft: return Side::kClose;
        case Side::kRight: return Side::kFar;
        case Side::kFar: return Side::kLeft;
        case Side::kClose: return Side::kRight;
      }
      break;
    case Direction::kLeft:
      switch (absolute) {
        case Side::kRight: return Side::kClose;
        case Side::kLeft: return Side::kFar;
        case Side::kClose: return Side::kLeft;
        case Side::kFar: return Side::kRight;
      }
      break;
  }
  return absolute;
}

Side to_absolute(Side relative, Direction facing) {
  for (Side s : {Side::kLeft, Side::kRight, Side::kFar, Side::kClose}) {
    if (to_relative(s, facing) == relative) return s;
  }
  return relative;
}

std::optional<Side> side_for_facing(const Site& site, Direction facing, Cell cell) {
  for (const auto& [side, ap] : site.approach) {
    if (ap.cell == cell && ap.facing == facing) return side;
  }
  return std::nullopt;
}

Point cell_center(Cell c, double resolution) { return {(c.x + 0.5) * resolution, (c.y + 0.5) * resolution}; }

Point object_point(const Site& site, const Placement& placement, double resolution) {
  const Bounds b = bounds_of(site);
  const double west = b.x0 * resolution;
  const double east = (b.x1 + 1) * resolution;
  const double north = b.y0 * resolution;
  const double south = (b.y1 + 1) * resolution;
  const double cx = (west + east) / 2.0;
  const double cy = (north + south) / 2.0;
  // Offsets run toward the right hand of a robot standing on that side.
  switch (placement.side) {
    case Side::kClose: return {cx + placement.offset, south - kEdgeInset};
    case Side::kFar: return {cx - placement.offset, north + kEdgeInset};
    case Side::kLeft: return {west + kEdgeInset, cy + placement.offset};
    case Side::kRight: return {east - kEdgeInset, cy - placement.offset};
  }
  return {cx, cy};
}

SimEnv::SimEnv(SceneMap scene, std::uint64_t seed, FaultModel faults, double arm_range)
    : scene_(std::move(scene)), seed_(seed), faults_(std::move(faults)), arm_range_(arm_range), rng_(seed) {
  if (!faults_.valid()) throw Error(ErrorCode::kInvalidConfig, "fault probabilities must lie in [0, 1]");
  if (!(arm_range_ > 0.0)) throw Error(ErrorCode::kInvalidConfig, "arm range must be positive");
  const auto violations = validate_scene(scene_, {.check_reachability = false});
  if (!violations.empty()) {
    throw Error(ErrorCode::kInvalidScene,
                std::string(to_string(violations.front().code)) + " " + violations.front().entity);
  }
  forced_left_ = faults_.forced_grasp_failures;
}

double SimEnv::uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

void SimEnv::log(std::string kind, nlohmann::json payload) {
  events_.push_back({clock_, std::move(kind), std::move(payload)});
}

std::string SimEnv::event_log_jsonl() const {
  std::ostringstream out;
  for (const auto& e : events_) {
    nlohmann::ordered_json j;
    j["t"] = e.t;
    j["kind"] = e.kind;
    j["payload"] = e.payload;
    out << j.dump() << '\n';
  }
  return out.str();
}

SkillOutcome SimEnv::walk(const std::vector<Cell>& path, double optimal, Direction final_facing,
                          nlohmann::json target) {
  SkillOutcome out;
  out.optimal = optimal;
  const double res = scene_.grid.resolution();
  std::size_t stop = path.size() - 1;
  const bool fault = faults_.nav_fail_prob > 0.0 && path.size() > 1 && uniform() < faults_.nav_fail_prob;
  if (fault) stop = (path.size() - 1) / 2;
  const double traveled = static_cast<double>(stop) * res;
  const Cell from = scene_.robot.cell;
  scene_.robot.cell = path[stop];
  scene_.robot.odometer += traveled;
  out.traveled = traveled;
  if (fault) {
    if (stop > 0) scene_.robot.facing = move_direction(path[stop - 1], path[stop]);
    out.ok = false;
    out.transient = true;
    out.detail = "navigation interrupted";
  } else {
    scene_.robot.facing = final_facing;
    out.ok = true;
    std::vector<std::string> names;
    if (const auto faced = scene_.faced_site()) {
      for (const auto* o : scene_.objects_at(faced->site->name)) names.push_back(o->name);
    }
    out.observation = std::move(names);
  }
  log("navigate", {{"target", std::move(target)},
                   {"from", cell_json(from)},
                   {"to", cell_json(scene_.robot.cell)},
                   {"traveled", traveled},
                   {"optimal", optimal},
                   {"ok", out.ok}});
  return out;
}

double SimEnv::optimal_distance(const Site& site, std::optional<Side> side) const {
  const DistanceField field(scene_.grid, scene_.robot.cell);
  double best = -1.0;
  for (const auto& [s, ap] : site.approach) {
    if (side && s != *side) continue;
    if (!field.reachable(ap.cell)) continue;
    const double d = field.meters(ap.cell);
    if (best < 0.0 || d < best) best = d;
  }
  if (best < 0.0) throw Error(ErrorCode::kUnreachable, site.name);
  return best;
}

SkillOutcome SimEnv::navigate(std::string_view target) {
  const auto comma = target.find(',');
  if (comma != std::string_view::npos) {
    const std::string xs(target.substr(0, comma));
    const std::string ys(target.substr(comma + 1));
    char* ex = nullptr;
    char* ey = nullptr;
    const double x = std::strtod(xs.c_str(), &ex);
    const double y = std::strtod(ys.c_str(), &ey);
    auto blank = [](const char* p) {
      while (*p != '\0' && std::isspace(static_cast<unsigned char>(*p))) ++p;
      return *p == '\0';
    };
    if (ex != xs.c_str() && ey != ys.c_str() && blank(ex) && blank(ey)) return navigate_point(x, y);
  }
  const auto ref = resolve_site_ref(scene_, target);
  if (!ref) throw Error(ErrorCode::kUnknownSite, std::string(target));
  return navigate_site(*ref->site, ref->side);
}

SkillOutcome SimEnv::navigate_site(const Site& site, std::optional<Side> side) {
  const DistanceField field(scene_.grid, scene_.robot.cell);
  const ApproachPoint* best = nullptr;
  std::optional<Side> best_side;
  double best_d = 0.0;
  for (const auto& [s, ap] : site.approach) {
    if (side && s != *side) continue;
    if (!field.reachable(ap.cell)) continue;
    const double d = field.meters(ap.cell);
    if (best == nullptr || d < best_d) {
      best = &ap;
      best_side = s;
      best_d = d;
    }
  }
  if (best == nullptr) throw Error(ErrorCode::kUnreachable, format_site_ref(site.name, side));
  const GridPath path = field.path_to(best->cell);
  return walk(path.cells, path.length, best->facing, format_site_ref(site.name, best_side));
}

SkillOutcome SimEnv::navigate_point(double x, double y) {
  const double res = scene_.grid.resolution();
  const Cell goal{static_cast<int>(std::floor(x / res)), static_cast<int>(std::floor(y / res))};
  if (!scene_.grid.free(goal)) throw Error(ErrorCode::kUnreachable, "(" + std::to_string(x) + ", " + std::to_string(y) + ")");
  const GridPath path = shortest_path(scene_.grid, scene_.robot.cell, goal);
  const Direction facing =
      path.cells.size() > 1 ? move_direction(path.cells[path.cells.size() - 2], path.cells.back()) : scene_.robot.facing;
  return walk(path.cells, path.length, facing, nlohmann::json::array({x, y}));
}

std::vector<const ObjectInstance*> SimEnv::visible(std::string_view name) const {
  std::vector<const ObjectInstance*> out;
  const auto faced = scene_.faced_site();
  if (!faced) return out;
  for (const auto* o : scene_.objects_at(faced->site->name)) {
    if (object_matches(*o, name)) out.push_back(o);
  }
  return out;
}

const ObjectInstance* SimEnv::primary_visible(std::string_view name) const {
  const auto objs = visible(name);
  for (const auto* o : objs) {
    if (in_reach(*o)) return o;
  }
  return objs.empty() ? nullptr : objs.front();
}

bool SimEnv::in_reach(const ObjectInstance& object) const {
  if (!object.placement) return false;
  const Site* site = scene_.find_site(object.placement->site);
  if (site == nullptr) return false;
  const double res = scene_.grid.resolution();
  const Point p = object_point(*site, *object.placement, res);
  const Point r = cell_center(scene_.robot.cell, res);
  return std::hypot(p.x - r.x, p.y - r.y) <= arm_range_ + 1e-9;
}

SkillOutcome SimEnv::pick(std::string_view name, const std::optional<std::string>& hint) {
  SkillOutcome out;
  auto finish = [&](bool ok, std::string detail, std::optional<ObjectId> grasped) {
    out.ok = ok;
    out.detail = std::move(detail);
    nlohmann::json payload = {{"target", std::string(name)}, {"ok", ok}, {"detail", out.detail}};
    if (grasped) payload["object"] = grasped->value;
    log("pick", std::move(payload));
    return out;
  };
  if (scene_.robot.held) return finish(false, "already holding an object", std::nullopt);
  if (!scene_.faced_site()) return finish(false, "not facing a table", std::nullopt);
  const auto candidates = visible(name);
  if (candidates.empty()) return finish(false, "target not found", std::nullopt);
  std::vector<const ObjectInstance*> reachable;
  for (const auto* o : candidates) {
    if (in_reach(*o)) reachable.push_back(o);
  }
  if (reachable.empty()) return finish(false, "out of arm range", std::nullopt);

  const ObjectInstance* chosen = reachable.front();
  if (reachable.size() > 1 && hint) {
    const auto words = words_of(*hint);
    int best = -1;
    for (const auto* o : reachable) {
      const int s = hint_score(*o, words);
      if (s > best) {
        best = s;
        chosen = o;
      }
    }
  }

  if (forced_left_ > 0) {
    --forced_left_;
    out.transient = true;
    return finish(false, "grasp failed", std::nullopt);
  }
  if (faults_.grasp_fail_prob > 0.0 && uniform() < faults_.grasp_fail_prob) {
    out.transient = true;
    return finish(false, "grasp failed", std::nullopt);
  }
  if (faults_.misrecognition_prob > 0.0 && uniform() < faults_.misrecognition_prob) {
    for (const auto* o : scene_.objects_at(chosen->placement->site)) {
      if (o->id != chosen->id && in_reach(*o)) {
        chosen = o;
        break;
      }
    }
  }
  const ObjectId id = chosen->id;
  ObjectInstance* obj = scene_.find_object(id);
  obj->placement.reset();
  scene_.robot.held = id;
  return finish(true, obj->name, id);
}

SkillOutcome SimEnv::place() {
  SkillOutcome out;
  const auto faced = scene_.faced_site();
  if (!scene_.robot.held) {
    out.detail = "nothing held";
  } else if (!faced) {
    out.detail = "not facing a table";
  } else {
    int count = 0;
    for (const auto* o : scene_.objects_at(faced->site->name)) {
      if (o->placement->side == faced->side) ++count;
    }
    ObjectInstance* obj = scene_.find_object(*scene_.robot.held);
    obj->placement = Placement{faced->site->name, faced->side, placement_slot_offset(count)};
    scene_.robot.held.reset();
    out.ok = true;
    out.detail = obj->name;
    log("place", {{"object", obj->id.value}, {"site", faced->site->name}, {"side", to_string(faced->side)}, {"ok", true}});
    return out;
  }
  log("place", {{"ok", false}, {"detail", out.detail}});
  return out;
}

std::vector<Observation> SimEnv::observe() const {
  const auto faced = scene_.faced_site();
  if (!faced) throw Error(ErrorCode::kNotFacingSite, "robot is not at an approach point");
  std::vector<Observation> out;
  for (const auto* o : scene_.objects_at(faced->site->name)) {
    out.push_back({o->id, o->name, o->attributes, o->placement->side});
  }
  return out;
}

Side SimEnv::table_side(std::string_view name) const {
  const auto faced = scene_.faced_site();
  if (!faced) throw Error(ErrorCode::kNotFacingSite, "robot is not at an approach point");
  const ObjectInstance* primary = primary_visible(name);
  if (primary == nullptr) throw Error(ErrorCode::kObjectNotVisible, std::string(name));
  const ObjectInstance& o = *primary;
  const Site& site = *faced->site;
  const Bounds b = bounds_of(site);
  const double res = scene_.grid.resolution();
  const Point p = object_point(site, *o.placement, res);
  std::array<std::pair<Side, double>, 4> abs_dist = {{
      {Side::kLeft, p.x - b.x0 * res},
      {Side::kRight, (b.x1 + 1) * res - p.x},
      {Side::kFar, p.y - b.y0 * res},
      {Side::kClose, (b.y1 + 1) * res - p.y},
  }};
  Side best = Side::kClose;
  double best_d = std::numeric_limits<double>::infinity();
  for (Side rel : {Side::kLeft, Side::kRight, Side::kFar, Side::kClose}) {
    const Side abs = to_absolute(rel, scene_.robot.facing);
    double d = 0.0;
    for (const auto& [s, v] : abs_dist) {
      if (s == abs) d = v;
    }
    if (d < best_d - 1e-9) {
      best_d = d;
      best = rel;
    }
  }
  return best;
}

void SimEnv::perturb(const PerturbEvent& event) {
  nlohmann::json payload;
  switch (event.kind) {
    case PerturbKind::kMoveObject: {
      ObjectInstance* obj = scene_.find_object(event.object);
      if (obj == nullptr || obj->held()) throw Error(ErrorCode::kUnknownObject, std::to_string(event.object.value));
      const Site* site = scene_.find_site(event.site);
      if (site == nullptr) throw Error(ErrorCode::kUnknownSite, event.site);
      Side side = event.side.value_or(Side::kClose);
      if (site->approach.count(side) == 0) {
        if (site->approach.empty()) throw Error(ErrorCode::kInvalidPerturbation, site->name);
        side = site->approach.begin()->first;
      }
      int count = 0;
      for (const auto* o : scene_.objects_at(site->name)) {
        if (o->id != obj->id && o->placement->side == side) ++count;
      }
      obj->placement = Placement{site->name, side, placement_slot_offset(count)};
      payload = {{"object", obj->id.value}, {"site", site->name}, {"side", to_string(side)}};
      break;
    }
    case PerturbKind::kRemoveObject: {
      const ObjectInstance* obj = scene_.find_object(event.object);
      if (obj == nullptr || obj->held()) throw Error(ErrorCode::kUnknownObject, std::to_string(event.object.value));
      const int id = obj->id.value;
      scene_.objects.erase(std::remove_if(scene_.objects.begin(), scene_.objects.end(),
                                          [&](const ObjectInstance& o) { return o.id == event.object; }),
                           scene_.objects.end());
      payload = {{"object", id}};
      break;
    }
    case PerturbKind::kBlockCells: {
      for (Cell c : event.cells) {
        if (!scene_.grid.in_bounds(c) || c == scene_.robot.cell) {
          throw Error(ErrorCode::kInvalidPerturbation, "cell " + std::to_string(c.x) + "," + std::to_string(c.y));
        }
        for (const auto& site : scene_.sites) {
          for (const auto& [s, ap] : site.approach) {
            if (ap.cell == c) throw Error(ErrorCode::kInvalidPerturbation, "approach point of " + site.name);
          }
        }
      }
      nlohmann::json cells = nlohmann::json::array();
      for (Cell c : event.cells) {
        scene_.grid.set_blocked(c, true);
        cells.push_back(cell_json(c));
      }
      payload = {{"cells", std::move(cells)}};
      break;
    }
  }
  log(std::string("perturb.") + std::string(to_string(event.kind)), std::move(payload));
}

void SimEnv::fire_scripted(int step) {
  for (const auto& sp : faults_.scripted_perturbations) {
    if (sp.at_step == step) perturb(sp.event);
  }
}

}  // namespace leanplan
