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
#include <algorithm>
#include <initializer_list>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "leanplan/error.hpp"
#include "leanplan/scene.hpp"

namespace leanplan {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& why) {
  throw Error(ErrorCode::kSchemaMismatch, path + ": " + why);
}

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) schema_error(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      schema_error(path + "." + key, "unknown key");
    }
  }
}

const json& require(const json& j, const std::string& path, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) schema_error(path + "." + key, "missing");
  return *it;
}

template <typename T>
T get_as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    schema_error(path, e.what());
  }
}

ordered_json cell_json(Cell c) { return ordered_json::array({c.x, c.y}); }

Cell parse_cell(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) schema_error(path, "expected [x, y]");
  return {get_as<int>(j[0], path + "[0]"), get_as<int>(j[1], path + "[1]")};
}

bool row_major_less(Cell a, Cell b) { return a.y != b.y ? a.y < b.y : a.x < b.x; }

ordered_json encode_runs(std::vector<Cell> cells) {
  std::sort(cells.begin(), cells.end(), row_major_less);
  ordered_json out = ordered_json::array();
  std::size_t i = 0;
  while (i < cells.size()) {
    std::size_t j = i + 1;
    while (j < cells.size() && cells[j].y == cells[i].y && cells[j].x == cells[j - 1].x + 1) ++j;
    out.push_back({{"x", cells[i].x}, {"y", cells[i].y}, {"w", static_cast<int>(j - i)}, {"h", 1}});
    i = j;
  }
  return out;
}

std::vector<Cell> decode_rects(const json& j, const std::string& path) {
  if (!j.is_array()) schema_error(path, "expected an array of rectangles");
  std::set<Cell, decltype(&row_major_less)> cells(&row_major_less);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    check_keys(j[i], p, {"x", "y", "w", "h"});
    const int x = get_as<int>(require(j[i], p, "x"), p + ".x");
    const int y = get_as<int>(require(j[i], p, "y"), p + ".y");
    const int w = get_as<int>(require(j[i], p, "w"), p + ".w");
    const int h = get_as<int>(require(j[i], p, "h"), p + ".h");
    if (w <= 0 || h <= 0) schema_error(p, "rectangle must have positive size");
    for (int yy = y; yy < y + h; ++yy) {
      for (int xx = x; xx < x + w; ++xx) cells.insert({xx, yy});
    }
  }
  return {cells.begin(), cells.end()};
}

}  // namespace

std::string encode_scene(const SceneMap& scene) {
  ordered_json root;
  std::vector<Cell> blocked;
  for (std::size_t i = 0; i < scene.grid.cell_count(); ++i) {
    const Cell c = scene.grid.cell_at(i);
    if (scene.grid.blocked(c)) blocked.push_back(c);
  }
  root["grid"] = {{"width", scene.grid.width()},
                  {"height", scene.grid.height()},
                  {"resolution", scene.grid.resolution()},
                  {"blocked", encode_runs(blocked)}};

  ordered_json sites = ordered_json::array();
  for (const auto& site : scene.sites) {
    ordered_json s;
    s["name"] = site.name;
    s["kind"] = to_string(site.kind);
    s["footprint"] = encode_runs(site.footprint);
    ordered_json approach = ordered_json::object();
    for (const auto& [side, ap] : site.approach) {
      approach[std::string(to_string(side))] = {{"cell", cell_json(ap.cell)},
                                                {"facing", to_string(ap.facing)}};
    }
    s["approach"] = approach;
    s["aliases"] = site.aliases;
    sites.push_back(std::move(s));
  }
  root["sites"] = std::move(sites);

  ordered_json objects = ordered_json::array();
  for (const auto& o : scene.objects) {
    ordered_json e;
    e["id"] = o.id.value;
    e["name"] = o.name;
    e["attributes"] = o.attributes;
    e["aliases"] = o.aliases;
    if (o.placement) {
      e["location"] = {{"site", o.placement->site},
                       {"side", to_string(o.placement->side)},
                       {"offset", o.placement->offset}};
    } else {
      e["location"] = "held";
    }
    objects.push_back(std::move(e));
  }
  root["objects"] = std::move(objects);

  root["robot"] = {{"cell", cell_json(scene.robot.cell)},
                   {"facing", to_string(scene.robot.facing)},
                   {"held", scene.robot.held ? ordered_json(scene.robot.held->value) : ordered_json()},
                   {"odometer", scene.robot.odometer}};
  return root.dump(2);
}

SceneMap decode_scene(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("scene: ") + e.what());
  }
  check_keys(root, "scene", {"grid", "sites", "objects", "robot"});
  SceneMap scene;

  const json& g = require(root, "scene", "grid");
  check_keys(g, "grid", {"width", "height", "resolution", "blocked"});
  scene.grid = GridMap(get_as<int>(require(g, "grid", "width"), "grid.width"),
                       get_as<int>(require(g, "grid", "height"), "grid.height"),
                       get_as<double>(require(g, "grid", "resolution"), "grid.resolution"));
  if (g.contains("blocked")) {
    for (Cell c : decode_rects(g["blocked"], "grid.blocked")) {
      if (!scene.grid.in_bounds(c)) schema_error("grid.blocked", "cell outside grid");
      scene.grid.set_blocked(c, true);
    }
  }

  const json& sites = require(root, "scene", "sites");
  if (!sites.is_array()) schema_error("sites", "expected an array");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const std::string p = "sites[" + std::to_string(i) + "]";
    const json& s = sites[i];
    check_keys(s, p, {"name", "kind", "footprint", "approach", "aliases"});
    Site site;
    site.name = get_as<std::string>(require(s, p, "name"), p + ".name");
    auto kind = parse_site_kind(get_as<std::string>(require(s, p, "kind"), p + ".kind"));
    if (!kind) schema_error(p + ".kind", "expected table, shelf, rack or entry");
    site.kind = *kind;
    site.footprint = decode_rects(require(s, p, "footprint"), p + ".footprint");
    const json& approach = require(s, p, "approach");
    if (!approach.is_object()) schema_error(p + ".approach", "expected an object");
    for (const auto& [key, value] : approach.items()) {
      const std::string ap_path = p + ".approach." + key;
      auto side = parse_side(key);
      if (!side) schema_error(ap_path, "expected left, right, far or close");
      check_keys(value, ap_path, {"cell", "facing"});
      auto facing = parse_direction(get_as<std::string>(require(value, ap_path, "facing"), ap_path));
      if (!facing) schema_error(ap_path + ".facing", "expected up, right, down or left");
      site.approach[*side] = {parse_cell(require(value, ap_path, "cell"), ap_path + ".cell"), *facing};
    }
    if (s.contains("aliases")) site.aliases = get_as<std::vector<std::string>>(s["aliases"], p + ".aliases");
    scene.sites.push_back(std::move(site));
  }

  const json& objects = require(root, "scene", "objects");
  if (!objects.is_array()) schema_error("objects", "expected an array");
  for (std::size_t i = 0; i < objects.size(); ++i) {
    const std::string p = "objects[" + std::to_string(i) + "]";
    const json& e = objects[i];
    check_keys(e, p, {"id", "name", "attributes", "aliases", "location"});
    ObjectInstance o;
    o.id = ObjectId{get_as<int>(require(e, p, "id"), p + ".id")};
    o.name = get_as<std::string>(require(e, p, "name"), p + ".name");
    if (e.contains("attributes")) {
      o.attributes = get_as<std::map<std::string, std::string>>(e["attributes"], p + ".attributes");
    }
    if (e.contains("aliases")) o.aliases = get_as<std::vector<std::string>>(e["aliases"], p + ".aliases");
    const json& loc = require(e, p, "location");
    if (loc.is_string()) {
      if (loc.get<std::string>() != "held") schema_error(p + ".location", "expected \"held\" or an object");
    } else {
      check_keys(loc, p + ".location", {"site", "side", "offset"});
      Placement pl;
      pl.site = get_as<std::string>(require(loc, p + ".location", "site"), p + ".location.site");
      auto side = parse_side(get_as<std::string>(require(loc, p + ".location", "side"), p + ".location.side"));
      if (!side) schema_error(p + ".location.side", "expected left, right, far or close");
      pl.side = *side;
      if (loc.contains("offset")) pl.offset = get_as<double>(loc["offset"], p + ".location.offset");
      o.placement = pl;
    }
    scene.objects.push_back(std::move(o));
  }

  const json& r = require(root, "scene", "robot");
  check_keys(r, "robot", {"cell", "facing", "held", "odometer"});
  scene.robot.cell = parse_cell(require(r, "robot", "cell"), "robot.cell");
  auto facing = parse_direction(get_as<std::string>(require(r, "robot", "facing"), "robot.facing"));
  if (!facing) schema_error("robot.facing", "expected up, right, down or left");
  scene.robot.facing = *facing;
  if (r.contains("held") && !r["held"].is_null()) {
    scene.robot.held = ObjectId{get_as<int>(r["held"], "robot.held")};
  }
  if (r.contains("odometer")) scene.robot.odometer = get_as<double>(r["odometer"], "robot.odometer");
  return scene;
}

}  // namespace leanplan
