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
#include "leanplan/task.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <set>

#include <nlohmann/json.hpp>

#include "leanplan/error.hpp"

namespace leanplan {

namespace detail {
const std::map<std::string, std::string_view>& embedded_data();
}  // namespace detail

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void schema(const std::string& path) { throw Error(ErrorCode::kSchemaMismatch, path); }

std::string req_string(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key) || !j[key].is_string()) schema(path + "." + key);
  return j[key].get<std::string>();
}

std::optional<std::string> opt_string(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) return std::nullopt;
  if (!j[key].is_string()) schema(path + "." + key);
  return j[key].get<std::string>();
}

std::optional<Side> opt_side(const json& j, const std::string& path) {
  const auto s = opt_string(j, "side", path);
  if (!s) return std::nullopt;
  const auto side = parse_side(*s);
  if (!side) schema(path + ".side");
  return side;
}

GoalClause parse_clause(const json& j, const std::string& path) {
  if (!j.is_object()) schema(path);
  GoalClause c;
  if (j.contains("go")) {
    c.kind = GoalClause::Kind::kGo;
    c.to = req_string(j, "go", path);
    return c;
  }
  c.to = req_string(j, "to", path);
  if (j.contains("object")) {
    c.kind = GoalClause::Kind::kMove;
    c.object = req_string(j, "object", path);
    if (j.contains("distinct")) {
      if (!j["distinct"].is_boolean()) schema(path + ".distinct");
      c.distinct = j["distinct"].get<bool>();
    }
    return c;
  }
  if (!j.contains("select") || !j["select"].is_object()) schema(path + ".select");
  c.kind = GoalClause::Kind::kSelect;
  for (const auto& [k, v] : j["select"].items()) {
    if (!v.is_string()) schema(path + ".select." + k);
    c.select[k] = v.get<std::string>();
  }
  const std::string count = j.contains("count") ? req_string(j, "count", path) : "one";
  if (count == "all") {
    c.all = true;
  } else if (count != "one") {
    schema(path + ".count");
  }
  c.from = opt_string(j, "from", path);
  c.min_attr = opt_string(j, "min", path);
  c.max_attr = opt_string(j, "max", path);
  return c;
}

ojson encode_clause(const GoalClause& c) {
  ojson j;
  switch (c.kind) {
    case GoalClause::Kind::kGo: j["go"] = c.to; return j;
    case GoalClause::Kind::kMove:
      j["object"] = c.object;
      if (c.distinct) j["distinct"] = true;
      j["to"] = c.to;
      return j;
    case GoalClause::Kind::kSelect:
      j["select"] = ojson::object();
      for (const auto& [k, v] : c.select) j["select"][k] = v;
      j["count"] = c.all ? "all" : "one";
      if (c.from) j["from"] = *c.from;
      if (c.min_attr) j["min"] = *c.min_attr;
      if (c.max_attr) j["max"] = *c.max_attr;
      j["to"] = c.to;
      return j;
  }
  return j;
}

const std::string& canonical_site(const SceneMap& scene, const std::string& name) {
  const Site* s = scene.find_site(name);
  if (s == nullptr) throw Error(ErrorCode::kUnknownSite, name);
  return s->name;
}

bool selector_matches(const ObjectInstance& o, const std::map<std::string, std::string>& select) {
  for (const auto& [k, v] : select) {
    if (k == "name") {
      if (!object_matches(o, v)) return false;
    } else if (normalize_label(o.attribute(k)) != normalize_label(v)) {
      return false;
    }
  }
  return true;
}

double numeric_attribute(const ObjectInstance& o, const std::string& key) {
  const std::string v = o.attribute(key);
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (v.empty() || *end != '\0') throw Error(ErrorCode::kSchemaMismatch, o.name + "." + key + " is not numeric");
  return d;
}

}  // namespace

Suite parse_suite(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("suite: ") + e.what());
  }
  if (!j.is_object()) schema("$");
  Suite suite;
  suite.name = j.contains("name") ? req_string(j, "name", "$") : "";
  if (j.contains("level")) {
    if (!j["level"].is_number_integer()) schema("$.level");
    suite.level = j["level"].get<int>();
    if (suite.level < 0 || suite.level > 4) schema("$.level");
  }
  if (!j.contains("tasks") || !j["tasks"].is_array()) schema("$.tasks");
  std::set<std::string> ids;
  for (std::size_t i = 0; i < j["tasks"].size(); ++i) {
    const auto& t = j["tasks"][i];
    const std::string path = "$.tasks[" + std::to_string(i) + "]";
    if (!t.is_object()) schema(path);
    Task task;
    task.id = t.contains("id") ? req_string(t, "id", path) : suite.name + "-" + std::to_string(i + 1);
    if (!ids.insert(task.id).second) schema(path + ".id");
    task.instruction = req_string(t, "instruction", path);
    task.level = suite.level;
    if (t.contains("level")) {
      if (!t["level"].is_number_integer()) schema(path + ".level");
      task.level = t["level"].get<int>();
      if (task.level < 1 || task.level > 4) schema(path + ".level");
    }
    task.session = t.contains("session") ? req_string(t, "session", path) : task.id;
    if (t.contains("setup")) {
      if (!t["setup"].is_array()) schema(path + ".setup");
      for (std::size_t k = 0; k < t["setup"].size(); ++k) {
        const auto& s = t["setup"][k];
        const std::string sp = path + ".setup[" + std::to_string(k) + "]";
        if (!s.is_object()) schema(sp);
        task.setup.push_back({req_string(s, "object", sp), req_string(s, "site", sp), opt_side(s, sp)});
      }
    }
    if (t.contains("goal")) {
      if (!t["goal"].is_array()) schema(path + ".goal");
      for (std::size_t k = 0; k < t["goal"].size(); ++k) {
        task.goal.push_back(parse_clause(t["goal"][k], path + ".goal[" + std::to_string(k) + "]"));
      }
    }
    if (t.contains("perturbations")) {
      if (!t["perturbations"].is_array()) schema(path + ".perturbations");
      for (std::size_t k = 0; k < t["perturbations"].size(); ++k) {
        const auto& p = t["perturbations"][k];
        const std::string pp = path + ".perturbations[" + std::to_string(k) + "]";
        if (!p.is_object()) schema(pp);
        PerturbSpec spec;
        if (!p.contains("at_step") || !p["at_step"].is_number_integer()) schema(pp + ".at_step");
        spec.at_step = p["at_step"].get<int>();
        const auto kind = parse_perturb_kind(req_string(p, "kind", pp));
        if (!kind) schema(pp + ".kind");
        spec.kind = *kind;
        spec.object = opt_string(p, "object", pp).value_or("");
        spec.site = opt_string(p, "site", pp).value_or("");
        spec.side = opt_side(p, pp);
        if (p.contains("cells")) {
          if (!p["cells"].is_array()) schema(pp + ".cells");
          for (const auto& c : p["cells"]) {
            if (!c.is_array() || c.size() != 2 || !c[0].is_number_integer() || !c[1].is_number_integer()) {
              schema(pp + ".cells");
            }
            spec.cells.push_back({c[0].get<int>(), c[1].get<int>()});
          }
        }
        task.perturbations.push_back(std::move(spec));
      }
    }
    suite.tasks.push_back(std::move(task));
  }
  return suite;
}

std::string encode_suite(const Suite& suite) {
  ojson j;
  j["name"] = suite.name;
  j["level"] = suite.level;
  j["tasks"] = ojson::array();
  for (const auto& t : suite.tasks) {
    ojson jt;
    jt["id"] = t.id;
    if (t.level != suite.level) jt["level"] = t.level;
    jt["instruction"] = t.instruction;
    if (t.session != t.id) jt["session"] = t.session;
    if (!t.setup.empty()) {
      jt["setup"] = ojson::array();
      for (const auto& s : t.setup) {
        ojson js;
        js["object"] = s.object;
        js["site"] = s.site;
        if (s.side) js["side"] = to_string(*s.side);
        jt["setup"].push_back(std::move(js));
      }
    }
    if (!t.goal.empty()) {
      jt["goal"] = ojson::array();
      for (const auto& c : t.goal) jt["goal"].push_back(encode_clause(c));
    }
    if (!t.perturbations.empty()) {
      jt["perturbations"] = ojson::array();
      for (const auto& p : t.perturbations) {
        ojson jp;
        jp["at_step"] = p.at_step;
        jp["kind"] = to_string(p.kind);
        if (!p.object.empty()) jp["object"] = p.object;
        if (!p.site.empty()) jp["site"] = p.site;
        if (p.side) jp["side"] = to_string(*p.side);
        if (!p.cells.empty()) {
          jp["cells"] = ojson::array();
          for (Cell c : p.cells) jp["cells"].push_back({c.x, c.y});
        }
        jt["perturbations"].push_back(std::move(jp));
      }
    }
    j["tasks"].push_back(std::move(jt));
  }
  return j.dump(2);
}

std::vector<std::string> builtin_suite_names() {
  return {"level1", "level2", "level3", "level4", "realworld", "perturbation", "memory_repeat"};
}

std::string_view builtin_data(std::string_view path) {
  const auto& files = detail::embedded_data();
  const auto it = files.find(std::string(path));
  if (it == files.end()) throw Error(ErrorCode::kInvalidConfig, "no builtin data file " + std::string(path));
  return it->second;
}

Suite builtin_suite(std::string_view name) {
  const auto names = builtin_suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw Error(ErrorCode::kInvalidConfig, "unknown suite " + std::string(name));
  }
  return parse_suite(builtin_data("suites/" + std::string(name) + ".json"));
}

void apply_setup(SceneMap& scene, const std::vector<SetupItem>& setup) {
  static constexpr std::array<Side, 4> kSideCycle = {Side::kClose, Side::kLeft, Side::kRight, Side::kFar};
  std::set<ObjectId> moved;
  for (const auto& item : setup) {
    const Site* site = scene.find_site(item.site);
    if (site == nullptr) throw Error(ErrorCode::kUnknownSite, item.site);
    ObjectInstance* target = nullptr;
    for (auto& o : scene.objects) {
      if (!o.held() && moved.count(o.id) == 0 && object_matches(o, item.object)) {
        target = &o;
        break;
      }
    }
    if (target == nullptr) throw Error(ErrorCode::kUnknownObject, item.object);
    moved.insert(target->id);
    target->placement.reset();
    const auto here = scene.objects_at(site->name);
    Side side = item.side.value_or(kSideCycle[here.size() % kSideCycle.size()]);
    if (site->approach.count(side) == 0) {
      if (site->approach.empty()) throw Error(ErrorCode::kUnknownSite, site->name + " has no approach point");
      side = site->approach.begin()->first;
    }
    int slot = 0;
    for (const auto* o : here) {
      if (o->placement->side == side) ++slot;
    }
    target->placement = Placement{site->name, side, placement_slot_offset(slot)};
  }
}

ResolvedGoal resolve_goal(const std::vector<GoalClause>& clauses, const SceneMap& scene) {
  ResolvedGoal goal;
  std::set<ObjectId> assigned;
  std::map<std::string, ObjectId> by_name;
  std::vector<ObjectId> named_moves;

  auto upsert_move = [&](ObjectId id, const std::string& dest) {
    for (auto& m : goal.moves) {
      if (m.object == id) {
        m.dest = dest;
        return;
      }
    }
    goal.moves.push_back({id, dest});
  };

  for (const auto& c : clauses) {
    switch (c.kind) {
      case GoalClause::Kind::kGo: goal.end_at = canonical_site(scene, c.to); break;
      case GoalClause::Kind::kMove: {
        const std::string& dest = canonical_site(scene, c.to);
        const std::string key = normalize_label(c.object);
        const auto prior = by_name.find(key);
        if (!c.distinct && prior != by_name.end()) {
          upsert_move(prior->second, dest);
          break;
        }
        const ObjectInstance* pick = nullptr;
        for (const auto& o : scene.objects) {
          if (assigned.count(o.id) == 0 && object_matches(o, c.object)) {
            pick = &o;
            break;
          }
        }
        if (pick == nullptr) throw Error(ErrorCode::kImpossibleTask, "no " + c.object + " in the scene");
        assigned.insert(pick->id);
        by_name[key] = pick->id;
        named_moves.push_back(pick->id);
        upsert_move(pick->id, dest);
        break;
      }
      case GoalClause::Kind::kSelect: {
        const std::string& dest = canonical_site(scene, c.to);
        std::optional<std::string> from;
        if (c.from) from = canonical_site(scene, *c.from);
        std::vector<const ObjectInstance*> pool;
        for (const auto& o : scene.objects) {
          if (assigned.count(o.id) != 0 || !selector_matches(o, c.select)) continue;
          if (from && (!o.placement || o.placement->site != *from)) continue;
          pool.push_back(&o);
        }
        if (c.all) {
          GoalCheck check{{}, 0, dest};
          for (const auto* o : pool) {
            assigned.insert(o->id);
            upsert_move(o->id, dest);
            check.candidates.push_back(o->id);
          }
          check.need = static_cast<int>(check.candidates.size());
          if (check.need > 0) goal.checks.push_back(std::move(check));
          break;
        }
        if (pool.empty()) throw Error(ErrorCode::kImpossibleTask, "nothing matches the selector");
        const ObjectInstance* chosen = pool.front();
        if (c.min_attr || c.max_attr) {
          const std::string key = c.min_attr ? *c.min_attr : *c.max_attr;
          for (const auto* o : pool) {
            const double v = numeric_attribute(*o, key);
            const double best = numeric_attribute(*chosen, key);
            if (c.min_attr ? v < best : v > best) chosen = o;
          }
          goal.checks.push_back({{chosen->id}, 1, dest});
        } else {
          GoalCheck check{{}, 1, dest};
          for (const auto* o : pool) check.candidates.push_back(o->id);
          goal.checks.push_back(std::move(check));
        }
        assigned.insert(chosen->id);
        upsert_move(chosen->id, dest);
        break;
      }
    }
  }
  for (ObjectId id : named_moves) {
    for (const auto& m : goal.moves) {
      if (m.object == id) goal.checks.push_back({{id}, 1, m.dest});
    }
  }
  return goal;
}

bool goal_satisfied(const ResolvedGoal& goal, const SceneMap& scene) {
  for (const auto& check : goal.checks) {
    int have = 0;
    for (ObjectId id : check.candidates) {
      const auto* o = scene.find_object(id);
      if (o != nullptr && o->placement && o->placement->site == check.dest) ++have;
    }
    if (have < check.need) return false;
  }
  if (goal.end_at) {
    const auto faced = scene.faced_site();
    if (!faced || faced->site->name != *goal.end_at) return false;
  }
  return true;
}

std::vector<ScriptedPerturbation> resolve_perturbations(const std::vector<PerturbSpec>& specs,
                                                        const SceneMap& scene) {
  std::vector<ScriptedPerturbation> out;
  for (const auto& spec : specs) {
    PerturbEvent ev;
    ev.kind = spec.kind;
    ev.side = spec.side;
    ev.cells = spec.cells;
    if (spec.kind != PerturbKind::kBlockCells) {
      const ObjectInstance* target = nullptr;
      for (const auto& o : scene.objects) {
        if (object_matches(o, spec.object)) {
          target = &o;
          break;
        }
      }
      if (target == nullptr) throw Error(ErrorCode::kUnknownObject, spec.object);
      ev.object = target->id;
    }
    if (spec.kind == PerturbKind::kMoveObject) ev.site = canonical_site(scene, spec.site);
    out.push_back({spec.at_step, std::move(ev)});
  }
  return out;
}

Suite with_default_perturbations(Suite suite, const SceneMap& scene) {
  for (auto& task : suite.tasks) {
    if (!task.perturbations.empty()) continue;
    SceneMap s = scene;
    std::optional<ResolvedGoal> goal;
    try {
      apply_setup(s, task.setup);
      if (!task.goal.empty()) {
        goal = resolve_goal(task.goal, s);
      } else if (const auto clauses = read_instruction(task.instruction, s)) {
        goal = resolve_goal(*clauses, s);
      }
    } catch (const Error&) {
      continue;
    }
    if (!goal || goal->moves.empty()) continue;
    const Move& first = goal->moves.front();
    const ObjectInstance* o = s.find_object(first.object);
    if (o == nullptr || !o->placement) continue;
    for (const auto& site : s.sites) {
      if (site.kind == SiteKind::kEntry || site.name == o->placement->site || site.name == first.dest) continue;
      PerturbSpec spec;
      spec.at_step = 1;
      spec.kind = PerturbKind::kMoveObject;
      spec.object = o->name;
      spec.site = site.name;
      task.perturbations.push_back(std::move(spec));
      break;
    }
  }
  return suite;
}

bool plan_reaches_goal(const std::vector<SkillCall>& calls, const SceneMap& scene, const ResolvedGoal& goal) {
  SceneMap s = scene;
  std::optional<std::string> at;
  if (const auto faced = s.faced_site()) at = faced->site->name;
  for (const auto& call : calls) {
    if (call.skill == Skill::kDone) break;
    switch (call.skill) {
      case Skill::kNavigate: {
        at.reset();
        if (call.params.size() == 1) {
          if (const auto ref = resolve_site_ref(s, call.params[0])) at = ref->site->name;
        }
        break;
      }
      case Skill::kPick: {
        if (s.robot.held || !at || call.params.size() != 1) break;
        for (auto& o : s.objects) {
          if (o.placement && o.placement->site == *at && object_matches(o, call.params[0])) {
            o.placement.reset();
            s.robot.held = o.id;
            break;
          }
        }
        break;
      }
      case Skill::kPlace: {
        if (!s.robot.held || !at) break;
        s.find_object(*s.robot.held)->placement = Placement{*at, Side::kClose, 0.0};
        s.robot.held.reset();
        break;
      }
      case Skill::kDone: break;
    }
  }
  for (const auto& check : goal.checks) {
    int have = 0;
    for (ObjectId id : check.candidates) {
      const auto* o = s.find_object(id);
      if (o != nullptr && o->placement && o->placement->site == check.dest) ++have;
    }
    if (have < check.need) return false;
  }
  return !goal.end_at || (at && *at == *goal.end_at);
}

}  // namespace leanplan
