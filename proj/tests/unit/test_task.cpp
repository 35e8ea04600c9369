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
#include <doctest.h>

#include "generators.hpp"
#include "leanplan/error.hpp"
#include "leanplan/task.hpp"

using namespace leanplan;

namespace {

ObjectId id_of(const SceneMap& s, std::string_view name, int nth = 0) {
  for (const auto& o : s.objects) {
    if (o.name == name && nth-- == 0) return o.id;
  }
  FAIL("missing object");
  return {};
}

GoalClause move(std::string object, std::string to) {
  GoalClause c;
  c.object = std::move(object);
  c.to = std::move(to);
  return c;
}

}  // namespace

TEST_SUITE("task") {
  TEST_CASE("level suites carry the recorded instructions verbatim") {
    const int counts[] = {10, 7, 10, 10};
    for (int level = 1; level <= 4; ++level) {
      const Suite s = builtin_suite("level" + std::to_string(level));
      const auto lines = testing::fixture_lines("level" + std::to_string(level) + "_instructions.txt");
      REQUIRE(s.tasks.size() == static_cast<std::size_t>(counts[level - 1]));
      REQUIRE(lines.size() == s.tasks.size());
      CHECK(s.level == level);
      for (std::size_t i = 0; i < lines.size(); ++i) {
        CHECK(s.tasks[i].instruction == lines[i]);
        CHECK(s.tasks[i].level == level);
      }
    }
  }

  TEST_CASE("every builtin suite parses and its goals resolve") {
    for (const auto& name : builtin_suite_names()) {
      const Suite s = builtin_suite(name);
      CHECK_FALSE(s.tasks.empty());
      for (const auto& t : s.tasks) {
        SceneMap scene = canonical_scene();
        CHECK_NOTHROW(apply_setup(scene, t.setup));
        CHECK_MESSAGE(!t.goal.empty(), t.id);
        CHECK_NOTHROW(resolve_goal(t.goal, scene));
        CHECK_NOTHROW(resolve_perturbations(t.perturbations, scene));
      }
    }
    CHECK(builtin_suite("realworld").tasks.size() == 10);
    CHECK(builtin_suite("perturbation").tasks.size() == 20);
    CHECK_THROWS_AS(builtin_suite("level5"), Error);
    CHECK_THROWS_AS(builtin_data("nope.json"), Error);
  }

  TEST_CASE("suite codec round-trips") {
    for (const auto& name : builtin_suite_names()) {
      const Suite s = builtin_suite(name);
      const Suite back = parse_suite(encode_suite(s));
      CHECK(back.name == s.name);
      CHECK(back.tasks == s.tasks);
    }
  }

  TEST_CASE("schema errors name the path") {
    try {
      parse_suite(R"({"name":"x","tasks":[{"instruction":"a","goal":[{"count":"one"}]}]})");
      FAIL("expected error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kSchemaMismatch);
      CHECK(std::string(e.what()).find("tasks[0].goal[0]") != std::string::npos);
    }
  }

  TEST_CASE("repeated names bind one instance unless distinct") {
    const SceneMap s = canonical_scene();
    const ResolvedGoal g = resolve_goal({move("pepsi can", "fruit table"), move("pepsi can", "shipping table")}, s);
    REQUIRE(g.moves.size() == 1);
    CHECK(g.moves[0].dest == "shipping table");

    GoalClause second = move("squirrel toy", "fruit table");
    second.distinct = true;
    const ResolvedGoal d = resolve_goal({move("squirrel toy", "shipping table"), second}, s);
    REQUIRE(d.moves.size() == 2);
    CHECK(d.moves[0].object == id_of(s, "squirrel toy", 0));
    CHECK(d.moves[1].object == id_of(s, "squirrel toy", 1));
  }

  TEST_CASE("selectors") {
    const SceneMap s = canonical_scene();
    GoalClause smallest;
    smallest.kind = GoalClause::Kind::kSelect;
    smallest.select = {{"category", "fruit"}};
    smallest.min_attr = "size_rank";
    smallest.to = "shipping table";
    const ResolvedGoal g = resolve_goal({smallest}, s);
    REQUIRE(g.moves.size() == 1);
    CHECK(g.moves[0].object == id_of(s, "strawberry"));

    GoalClause yellow;
    yellow.kind = GoalClause::Kind::kSelect;
    yellow.select = {{"category", "fruit"}, {"color", "yellow"}};
    yellow.all = true;
    yellow.to = "shipping table";
    CHECK(resolve_goal({yellow}, s).moves.size() == 2);

    GoalClause green = yellow;
    green.select["color"] = "green";
    const ResolvedGoal vacuous = resolve_goal({green}, s);
    CHECK(vacuous.moves.empty());
    CHECK(goal_satisfied(vacuous, s));

    green.all = false;
    CHECK_THROWS_AS(resolve_goal({green}, s), Error);
  }

  TEST_CASE("goal_satisfied and end_at") {
    SceneMap s = canonical_scene();
    GoalClause go;
    go.kind = GoalClause::Kind::kGo;
    go.to = "entrance";
    const ResolvedGoal g = resolve_goal({move("apple", "fruit table"), go}, s);
    CHECK(g.end_at == "user entry");
    CHECK(goal_satisfied(g, s));  // the robot starts facing the entry
    const ApproachPoint ap = s.find_site("fruit table")->approach.begin()->second;
    s.robot.cell = ap.cell;
    s.robot.facing = ap.facing;
    CHECK_FALSE(goal_satisfied(g, s));
  }

  TEST_CASE("setup moves objects round-robin over sides") {
    SceneMap s = canonical_scene();
    apply_setup(s, {{"apple", "purchase table", std::nullopt}, {"coke can", "purchase table", std::nullopt}});
    const auto here = s.objects_at("purchase table");
    REQUIRE(here.size() == 2);
    CHECK(here[0]->placement->side != here[1]->placement->side);
    CHECK(validate_scene(s).empty());
    CHECK_THROWS_AS(apply_setup(s, {{"unicorn", "purchase table", std::nullopt}}), Error);
    CHECK_THROWS_AS(apply_setup(s, {{"apple", "attic", std::nullopt}}), Error);
  }

  TEST_CASE("plan_reaches_goal on a site-level abstraction") {
    const SceneMap s = canonical_scene();
    const ResolvedGoal g = resolve_goal({move("lemon", "drink table")}, s);
    CHECK(plan_reaches_goal({navigate_to("fruit table"), pick_object("lemon"), navigate_to("drink table"), place_held(),
                             done_call()},
                            s, g));
    CHECK_FALSE(plan_reaches_goal({navigate_to("toy rack"), pick_object("lemon"), navigate_to("drink table"),
                                   place_held(), done_call()},
                                  s, g));
  }

  TEST_CASE("instruction reader") {
    const SceneMap s = canonical_scene();
    SUBCASE("single move") {
      const auto c = read_instruction("find lemon and put it on the drink table", s);
      REQUIRE(c.has_value());
      const ResolvedGoal g = resolve_goal(*c, s);
      REQUIRE(g.moves.size() == 1);
      CHECK(g.moves[0].object == id_of(s, "lemon"));
      CHECK(g.moves[0].dest == "drink table");
    }
    SUBCASE("navigation only") {
      const auto c = read_instruction("Move to the fruit table.", s);
      REQUIRE(c.has_value());
      const ResolvedGoal g = resolve_goal(*c, s);
      CHECK(g.moves.empty());
      CHECK(g.end_at == "fruit table");
    }
    SUBCASE("chained moves") {
      const auto c = read_instruction(
          "grasp a Pepsi can and place it on the fruit table, then pick up a squirrel toy and place it on the "
          "shipping table",
          s);
      REQUIRE(c.has_value());
      const ResolvedGoal g = resolve_goal(*c, s);
      REQUIRE(g.moves.size() == 2);
      CHECK(g.moves[1].dest == "shipping table");
    }
    SUBCASE("attribute words") {
      const auto c = read_instruction("place all yellow fruits on the storage rack", s);
      REQUIRE(c.has_value());
      CHECK(resolve_goal(*c, s).moves.size() == 2);
    }
    SUBCASE("nothing to read") {
      CHECK_FALSE(read_instruction("sing me a song", s).has_value());
    }
  }

  TEST_CASE("default perturbations move the first goal object elsewhere") {
    const SceneMap s = canonical_scene();
    const Suite p = with_default_perturbations(builtin_suite("level1"), s);
    for (const auto& t : p.tasks) {
      REQUIRE(t.perturbations.size() == 1);
      CHECK(t.perturbations[0].at_step == 1);
      const ResolvedGoal g = resolve_goal(t.goal, s);
      CHECK(t.perturbations[0].site != g.moves[0].dest);
    }
    const Suite kept = with_default_perturbations(builtin_suite("perturbation"), s);
    CHECK(kept.tasks == builtin_suite("perturbation").tasks);
  }
}
