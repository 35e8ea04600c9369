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

#include "leanplan/error.hpp"
#include "leanplan/grid_search.hpp"
#include "leanplan/sim_env.hpp"
#include "leanplan/skill_isa.hpp"

using namespace leanplan;

namespace {

const ObjectInstance& object_named(const SceneMap& s, std::string_view name) {
  for (const auto& o : s.objects) {
    if (o.name == name) return o;
  }
  FAIL("missing object");
  return s.objects.front();
}

// Navigates to the side of the object's site it rests on.
void face_object(SimEnv& env, std::string_view name) {
  const auto& o = object_named(env.scene(), name);
  const Site* site = env.scene().find_site(o.placement->site);
  REQUIRE(env.navigate_site(*site, o.placement->side).ok);
}

}  // namespace

TEST_SUITE("sim_env") {
  TEST_CASE("navigation faces the site and reports contents") {
    SimEnv env(canonical_scene(), 1);
    const auto out = env.navigate("fruit table");
    REQUIRE(out.ok);
    REQUIRE(out.observation.has_value());
    CHECK(out.observation->size() == 5);
    CHECK(out.traveled.value() >= out.optimal.value() - 1e-9);
    const auto faced = env.scene().faced_site();
    REQUIRE(faced.has_value());
    CHECK(faced->site->name == "fruit table");
    CHECK(env.scene().robot.odometer == doctest::Approx(*out.traveled));
  }

  TEST_CASE("unknown targets throw") {
    SimEnv env(canonical_scene(), 1);
    CHECK_THROWS_AS(env.navigate("moon base"), Error);
  }

  TEST_CASE("pick and place move exactly one object") {
    SimEnv env(canonical_scene(), 1);
    face_object(env, "lemon");
    const auto picked = env.pick("lemon");
    REQUIRE(picked.ok);
    CHECK(env.scene().robot.held.has_value());
    CHECK(object_named(env.scene(), "lemon").held());
    REQUIRE(env.navigate("drink table").ok);
    REQUIRE(env.place().ok);
    CHECK_FALSE(env.scene().robot.held.has_value());
    CHECK(object_named(env.scene(), "lemon").placement->site == "drink table");
    CHECK(env.scene().objects.size() == 22);
  }

  TEST_CASE("picking an absent object fails without changing the scene") {
    SimEnv env(canonical_scene(), 1);
    REQUIRE(env.navigate("toy rack").ok);
    const SceneMap before = env.scene();
    const auto out = env.pick("lemon");
    CHECK_FALSE(out.ok);
    CHECK(out.detail == "target not found");
    CHECK(env.scene() == before);
  }

  TEST_CASE("table_side answers relative to the robot") {
    SimEnv env(canonical_scene(), 1);
    face_object(env, "apple");
    CHECK(env.table_side("apple") == Side::kClose);
    CHECK_THROWS_AS(env.table_side("coke can"), Error);
  }

  TEST_CASE("relative and absolute sides are inverse") {
    for (auto d : {Direction::kUp, Direction::kRight, Direction::kDown, Direction::kLeft}) {
      for (auto s : {Side::kLeft, Side::kRight, Side::kFar, Side::kClose}) {
        CHECK(to_absolute(to_relative(s, d), d) == s);
      }
    }
  }

  TEST_CASE("forced grasp failures are transient") {
    FaultModel f;
    f.forced_grasp_failures = 1;
    SimEnv env(canonical_scene(), 1, f);
    face_object(env, "apple");
    const auto first = env.pick("apple");
    CHECK_FALSE(first.ok);
    CHECK(first.transient);
    CHECK(env.pick("apple").ok);
  }

  TEST_CASE("fault probabilities are validated") {
    FaultModel f;
    f.nav_fail_prob = 1.5;
    CHECK_THROWS_AS(SimEnv(canonical_scene(), 1, f), Error);
  }

  TEST_CASE("scripted perturbations fire at their step") {
    SceneMap s = canonical_scene();
    FaultModel f;
    PerturbEvent ev;
    ev.kind = PerturbKind::kMoveObject;
    ev.object = object_named(s, "apple").id;
    ev.site = "dining table";
    f.scripted_perturbations.push_back({2, ev});
    SimEnv env(s, 1, f);
    env.fire_scripted(1);
    CHECK(object_named(env.scene(), "apple").placement->site == "fruit table");
    env.fire_scripted(2);
    CHECK(object_named(env.scene(), "apple").placement->site == "dining table");
    CHECK_FALSE(env.event_log().empty());
  }

  TEST_CASE("blocking cells reroutes navigation") {
    SimEnv env(canonical_scene(), 1);
    PerturbEvent ev;
    ev.kind = PerturbKind::kBlockCells;
    ev.cells = {{31, 40}, {31, 41}};
    env.perturb(ev);
    CHECK(env.scene().grid.blocked({31, 40}));
    CHECK_THROWS_AS(env.perturb(PerturbEvent{PerturbKind::kRemoveObject, ObjectId{999}, "", {}, {}}), Error);
  }

  TEST_CASE("same seed gives the same event log") {
    FaultModel f;
    f.nav_fail_prob = 0.3;
    f.grasp_fail_prob = 0.3;
    auto run = [&] {
      SimEnv env(canonical_scene(), 42, f);
      for (const char* t : {"fruit table", "drink table", "toy rack", "fruit table"}) {
        env.navigate(t);
        env.pick("apple");
      }
      return env.event_log_jsonl();
    };
    CHECK(run() == run());
  }
}

TEST_SUITE("skill_isa") {
  TEST_CASE("catalog has the four skills") {
    CHECK(skill_catalog().size() == 4);
  }

  TEST_CASE("preconditions") {
    SimEnv env(canonical_scene(), 1);
    CHECK(check_preconditions(place_held(), env.scene())->code == PreconditionCode::kNothingHeld);
    CHECK(check_preconditions(navigate_to("attic"), env.scene())->code == PreconditionCode::kUnknownSite);
    CHECK_FALSE(check_preconditions(navigate_to("fruit table"), env.scene()).has_value());
    SkillCall bad = pick_object("a");
    bad.params.push_back("b");
    CHECK(check_preconditions(bad, env.scene())->code == PreconditionCode::kBadArity);
    face_object(env, "apple");
    REQUIRE(dispatch(pick_object("apple"), env).ok);
    const auto v = check_preconditions(pick_object("banana"), env.scene());
    REQUIRE(v.has_value());
    CHECK(v->code == PreconditionCode::kHoldOne);
    CHECK(violation_detail(*v, env.scene()).find("apple") != std::string::npos);
    CHECK_THROWS_AS(dispatch(pick_object("banana"), env), Error);
  }

  TEST_CASE("dispatch turns unreachable targets into failures") {
    SimEnv env(canonical_scene(), 1);
    const Site* fruit = env.scene().find_site("fruit table");
    PerturbEvent wall;
    wall.kind = PerturbKind::kBlockCells;
    for (const auto& [side, ap] : fruit->approach) {
      (void)side;
      for (auto d : {Direction::kUp, Direction::kRight, Direction::kDown, Direction::kLeft}) {
        const Cell n = step(ap.cell, d);
        bool on_table = false;
        for (const auto& c : fruit->footprint) on_table |= c == n;
        if (!on_table && env.scene().grid.free(n)) wall.cells.push_back(n);
      }
    }
    env.perturb(wall);
    const auto out = dispatch(navigate_to("fruit table"), env);
    CHECK_FALSE(out.ok);
  }

  TEST_CASE("feedback for outcomes") {
    SkillOutcome ok;
    ok.ok = true;
    ok.observation = std::vector<std::string>{"apple"};
    CHECK(feedback_for(navigate_to("x"), ok).kind == FeedbackKind::kNavSuccess);
    SkillOutcome bad;
    bad.detail = "target not found";
    const auto fb = feedback_for(pick_object("x"), bad);
    CHECK(fb.kind == FeedbackKind::kPickFail);
    CHECK(fb.detail == "target not found");
  }
}
