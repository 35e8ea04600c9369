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

#include <set>

#include "leanplan/error.hpp"
#include "leanplan/scene.hpp"

using namespace leanplan;

TEST_SUITE("scene") {
  TEST_CASE("canonical scene is valid and complete") {
    const SceneMap s = canonical_scene();
    CHECK(validate_scene(s).empty());
    CHECK(s.grid.width() == 64);
    CHECK(s.grid.height() == 64);
    CHECK(s.grid.resolution() == doctest::Approx(0.1));
    for (const char* name : {"fruit table", "drink table", "toy rack", "storage rack", "dining table",
                             "receiving shelf", "shipping table", "purchase table", "user entry"}) {
      CHECK_MESSAGE(s.find_site(name) != nullptr, name);
    }
    std::set<int> ids;
    for (const auto& o : s.objects) ids.insert(o.id.value);
    CHECK(ids.size() == 22);
    CHECK(*ids.begin() == 1);
    CHECK(*ids.rbegin() == 22);
    CHECK(s.objects_at("fruit table").size() == 5);
    CHECK(s.objects_at("receiving shelf").size() == 1);
  }

  TEST_CASE("site lookup tolerates aliases, case and articles") {
    const SceneMap s = canonical_scene();
    CHECK(s.find_site("the Toy Table")->name == "toy rack");
    CHECK(s.find_site("table with the toys")->name == "toy rack");
    CHECK(s.find_site("storage_shelf")->name == "storage rack");
    CHECK(s.find_site("entrance")->name == "user entry");
    CHECK(s.find_site("kitchen") == nullptr);
  }

  TEST_CASE("normalize_label") {
    CHECK(normalize_label("  The  Fruit_Table ") == "fruit table");
    CHECK(normalize_label("an apple") == "apple");
    CHECK(normalize_label("APPLE") == "apple");
  }

  TEST_CASE("object_matches names, aliases and plurals") {
    const SceneMap s = canonical_scene();
    const ObjectInstance* coke = nullptr;
    const ObjectInstance* apple = nullptr;
    for (const auto& o : s.objects) {
      if (o.name == "coke can") coke = &o;
      if (o.name == "apple") apple = &o;
    }
    REQUIRE(coke != nullptr);
    REQUIRE(apple != nullptr);
    CHECK(object_matches(*coke, "cola"));
    CHECK(object_matches(*coke, "Coke"));
    CHECK(object_matches(*apple, "apples"));
    CHECK_FALSE(object_matches(*apple, "pineapple"));
  }

  TEST_CASE("side-qualified site references round-trip") {
    const SceneMap s = canonical_scene();
    for (const auto& site : s.sites) {
      for (const auto& [side, ap] : site.approach) {
        (void)ap;
        const auto ref = resolve_site_ref(s, format_site_ref(site.name, side));
        REQUIRE(ref.has_value());
        CHECK(ref->site->name == site.name);
        CHECK(ref->side == side);
      }
      const auto plain = resolve_site_ref(s, site.name);
      REQUIRE(plain.has_value());
      CHECK_FALSE(plain->side.has_value());
    }
    const auto paren = resolve_site_ref(s, "fruit table (far side)");
    REQUIRE(paren.has_value());
    CHECK(paren->side == Side::kFar);
  }

  TEST_CASE("scene codec round-trips and rejects unknown keys") {
    const SceneMap s = canonical_scene(7);
    CHECK(decode_scene(encode_scene(s)) == s);
    CHECK_THROWS_AS(decode_scene(R"({"grid":{},"bogus":1})"), Error);
  }

  TEST_CASE("seed only moves lateral offsets") {
    const SceneMap a = canonical_scene(1);
    const SceneMap b = canonical_scene(2);
    REQUIRE(a.objects.size() == b.objects.size());
    for (std::size_t i = 0; i < a.objects.size(); ++i) {
      CHECK(a.objects[i].placement->site == b.objects[i].placement->site);
      CHECK(a.objects[i].placement->side == b.objects[i].placement->side);
    }
  }

  TEST_CASE("validate_scene reports broken invariants") {
    SceneMap s = canonical_scene();
    const Site* fruit = s.find_site("fruit table");
    s.grid.set_blocked(fruit->approach.begin()->second.cell, true);
    bool blocked = false;
    for (const auto& v : validate_scene(s)) blocked |= v.code == ViolationCode::kBlockedApproach;
    CHECK(blocked);

    SceneMap t = canonical_scene();
    t.objects[1].id = t.objects[0].id;
    bool dup = false;
    for (const auto& v : validate_scene(t)) dup |= v.code == ViolationCode::kDuplicateObjectId;
    CHECK(dup);
  }

  TEST_CASE("grid rejects non-positive shapes") {
    CHECK_THROWS_AS(GridMap(0, 4, 0.1), Error);
    CHECK_THROWS_AS(GridMap(4, 4, 0.0), Error);
    GridMap g(3, 2, 0.5);
    CHECK(g.blocked({-1, 0}));
    CHECK(g.cell_at(g.index({2, 1})) == Cell{2, 1});
  }
}
