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
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "leanplan/scene.hpp"
#include <map>

namespace leanplan {

namespace {

constexpr int kGridSize = 64;
constexpr double kResolution = 0.1;
constexpr int kTableCells = 13;

struct SiteSpec {
  const char* name;
  SiteKind kind;
  int x0;
  int y0;
  std::vector<std::string> aliases;
};

struct ObjectSpec {
  const char* name;
  const char* site;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<std::string> aliases;
};

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Site make_table(const SiteSpec& spec) {
  Site s;
  s.name = spec.name;
  s.kind = spec.kind;
  s.aliases = spec.aliases;
  for (int y = spec.y0; y < spec.y0 + kTableCells; ++y) {
    for (int x = spec.x0; x < spec.x0 + kTableCells; ++x) s.footprint.push_back({x, y});
  }
  const int mid = kTableCells / 2;
  s.approach[Side::kClose] = {{spec.x0 + mid, spec.y0 + kTableCells}, Direction::kUp};
  s.approach[Side::kFar] = {{spec.x0 + mid, spec.y0 - 1}, Direction::kDown};
  s.approach[Side::kLeft] = {{spec.x0 - 1, spec.y0 + mid}, Direction::kRight};
  s.approach[Side::kRight] = {{spec.x0 + kTableCells, spec.y0 + mid}, Direction::kLeft};
  return s;
}

// Fruit, drink and toy sets are the union of every object the task suites and
// prompt examples mention.
std::vector<ObjectSpec> inventory() {
  using A = std::vector<std::pair<std::string, std::string>>;
  auto fruit = [](const char* color, const char* shape, const char* size, const char* vitc) {
    return A{{"category", "fruit"}, {"color", color}, {"shape", shape}, {"size_rank", size},
             {"edible", "yes"}, {"vitamin_c", vitc}};
  };
  auto drink = [](const char* color, const char* shape, const char* caffeine) {
    return A{{"category", "drink"}, {"color", color}, {"shape", shape}, {"size_rank", "3"},
             {"edible", "no"}, {"caffeine", caffeine}};
  };
  auto toy = [](const char* color, const char* shape, const char* size) {
    return A{{"category", "toy"}, {"color", color}, {"shape", shape}, {"size_rank", size},
             {"edible", "no"}};
  };
  return {
      {"apple", "fruit table", fruit("red", "round", "4", "medium"), {}},
      {"banana", "fruit table", fruit("yellow", "long", "6", "low"), {}},
      {"lemon", "fruit table", fruit("yellow", "oval", "3", "rich"), {}},
      {"plum", "fruit table", fruit("purple", "round", "2", "low"), {}},
      {"strawberry", "fruit table", fruit("red", "heart-shaped", "1", "rich"), {}},
      {"bottle of water", "drink table", drink("clear", "bottle", "no"), {"water", "water bottle"}},
      {"pepsi can", "drink table", drink("blue", "cylindrical", "yes"), {"pepsi"}},
      {"coke can", "drink table", drink("red", "cylindrical", "yes"),
       {"coke", "cola can", "cola", "can of coke"}},
      {"sprite can", "drink table", drink("green", "cylindrical", "no"), {"sprite", "can of sprite"}},
      {"fanta can", "drink table", drink("orange", "cylindrical", "no"),
       {"fanta", "fenta", "fenta can", "delicious fenta can"}},
      {"beer", "drink table", drink("brown", "bottle", "no"), {"beer bottle", "bottle of beer"}},
      {"tea box", "drink table", drink("green", "box", "yes"), {"tea", "box of tea"}},
      {"feta can", "drink table",
       A{{"category", "canned food"}, {"color", "white"}, {"shape", "cylindrical"}, {"size_rank", "3"},
         {"edible", "yes"}},
       {"feta", "delicious feta can"}},
      {"squirrel toy", "toy rack", toy("brown", "squirrel", "2"), {"squirrel", "toy squirrel"}},
      {"squirrel toy", "toy rack", toy("grey", "squirrel", "2"), {"squirrel", "toy squirrel"}},
      {"shark toy", "toy rack", toy("blue", "shark", "4"), {"toy shark", "shark"}},
      {"school bus toy", "toy rack", toy("yellow", "bus", "5"), {"school bus", "toy bus"}},
      {"fire machine toy", "toy rack", toy("red", "truck", "6"), {"fire machine", "fire truck toy"}},
      {"ladybug toy", "toy rack", toy("red", "ladybug", "1"), {"ladybug", "toy ladybug"}},
      {"toy duck", "toy rack", toy("yellow", "duck", "3"), {"duck toy", "duck"}},
      {"toy rabbit", "toy rack", toy("white", "rabbit", "3"), {"rabbit toy", "rabbit"}},
      {"persimmon", "receiving shelf", fruit("orange", "round", "5", "medium"), {}},
  };
}

}  // namespace

double placement_slot_offset(int slot) {
  static constexpr std::array<double, 5> kSlots = {0.0, -0.2, 0.2, -0.1, 0.1};
  return kSlots[static_cast<std::size_t>(slot) % kSlots.size()];
}

SceneMap canonical_scene(std::uint64_t seed) {
  SceneMap scene;
  scene.grid = GridMap(kGridSize, kGridSize, kResolution);

  const std::vector<SiteSpec> tables = {
      {"fruit table", SiteKind::kTable, 4, 4, {"fruits table", "table of fruit"}},
      {"drink table", SiteKind::kTable, 25, 4, {"drinks table", "table of drinks"}},
      {"toy rack", SiteKind::kRack, 46, 4,
       {"toy table", "toys table", "table with the toys", "table of toys", "toy shelf"}},
      {"storage rack", SiteKind::kRack, 4, 25, {"storage shelf"}},
      {"dining table", SiteKind::kTable, 25, 25, {}},
      {"receiving shelf", SiteKind::kShelf, 46, 25, {"receiving table"}},
      {"shipping table", SiteKind::kTable, 4, 46, {"shipping shelf", "shipping area"}},
      {"purchase table", SiteKind::kTable, 46, 46, {"purchase shelf"}},
  };
  for (const auto& spec : tables) {
    Site site = make_table(spec);
    for (Cell c : site.footprint) scene.grid.set_blocked(c, true);
    scene.sites.push_back(std::move(site));
  }

  // Pillars at the aisle crossings.
  for (Cell corner : {Cell{20, 20}, Cell{41, 20}, Cell{20, 41}, Cell{41, 41}}) {
    for (int dy = 0; dy < 2; ++dy) {
      for (int dx = 0; dx < 2; ++dx) scene.grid.set_blocked({corner.x + dx, corner.y + dy}, true);
    }
  }

  Site entry;
  entry.name = "user entry";
  entry.kind = SiteKind::kEntry;
  entry.aliases = {"user entry point", "entrance", "entry"};
  for (int y = 50; y <= 52; ++y) {
    for (int x = 30; x <= 32; ++x) entry.footprint.push_back({x, y});
  }
  entry.approach[Side::kClose] = {{31, 53}, Direction::kUp};
  scene.sites.push_back(std::move(entry));

  constexpr std::array<Side, 4> kSideCycle = {Side::kClose, Side::kLeft, Side::kRight, Side::kFar};
  std::map<std::string, int> per_site;
  std::map<std::pair<std::string, Side>, int> per_side;
  int next_id = 1;
  for (const auto& spec : inventory()) {
    ObjectInstance o;
    o.id = ObjectId{next_id++};
    o.name = spec.name;
    for (const auto& [k, v] : spec.attributes) o.attributes[k] = v;
    o.aliases = spec.aliases;
    const int site_index = per_site[spec.site]++;
    const Side side = kSideCycle[static_cast<std::size_t>(site_index) % kSideCycle.size()];
    const int slot = per_side[{spec.site, side}]++;
    const std::uint64_t h = splitmix64(seed * 0x100000001B3ull + static_cast<std::uint64_t>(o.id.value));
    const double jitter = (static_cast<double>(h % 4001) - 2000.0) * 1e-5;
    o.placement = Placement{spec.site, side, placement_slot_offset(slot) + jitter};
    scene.objects.push_back(std::move(o));
  }

  scene.robot.cell = {31, 53};
  scene.robot.facing = Direction::kUp;
  return scene;
}

}  // namespace leanplan
