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
#include "leanplan/memory.hpp"

using namespace leanplan;
using leanplan::testing::Gen;

TEST_SUITE("memory") {
  TEST_CASE("embeddings are deterministic, unit length and non-zero") {
    HashedBagOfWords e(64);
    Gen g(9);
    for (int i = 0; i < 100; ++i) {
      const std::string text = testing::random_phrase(g, 1, 8);
      const auto v = e.embed(text);
      CHECK(v.size() == 64);
      CHECK(v == e.embed(text));
      double n = 0.0;
      for (double x : v) n += x * x;
      CHECK(n == doctest::Approx(1.0));
    }
  }

  TEST_CASE("tokenize lowercases and splits on punctuation") {
    CHECK(tokenize("Put the APPLE, on-the rack!") ==
          std::vector<std::string>{"put", "the", "apple", "on", "the", "rack"});
  }

  TEST_CASE("cosine basics") {
    CHECK(cosine({1, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(cosine({1, 0}, {0, 1}) == doctest::Approx(0.0));
    CHECK(cosine({0, 0}, {0, 1}) == 0.0);
    CHECK(cosine({2, 2}, {1, 1}) == doctest::Approx(1.0));
  }

  TEST_CASE("argmax agrees with brute force on random candidate sets") {
    Gen g(21);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t dim = static_cast<std::size_t>(g.range(2, 6));
      auto vec = [&] {
        std::vector<double> v(dim);
        for (auto& x : v) x = g.range(-2, 3);
        return v;
      };
      std::vector<std::vector<double>> cands;
      std::vector<int> ids;
      const int n = g.range(0, 12);
      for (int i = 0; i < n; ++i) {
        cands.push_back(g.coin(0.2) && !cands.empty() ? cands[g.range(0, static_cast<int>(cands.size()) - 1)] : vec());
        ids.push_back(g.range(1, 1000));
      }
      const auto q = vec();
      const double tau = g.pick(std::vector<double>{-1.0, 0.0, 0.25, 0.5});
      CHECK(argmax_similarity(q, cands, ids, tau) == testing::brute_argmax(q, cands, ids, tau));
    }
  }

  TEST_CASE("store upsert replaces the unit of the same object") {
    HashedBagOfWords e;
    ShortTermStore s(e);
    s.upsert("apple", "fruit table", Side::kClose, "a red round apple", 1);
    s.upsert("coke can", "drink table", Side::kLeft, "a red can", 2);
    s.upsert("Apple", "storage rack", Side::kFar, "a red round apple", 3);
    CHECK(s.size() == 2);
    REQUIRE(s.find("apple") != nullptr);
    CHECK(s.find("apple")->site == "storage rack");
    CHECK(s.find("pear") == nullptr);
    CHECK(s.units().size() == s.vectors().size());
  }

  TEST_CASE("retrieval picks the related unit and respects the threshold") {
    HashedBagOfWords e;
    ShortTermStore s(e);
    s.upsert("apple", "storage rack", Side::kClose, "a red round apple", 1);
    s.upsert("toy duck", "toy rack", Side::kLeft, "a yellow duck toy", 2);
    const auto hit = s.retrieve("find the yellow duck toy and place it on the dining table");
    REQUIRE(hit.has_value());
    CHECK(hit->object == "toy duck");
    CHECK_FALSE(s.retrieve("zebra xylophone quartz").has_value());
    HashedBagOfWords e2;
    CHECK_FALSE(ShortTermStore(e2).retrieve("anything").has_value());
  }

  TEST_CASE("jsonl dump and load round-trip") {
    HashedBagOfWords e;
    ShortTermStore a(e);
    a.upsert("apple", "storage rack", Side::kFar, "a red round apple", 4);
    a.upsert("lemon", "fruit table", Side::kClose, "a yellow oval lemon", 5);
    ShortTermStore b(e);
    b.load_jsonl(a.dump_jsonl());
    CHECK(b.units() == a.units());
    CHECK_THROWS_AS(b.load_jsonl("{\"bogus\": 1}\n"), Error);
  }

  TEST_CASE("unit rendering") {
    MemoryUnit u;
    u.object = "apple";
    u.site = "storage rack";
    u.side = Side::kClose;
    u.img_summary = "a red round apple";
    CHECK(u.position() == "storage rack (close side)");
    CHECK(u.rendered() == "apple at storage rack (close side): a red round apple");
  }

  TEST_CASE("long-term memory labels every site and alias") {
    const SceneMap scene = canonical_scene();
    const LongTermMemory ltm = LongTermMemory::from_scene(scene);
    CHECK(ltm.grid() == scene.grid);
    for (const auto& site : scene.sites) {
      CHECK_NOTHROW(ltm.lookup(site.name));
      for (const auto& a : site.aliases) CHECK_NOTHROW(ltm.lookup(a));
    }
    CHECK_THROWS_AS(ltm.lookup("moon"), Error);
    LongTermMemory m = ltm;
    m.add_label("charging dock", {1, 1});
    CHECK(m.lookup("charging dock") == Cell{1, 1});
    CHECK_THROWS_AS(m.add_label("nowhere", {999, 0}), Error);
  }

  TEST_CASE("memory hint for the yellow fruit scenario names the storage rack") {
    HashedBagOfWords e;
    ShortTermStore s(e);
    const LongTermMemory ltm = LongTermMemory::from_scene(canonical_scene());
    s.upsert("banana", "storage rack", Side::kClose, "a yellow long banana (fruit) on the close side", 3);
    s.upsert("lemon", "storage rack", Side::kLeft, "a yellow oval lemon (fruit) on the left side", 6);
    const auto hints = memory_hints(s, ltm, "find a yellow fruit and place it on the dining table");
    REQUIRE(hints.size() == 1);
    CHECK(hints[0].find("storage rack") != std::string::npos);
    CHECK(hints[0].rfind("according to memory", 0) == 0);
  }
}
