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
#include "leanplan/prompt.hpp"

using namespace leanplan;

namespace {

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

TEST_SUITE("prompt") {
  TEST_CASE("lean prompt has every section and stays small") {
    const SceneMap s = canonical_scene();
    const std::string p = render_initial_prompt("find lemon and put it on the drink table", s, {});
    for (const char* sec : {"#CONTEXT#", "#SKILL#", "#OBECTIVE#", "#OUTPUT#", "#MAP#", "#EXAMPLE#"}) {
      CHECK_MESSAGE(p.find(sec) != std::string::npos, sec);
    }
    CHECK(p.find("#MEMORY#") == std::string::npos);
    CHECK(p.find("#instruction: find lemon and put it on the drink table") != std::string::npos);
    const auto tokens = approx_tokens(p);
    CHECK(tokens >= 400);
    CHECK(tokens <= 700);
  }

  TEST_CASE("full prompt is larger than the lean one") {
    const SceneMap s = canonical_scene();
    CHECK(approx_tokens(render_initial_prompt("x", s, {}, PromptVariant::kFull)) >
          approx_tokens(render_initial_prompt("x", s, {}, PromptVariant::kLean)));
  }

  TEST_CASE("memory hints get their own block") {
    const SceneMap s = canonical_scene();
    const std::string p =
        render_initial_prompt("x", s, {"according to memory, apple was last placed at storage rack (close side)"});
    CHECK(p.find("#MEMORY#") != std::string::npos);
    CHECK(p.find("storage rack (close side)") != std::string::npos);
  }

  TEST_CASE("map line lists sites but not the entry") {
    const std::string m = render_map_line(canonical_scene());
    CHECK(m.find("fruit table") != std::string::npos);
    CHECK(m.find("purchase table") != std::string::npos);
    CHECK(m.find("user entry") == std::string::npos);
  }

  TEST_CASE("token estimate is four characters per token") {
    CHECK(approx_tokens("") == 0);
    CHECK(approx_tokens("abcd") == 1);
    CHECK(approx_tokens(std::string(400, 'x')) == 100);
  }

  TEST_CASE("VLM prompts match the recorded wording") {
    CHECK(trim(render_vlm_side_prompt("coke can")) == trim(testing::read_fixture("vlm_side_prompt.txt")));
    const std::string d = render_vlm_describe_prompt("apple");
    CHECK(d.find("apple") != std::string::npos);
  }

  TEST_CASE("reprompt carries the problem") {
    CHECK(render_reprompt("no JSON object found").find("no JSON object found") != std::string::npos);
  }
}
