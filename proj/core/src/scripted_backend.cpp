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
#include <nlohmann/json.hpp>

#include "leanplan/error.hpp"
#include "leanplan/model_gateway.hpp"
#include "leanplan/prompt.hpp"

namespace leanplan {

namespace {

std::string clip(std::string_view s, std::size_t n) {
  if (s.size() <= n) return std::string(s);
  return std::string(s.substr(0, n)) + "...";
}

}  // namespace

Script parse_script(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("script: ") + e.what());
  }
  if (!j.is_object() || !j.contains("turns") || !j["turns"].is_array()) {
    throw Error(ErrorCode::kSchemaMismatch, "turns");
  }
  Script script;
  for (std::size_t i = 0; i < j["turns"].size(); ++i) {
    const auto& t = j["turns"][i];
    const std::string where = "turns[" + std::to_string(i) + "]";
    if (!t.is_object() || !t.contains("reply") || !t["reply"].is_string()) {
      throw Error(ErrorCode::kSchemaMismatch, where + ".reply");
    }
    ScriptTurn turn;
    turn.reply = t["reply"].get<std::string>();
    if (t.contains("expect")) {
      if (!t["expect"].is_string()) throw Error(ErrorCode::kSchemaMismatch, where + ".expect");
      turn.expect = t["expect"].get<std::string>();
    }
    script.turns.push_back(std::move(turn));
  }
  return script;
}

ScriptedPlanner::ScriptedPlanner(Script script) : script_(std::move(script)) {
  if (script_.cursor > script_.turns.size()) throw Error(ErrorCode::kInvalidConfig, "script cursor past end");
}

ChatResult ScriptedPlanner::initial(std::string_view prompt) { return next(prompt); }

ChatResult ScriptedPlanner::step(std::string_view message) { return next(message); }

ChatResult ScriptedPlanner::next(std::string_view stimulus) {
  if (script_.cursor >= script_.turns.size()) {
    throw Error(ErrorCode::kScriptExhausted, "no reply left after " + std::to_string(script_.turns.size()) + " turns");
  }
  const ScriptTurn& turn = script_.turns[script_.cursor];
  if (!turn.expect.empty() && stimulus.find(turn.expect) == std::string_view::npos) {
    throw Error(ErrorCode::kScriptMismatch,
                "expected \"" + turn.expect + "\", got \"" + clip(stimulus, 160) + "\"");
  }
  ++script_.cursor;
  ChatResult r;
  r.reply = turn.reply;
  r.usage.prompt_tokens = static_cast<long>(approx_tokens(stimulus));
  r.usage.completion_tokens = static_cast<long>(approx_tokens(turn.reply));
  return r;
}

}  // namespace leanplan
