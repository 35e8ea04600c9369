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
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leanplan/memory.hpp"
#include "leanplan/scene.hpp"
#include "leanplan/sim_env.hpp"

namespace leanplan {

struct ChatMessage {
  std::string role;  // system, user, assistant
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

struct ChatRequest {
  std::vector<ChatMessage> messages;
  std::string model;
  int max_tokens = 512;
  double temperature = 0.0;
};

/// OpenAI chat-completions body. Throws Error(kInvalidConfig) for an empty
/// message list.
std::string encode_chat_request(const ChatRequest& request);

struct BackendUsage {
  long prompt_tokens = 0;
  long completion_tokens = 0;
  double wall_time = 0.0;  // seconds

  friend bool operator==(const BackendUsage&, const BackendUsage&) = default;
};

struct ChatResult {
  std::string reply;
  BackendUsage usage;
  std::string raw_request;   // verbatim bodies, empty for local backends
  std::string raw_response;
};

class PlannerBackend {
 public:
  virtual ~PlannerBackend() = default;
  /// Starts a conversation with the rendered planner prompt.
  virtual ChatResult initial(std::string_view prompt) = 0;
  /// Continues it with a feedback or status message.
  virtual ChatResult step(std::string_view message) = 0;
  virtual std::string name() const = 0;
};

/// Ordered (pattern, reply) pairs. A turn matches when its pattern is a
/// substring of the stimulus; an empty pattern matches anything.
struct ScriptTurn {
  std::string expect;
  std::string reply;
};

struct Script {
  std::vector<ScriptTurn> turns;
  std::size_t cursor = 0;
};

/// {"turns":[{"expect":..., "reply":...}]}. Throws Error(kSchemaMismatch).
Script parse_script(std::string_view json_text);

class ScriptedPlanner final : public PlannerBackend {
 public:
  explicit ScriptedPlanner(Script script);

  /// Throws Error(kScriptExhausted) or Error(kScriptMismatch).
  ChatResult initial(std::string_view prompt) override;
  ChatResult step(std::string_view message) override;
  std::string name() const override { return "scripted"; }

  const Script& script() const { return script_; }

 private:
  ChatResult next(std::string_view stimulus);

  Script script_;
};

struct HttpConfig {
  std::string api_base;  // e.g. http://127.0.0.1:8000/v1
  std::string api_key;
  std::string model;
  std::string vlm_model;
  int max_tokens = 512;
  double temperature = 0.0;
  int attempts = 3;
  double backoff_base = 1.0;  // seconds; doubles per retry
  double timeout = 30.0;      // seconds per attempt

  /// DADUE_API_BASE, DADUE_API_KEY, DADUE_MODEL, DADUE_VLM_MODEL. Throws
  /// Error(kInvalidConfig) when the base URL or model is unset.
  static HttpConfig from_env();
};

/// Raw POST with the retry policy. Returns the response body. Throws
/// Error(kTransport) after the last failed attempt or Error(kBadStatus).
std::string http_post_json(const HttpConfig& config, std::string_view path, const std::string& body);

/// Chat-completions client. The conversation is replayed in full on every
/// call; history only grows on success.
class HttpPlanner final : public PlannerBackend {
 public:
  explicit HttpPlanner(HttpConfig config);

  ChatResult initial(std::string_view prompt) override;
  ChatResult step(std::string_view message) override;
  std::string name() const override { return "http"; }

  const std::vector<ChatMessage>& history() const { return history_; }

 private:
  ChatResult send(std::vector<ChatMessage> messages);

  HttpConfig config_;
  std::vector<ChatMessage> history_;
};

/// Reply text of the first choice plus token usage. Throws Error(kParseFail).
ChatResult decode_chat_response(std::string_view body);

struct SideAnswer {
  Side side = Side::kClose;  // relative to the robot's pose
  std::string color;
  std::string shape;

  friend bool operator==(const SideAnswer&, const SideAnswer&) = default;
};

class VlmBackend {
 public:
  virtual ~VlmBackend() = default;
  /// Throws Error(kObjectNotVisible) or Error(kParseFail).
  virtual SideAnswer table_side(std::string_view object, const SimEnv& env) = 0;
  /// Throws Error(kObjectNotVisible).
  virtual std::string describe(std::string_view object, const SimEnv& env) = 0;
  /// Usage of the most recent call.
  virtual BackendUsage last_usage() const { return {}; }
};

/// Answers from the simulator's ground truth.
class SimulatedVlm final : public VlmBackend {
 public:
  SideAnswer table_side(std::string_view object, const SimEnv& env) override;
  /// "a <color> <shape> <name> on the <side> side"
  std::string describe(std::string_view object, const SimEnv& env) override;
};

/// Parses {"side": n, "color": ..., "shape": ...} (also "number" or
/// "answer" for the side code). Throws Error(kParseFail) with the raw reply.
SideAnswer parse_side_answer(std::string_view reply);

/// Sends the vision prompts as text to a chat-completions endpoint. The
/// simulator has no camera, so no image part is attached.
class HttpVlm final : public VlmBackend {
 public:
  explicit HttpVlm(HttpConfig config);

  SideAnswer table_side(std::string_view object, const SimEnv& env) override;
  std::string describe(std::string_view object, const SimEnv& env) override;
  BackendUsage last_usage() const override { return last_; }

 private:
  ChatResult ask(const std::string& prompt);

  HttpConfig config_;
  BackendUsage last_;
};

/// POST {base}/embeddings. Errors propagate as Error(kTransport),
/// Error(kBadStatus) or Error(kParseFail).
class HttpEmbedder final : public EmbeddingProvider {
 public:
  HttpEmbedder(HttpConfig config, std::size_t dimension);

  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view text) const override;

 private:
  HttpConfig config_;
  std::size_t dimension_;
};

}  // namespace leanplan
