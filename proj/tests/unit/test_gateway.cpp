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
#include <httplib.h>

#include <atomic>
#include <mutex>
#include <thread>

#include <nlohmann/json.hpp>

#include "leanplan/error.hpp"
#include "leanplan/model_gateway.hpp"
#include "leanplan/sim_env.hpp"

using namespace leanplan;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::kInvalidConfig;
}

std::string chat_body(const std::string& content) {
  return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}},
                        {"usage", {{"prompt_tokens", 12}, {"completion_tokens", 3}}}}
      .dump();
}

// A local OpenAI-style endpoint that fails the first `failures` requests
// with `fail_status`.
class FakeServer {
 public:
  FakeServer(int failures, int fail_status) : failures_(failures), fail_status_(fail_status) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      std::lock_guard<std::mutex> lock(mu_);
      bodies_.push_back(req.body);
      if (failures_ > 0) {
        --failures_;
        res.status = fail_status_;
        res.set_content("{}", "application/json");
        return;
      }
      res.set_content(chat_body("{\"next_action\": \"done\"}"), "application/json");
    });
    server_.Post("/v1/embeddings", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(R"({"data":[{"embedding":[0.5,0.5,0.0]}]})", "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeServer() {
    server_.stop();
    thread_.join();
  }

  HttpConfig config() const {
    HttpConfig c;
    c.api_base = "http://127.0.0.1:" + std::to_string(port_) + "/v1";
    c.model = "test-model";
    c.vlm_model = "test-vlm";
    c.backoff_base = 0.01;
    c.timeout = 5.0;
    return c;
  }
  std::vector<std::string> bodies() {
    std::lock_guard<std::mutex> lock(mu_);
    return bodies_;
  }

 private:
  httplib::Server server_;
  std::thread thread_;
  std::mutex mu_;
  std::vector<std::string> bodies_;
  int failures_;
  int fail_status_;
  int port_ = 0;
};

}  // namespace

TEST_SUITE("model_gateway") {
  TEST_CASE("scripted planner replays turns and checks expectations") {
    ScriptedPlanner p(parse_script(R"({"turns":[{"expect":"#instruction","reply":"A"},{"reply":"B"}],"extra":1})"));
    CHECK(p.initial("... #instruction: go").reply == "A");
    CHECK(p.step("#feedback: anything").reply == "B");
    CHECK(code_of([&] { p.step("more"); }) == ErrorCode::kScriptExhausted);

    ScriptedPlanner q(parse_script(R"({"turns":[{"expect":"pick up success","reply":"A"}]})"));
    CHECK(code_of([&] { q.initial("navigation success"); }) == ErrorCode::kScriptMismatch);
  }

  TEST_CASE("scripted usage is an estimate with no wall time") {
    ScriptedPlanner p(parse_script(R"({"turns":[{"reply":"abcdefgh"}]})"));
    const auto r = p.initial(std::string(40, 'x'));
    CHECK(r.usage.prompt_tokens == 10);
    CHECK(r.usage.completion_tokens == 2);
    CHECK(r.usage.wall_time == 0.0);
  }

  TEST_CASE("bad scripts are schema errors") {
    CHECK_THROWS_AS(parse_script("[]"), Error);
    CHECK_THROWS_AS(parse_script(R"({"turns":[{"expect":"x"}]})"), Error);
  }

  TEST_CASE("chat request encoding") {
    const auto j = nlohmann::json::parse(encode_chat_request({{{"user", "hi"}}, "m", 64, 0.0}));
    CHECK(j["model"] == "m");
    CHECK(j["messages"][0]["content"] == "hi");
    CHECK(j["max_tokens"] == 64);
    CHECK_THROWS_AS(encode_chat_request({}), Error);
  }

  TEST_CASE("chat response decoding") {
    const ChatResult r = decode_chat_response(chat_body("hello"));
    CHECK(r.reply == "hello");
    CHECK(r.usage.prompt_tokens == 12);
    CHECK(r.usage.completion_tokens == 3);
    CHECK(code_of([] { decode_chat_response("{\"choices\": []}"); }) == ErrorCode::kParseFail);
    CHECK(code_of([] { decode_chat_response("<html>"); }) == ErrorCode::kParseFail);
  }

  TEST_CASE("side answers in several shapes") {
    CHECK(parse_side_answer(R"({"side": 3, "color": "red", "shape": "round"})") ==
          SideAnswer{Side::kFar, "red", "round"});
    CHECK(parse_side_answer(R"(Sure: {"number": "1"})").side == Side::kLeft);
    CHECK(parse_side_answer(R"({"answer": "close"})").side == Side::kClose);
    CHECK(code_of([] { parse_side_answer(R"({"side": 9})"); }) == ErrorCode::kParseFail);
    CHECK(code_of([] { parse_side_answer("left, I think"); }) == ErrorCode::kParseFail);
  }

  TEST_CASE("simulated VLM reports ground truth") {
    SimEnv env(canonical_scene(), 1);
    REQUIRE(env.navigate("fruit table").ok);
    SimulatedVlm vlm;
    const SideAnswer a = vlm.table_side("apple", env);
    CHECK(a.side == env.table_side("apple"));
    CHECK(a.color == "red");
    const std::string d = vlm.describe("apple", env);
    CHECK(d.find("apple") != std::string::npos);
    CHECK(d.find("red") != std::string::npos);
    CHECK(code_of([&] { vlm.describe("coke can", env); }) == ErrorCode::kObjectNotVisible);
  }

  TEST_CASE("http planner keeps the conversation and decodes replies") {
    FakeServer server(0, 500);
    HttpPlanner p(server.config());
    CHECK(p.initial("plan please").reply == "{\"next_action\": \"done\"}");
    CHECK(p.step("#feedback: place success").usage.prompt_tokens == 12);
    CHECK(p.history().size() == 4);
    const auto bodies = server.bodies();
    REQUIRE(bodies.size() == 2);
    const auto second = nlohmann::json::parse(bodies[1]);
    CHECK(second["messages"].size() == 3);
    CHECK(second["model"] == "test-model");
  }

  TEST_CASE("server errors are retried") {
    FakeServer server(2, 503);
    HttpPlanner p(server.config());
    CHECK_NOTHROW(p.initial("x"));
    CHECK(server.bodies().size() == 3);
  }

  TEST_CASE("retries give up after the attempt budget") {
    FakeServer server(5, 500);
    HttpPlanner p(server.config());
    CHECK(code_of([&] { p.initial("x"); }) == ErrorCode::kTransport);
    CHECK(server.bodies().size() == 3);
  }

  TEST_CASE("client errors are not retried") {
    FakeServer server(1, 400);
    HttpPlanner p(server.config());
    CHECK(code_of([&] { p.initial("x"); }) == ErrorCode::kBadStatus);
    CHECK(server.bodies().size() == 1);
  }

  TEST_CASE("unreachable endpoint is a transport error") {
    HttpConfig c;
    c.api_base = "http://127.0.0.1:1/v1";
    c.model = "m";
    c.attempts = 2;
    c.backoff_base = 0.0;
    c.timeout = 1.0;
    HttpPlanner p(c);
    CHECK(code_of([&] { p.initial("x"); }) == ErrorCode::kTransport);
  }

  TEST_CASE("embedder checks the dimension") {
    FakeServer server(0, 500);
    CHECK(HttpEmbedder(server.config(), 3).embed("x").size() == 3);
    CHECK_THROWS_AS(HttpEmbedder(server.config(), 4).embed("x"), Error);
  }

  TEST_CASE("environment configuration") {
    unsetenv("DADUE_API_BASE");
    CHECK(code_of([] { HttpConfig::from_env(); }) == ErrorCode::kInvalidConfig);
    setenv("DADUE_API_BASE", "http://localhost:9/v1", 1);
    setenv("DADUE_MODEL", "llama", 1);
    unsetenv("DADUE_VLM_MODEL");
    const HttpConfig c = HttpConfig::from_env();
    CHECK(c.vlm_model == "llama");
    unsetenv("DADUE_API_BASE");
    unsetenv("DADUE_MODEL");
  }
}
