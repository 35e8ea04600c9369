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
#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "leanplan/error.hpp"
#include "leanplan/lenient_json.hpp"
#include "leanplan/model_gateway.hpp"
#include "leanplan/prompt.hpp"

namespace leanplan {

namespace {

struct Endpoint {
  std::string origin;  // scheme://host:port
  std::string prefix;  // path below the origin, no trailing slash
};

Endpoint split_base(const std::string& base) {
  Endpoint e;
  const auto scheme = base.find("://");
  const auto path = base.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path == std::string::npos) {
    e.origin = base;
  } else {
    e.origin = base.substr(0, path);
    e.prefix = base.substr(path);
  }
  while (!e.prefix.empty() && e.prefix.back() == '/') e.prefix.pop_back();
  return e;
}

std::string env_or_empty(const char* name) {
  const char* v = std::getenv(name);
  return v == nullptr ? std::string() : std::string(v);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

std::string encode_chat_request(const ChatRequest& request) {
  if (request.messages.empty()) throw Error(ErrorCode::kInvalidConfig, "chat request without messages");
  nlohmann::ordered_json j;
  j["model"] = request.model;
  j["messages"] = nlohmann::ordered_json::array();
  for (const auto& m : request.messages) j["messages"].push_back({{"role", m.role}, {"content", m.content}});
  j["max_tokens"] = request.max_tokens;
  j["temperature"] = request.temperature;
  return j.dump();
}

HttpConfig HttpConfig::from_env() {
  HttpConfig c;
  c.api_base = env_or_empty("DADUE_API_BASE");
  c.api_key = env_or_empty("DADUE_API_KEY");
  c.model = env_or_empty("DADUE_MODEL");
  c.vlm_model = env_or_empty("DADUE_VLM_MODEL");
  if (c.api_base.empty()) throw Error(ErrorCode::kInvalidConfig, "DADUE_API_BASE is not set");
  if (c.model.empty()) throw Error(ErrorCode::kInvalidConfig, "DADUE_MODEL is not set");
  if (c.vlm_model.empty()) c.vlm_model = c.model;
  return c;
}

std::string http_post_json(const HttpConfig& config, std::string_view path, const std::string& body) {
  const Endpoint ep = split_base(config.api_base);
  const std::string full_path = ep.prefix + std::string(path);
  const auto timeout = std::chrono::duration<double>(config.timeout);
  std::string last_error = "no attempt made";
  const int attempts = std::max(1, config.attempts);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      const double wait = config.backoff_base * static_cast<double>(1 << (attempt - 1));
      std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    }
    httplib::Client client(ep.origin);
    if (!client.is_valid()) throw Error(ErrorCode::kTransport, "unsupported endpoint " + config.api_base);
    client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
    if (!config.api_key.empty()) client.set_bearer_token_auth(config.api_key);
    auto res = client.Post(full_path, body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "status " + std::to_string(res->status);
      continue;
    }
    if (res->status < 200 || res->status >= 300) {
      throw Error(ErrorCode::kBadStatus, std::to_string(res->status) + " " + res->body);
    }
    return res->body;
  }
  throw Error(ErrorCode::kTransport,
              config.api_base + " after " + std::to_string(attempts) + " attempts: " + last_error);
}

ChatResult decode_chat_response(std::string_view body) {
  ChatResult r;
  r.raw_response = std::string(body);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
    r.reply = j.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kParseFail, std::string(body));
  }
  if (j.contains("usage") && j["usage"].is_object()) {
    r.usage.prompt_tokens = j["usage"].value("prompt_tokens", 0L);
    r.usage.completion_tokens = j["usage"].value("completion_tokens", 0L);
  }
  return r;
}

HttpPlanner::HttpPlanner(HttpConfig config) : config_(std::move(config)) {}

ChatResult HttpPlanner::initial(std::string_view prompt) {
  std::vector<ChatMessage> messages = {{"user", std::string(prompt)}};
  return send(std::move(messages));
}

ChatResult HttpPlanner::step(std::string_view message) {
  std::vector<ChatMessage> messages = history_;
  messages.push_back({"user", std::string(message)});
  return send(std::move(messages));
}

ChatResult HttpPlanner::send(std::vector<ChatMessage> messages) {
  ChatRequest req{messages, config_.model, config_.max_tokens, config_.temperature};
  const std::string body = encode_chat_request(req);
  const auto t0 = std::chrono::steady_clock::now();
  const std::string raw = http_post_json(config_, "/chat/completions", body);
  ChatResult r = decode_chat_response(raw);
  r.raw_request = body;
  r.usage.wall_time = seconds_since(t0);
  messages.push_back({"assistant", r.reply});
  history_ = std::move(messages);
  return r;
}

SideAnswer parse_side_answer(std::string_view reply) {
  nlohmann::json j;
  try {
    j = extract_json_object(reply);
  } catch (const Error&) {
    throw Error(ErrorCode::kParseFail, std::string(reply));
  }
  SideAnswer a;
  bool found = false;
  for (const char* key : {"side", "number", "answer"}) {
    if (!j.contains(key)) continue;
    const auto& v = j[key];
    int code = 0;
    if (v.is_number_integer()) {
      code = v.get<int>();
    } else if (v.is_string()) {
      const std::string s = v.get<std::string>();
      if (const auto side = parse_side(s)) {
        a.side = *side;
        found = true;
        break;
      }
      code = std::atoi(s.c_str());
    }
    if (code >= 1 && code <= 4) {
      a.side = static_cast<Side>(code);
      found = true;
      break;
    }
  }
  if (!found) throw Error(ErrorCode::kParseFail, std::string(reply));
  if (j.contains("color") && j["color"].is_string()) a.color = j["color"].get<std::string>();
  if (j.contains("shape") && j["shape"].is_string()) a.shape = j["shape"].get<std::string>();
  return a;
}

HttpVlm::HttpVlm(HttpConfig config) : config_(std::move(config)) {}

ChatResult HttpVlm::ask(const std::string& prompt) {
  ChatRequest req{{{"user", prompt}}, config_.vlm_model, config_.max_tokens, config_.temperature};
  const std::string body = encode_chat_request(req);
  const auto t0 = std::chrono::steady_clock::now();
  ChatResult r = decode_chat_response(http_post_json(config_, "/chat/completions", body));
  r.raw_request = body;
  r.usage.wall_time = seconds_since(t0);
  last_ = r.usage;
  return r;
}

SideAnswer HttpVlm::table_side(std::string_view object, const SimEnv& env) {
  if (env.visible(object).empty()) throw Error(ErrorCode::kObjectNotVisible, std::string(object));
  return parse_side_answer(ask(render_vlm_side_prompt(object)).reply);
}

std::string HttpVlm::describe(std::string_view object, const SimEnv& env) {
  if (env.visible(object).empty()) throw Error(ErrorCode::kObjectNotVisible, std::string(object));
  return ask(render_vlm_describe_prompt(object)).reply;
}

HttpEmbedder::HttpEmbedder(HttpConfig config, std::size_t dimension)
    : config_(std::move(config)), dimension_(dimension) {}

std::vector<double> HttpEmbedder::embed(std::string_view text) const {
  nlohmann::ordered_json req;
  req["model"] = config_.model;
  req["input"] = std::string(text);
  const std::string raw = http_post_json(config_, "/embeddings", req.dump());
  try {
    const auto j = nlohmann::json::parse(raw);
    auto v = j.at("data").at(0).at("embedding").get<std::vector<double>>();
    if (v.size() != dimension_) throw Error(ErrorCode::kParseFail, "embedding dimension " + std::to_string(v.size()));
    return v;
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kParseFail, raw);
  }
}

}  // namespace leanplan
