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
#include <sstream>

#include "leanplan/error.hpp"
#include "leanplan/executor.hpp"

namespace leanplan {

namespace {

using ojson = nlohmann::ordered_json;

ojson usage_json(const BackendUsage& u) {
  ojson j;
  j["prompt_tokens"] = u.prompt_tokens;
  j["completion_tokens"] = u.completion_tokens;
  j["wall_time"] = u.wall_time;
  return j;
}

ojson counters_json(const Counters& c) {
  ojson j;
  j["llm_calls"] = c.llm_calls;
  j["vlm_calls"] = c.vlm_calls;
  j["vlm_describe_calls"] = c.vlm_describe_calls;
  j["navigate_calls"] = c.navigate_calls;
  j["replans"] = c.replans;
  j["pick_attempts"] = c.pick_attempts;
  j["place_attempts"] = c.place_attempts;
  j["retries"] = c.retries;
  return j;
}

ojson policy_json(const EpisodePolicy& p) {
  ojson j;
  j["max_steps"] = p.max_steps;
  j["max_retries_per_subgoal"] = p.max_retries_per_subgoal;
  j["feedback_enabled"] = p.feedback_enabled;
  j["memory_enabled"] = p.memory_enabled;
  j["side_refinement_enabled"] = p.side_refinement_enabled;
  j["prompt_variant"] = p.prompt_variant == PromptVariant::kLean ? "lean" : "full";
  return j;
}

ojson outcome_json(const SkillOutcome& o) {
  ojson j;
  j["ok"] = o.ok;
  j["detail"] = o.detail;
  if (o.observation) j["observation"] = *o.observation;
  if (o.traveled) j["traveled"] = *o.traveled;
  if (o.optimal) j["optimal"] = *o.optimal;
  if (o.transient) j["transient"] = true;
  return j;
}

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::kSchemaMismatch, std::string("summary.") + key);
  try {
    return j[key].get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kSchemaMismatch, std::string("summary.") + key);
  }
}

}  // namespace

EpisodeSummary summarize(const EpisodeTranscript& tr) {
  EpisodeSummary s;
  s.task_id = tr.task_id;
  s.level = tr.level;
  s.success = tr.verdict.success;
  s.ideal = tr.ideal;
  s.reason = tr.verdict.reason ? std::string(to_string(*tr.verdict.reason)) : "";
  s.samples = tr.samples;
  s.counters = tr.counters;
  for (const auto& turn : tr.turns) {
    for (const auto& p : turn.planner) s.planner_calls.push_back({p.kind, p.usage.prompt_tokens, p.usage.completion_tokens});
    for (const auto& v : turn.vlm) s.vlm_calls.push_back(v.kind);
  }
  return s;
}

nlohmann::ordered_json encode_summary(const EpisodeSummary& s) {
  ojson j;
  j["type"] = "summary";
  j["task_id"] = s.task_id;
  j["level"] = s.level;
  j["success"] = s.success;
  j["ideal"] = s.ideal;
  j["reason"] = s.reason;
  j["counters"] = counters_json(s.counters);
  j["samples"] = ojson::array();
  for (const auto& x : s.samples) j["samples"].push_back({x.s, x.l, x.p});
  j["planner_calls"] = ojson::array();
  for (const auto& p : s.planner_calls) {
    j["planner_calls"].push_back({{"kind", p.kind}, {"prompt_tokens", p.prompt_tokens},
                                  {"completion_tokens", p.completion_tokens}});
  }
  j["vlm_calls"] = s.vlm_calls;
  return j;
}

EpisodeSummary decode_summary(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kSchemaMismatch, "summary");
  EpisodeSummary s;
  s.task_id = field<std::string>(j, "task_id");
  s.level = field<int>(j, "level");
  s.success = field<bool>(j, "success");
  s.ideal = field<bool>(j, "ideal");
  s.reason = field<std::string>(j, "reason");
  const auto c = field<nlohmann::json>(j, "counters");
  s.counters.llm_calls = field<int>(c, "llm_calls");
  s.counters.vlm_calls = field<int>(c, "vlm_calls");
  s.counters.vlm_describe_calls = field<int>(c, "vlm_describe_calls");
  s.counters.navigate_calls = field<int>(c, "navigate_calls");
  s.counters.replans = field<int>(c, "replans");
  s.counters.pick_attempts = field<int>(c, "pick_attempts");
  s.counters.place_attempts = field<int>(c, "place_attempts");
  s.counters.retries = field<int>(c, "retries");
  for (const auto& x : field<std::vector<std::vector<double>>>(j, "samples")) {
    if (x.size() != 3) throw Error(ErrorCode::kSchemaMismatch, "summary.samples");
    s.samples.push_back({x[0], x[1], x[2]});
  }
  for (const auto& p : field<nlohmann::json>(j, "planner_calls")) {
    s.planner_calls.push_back({field<std::string>(p, "kind"), field<long>(p, "prompt_tokens"),
                               field<long>(p, "completion_tokens")});
  }
  s.vlm_calls = field<std::vector<std::string>>(j, "vlm_calls");
  return s;
}

EpisodeSummary summary_from_jsonl(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::string last;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) last = line;
  }
  if (last.empty()) throw Error(ErrorCode::kSchemaMismatch, "empty transcript");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(last);
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::kSchemaMismatch, "summary line is not JSON");
  }
  if (!j.is_object() || j.value("type", "") != "summary") throw Error(ErrorCode::kSchemaMismatch, "summary.type");
  return decode_summary(j);
}

std::string transcript_jsonl(const EpisodeTranscript& tr) {
  std::ostringstream out;
  ojson header;
  header["type"] = "header";
  header["task_id"] = tr.task_id;
  header["level"] = tr.level;
  header["instruction"] = tr.instruction;
  header["backend"] = tr.backend;
  header["seed"] = tr.seed;
  header["policy"] = policy_json(tr.policy);
  if (tr.plan) header["plan"] = ojson::parse(encode_plan(*tr.plan));
  out << header.dump() << '\n';

  for (const auto& t : tr.turns) {
    ojson j;
    j["type"] = "turn";
    j["step"] = t.step;
    j["action"] = t.action ? ojson(format_call(*t.action)) : ojson(nullptr);
    j["outcome"] = t.outcome ? outcome_json(*t.outcome) : ojson(nullptr);
    j["feedback"] = t.feedback;
    j["planner"] = ojson::array();
    for (const auto& p : t.planner) {
      ojson pj;
      pj["kind"] = p.kind;
      pj["stimulus"] = p.stimulus;
      pj["reply"] = p.reply;
      pj["usage"] = usage_json(p.usage);
      if (!p.raw_request.empty()) pj["raw_request"] = p.raw_request;
      if (!p.raw_response.empty()) pj["raw_response"] = p.raw_response;
      j["planner"].push_back(std::move(pj));
    }
    j["vlm"] = ojson::array();
    for (const auto& v : t.vlm) {
      j["vlm"].push_back({{"kind", v.kind}, {"object", v.object}, {"answer", v.answer}, {"usage", usage_json(v.usage)}});
    }
    j["events"] = ojson::array();
    for (const auto& e : t.events) j["events"].push_back({{"t", e.t}, {"kind", e.kind}, {"payload", ojson::parse(e.payload.dump())}});
    j["note"] = t.note;
    out << j.dump() << '\n';
  }

  ojson summary = encode_summary(summarize(tr));
  summary["verdict"] = {{"success", tr.verdict.success},
                        {"reason", tr.verdict.reason ? ojson(to_string(*tr.verdict.reason)) : ojson(nullptr)},
                        {"detail", tr.verdict.detail},
                        {"done_trusted", tr.verdict.done_trusted}};
  out << summary.dump() << '\n';
  return out.str();
}

}  // namespace leanplan
