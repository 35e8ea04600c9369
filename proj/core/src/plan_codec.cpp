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
#include "leanplan/plan_codec.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <utility>

#include <nlohmann/json.hpp>

#include "leanplan/error.hpp"
#include "leanplan/lenient_json.hpp"

namespace leanplan {

namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string unquote(std::string_view s) {
  std::string t = trim(s);
  while (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front()) {
    t = trim(std::string_view(t).substr(1, t.size() - 2));
  }
  if (!t.empty() && (t.front() == '"' || t.front() == '\'')) t = trim(std::string_view(t).substr(1));
  if (!t.empty() && (t.back() == '"' || t.back() == '\'')) t = trim(std::string_view(t).substr(0, t.size() - 1));
  return t;
}

bool is_number(std::string_view s) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  char* end = nullptr;
  std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

// "12. text" -> "text"; leaves text without a numeric index untouched.
std::string strip_index(std::string_view s) {
  std::string t = trim(s);
  std::size_t i = 0;
  while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
  if (i > 0 && i < t.size() && t[i] == '.') return trim(std::string_view(t).substr(i + 1));
  return t;
}

bool is_ident(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

SkillCall build_call(Skill skill, std::vector<std::string> params, std::string_view source) {
  for (auto& p : params) {
    p = unquote(p);
    std::replace(p.begin(), p.end(), '_', ' ');  // drink_table names the drink table
  }
  SkillCall call{skill, {}};
  switch (skill) {
    case Skill::kNavigate:
      if (params.size() == 1 && !params[0].empty()) {
        call.params = std::move(params);
      } else if (params.size() == 2 && is_number(params[0]) && is_number(params[1])) {
        call.params = std::move(params);
      } else {
        throw Error(ErrorCode::kMalformedCall, std::string(source));
      }
      break;
    case Skill::kPick:
      if (params.size() != 1 || params[0].empty()) throw Error(ErrorCode::kMalformedCall, std::string(source));
      call.params = std::move(params);
      break;
    case Skill::kPlace:
    case Skill::kDone:
      break;
  }
  return call;
}

SkillCall call_from_args(Skill skill, std::string_view arg, std::string_view source) {
  const std::string a = trim(arg);
  std::vector<std::string> params;
  if (skill == Skill::kNavigate) {
    const auto comma = a.find(',');
    if (comma != std::string::npos && a.find(',', comma + 1) == std::string::npos &&
        is_number(std::string_view(a).substr(0, comma)) && is_number(std::string_view(a).substr(comma + 1))) {
      params = {trim(std::string_view(a).substr(0, comma)), trim(std::string_view(a).substr(comma + 1))};
    } else if (comma != std::string::npos) {
      throw Error(ErrorCode::kMalformedCall, std::string(source));  // site names carry no commas
    } else if (!a.empty()) {
      params = {a};
    }
  } else if (!a.empty()) {
    params = {a};
  }
  return build_call(skill, std::move(params), source);
}

SkillCall call_from_json(const json& j, const std::string& path) {
  if (j.is_string()) return parse_skill_call(j.get<std::string>());
  if (!j.is_object()) throw Error(ErrorCode::kSchemaMismatch, path);
  if (j.contains("next_action")) return call_from_json(j.at("next_action"), path + ".next_action");
  const auto skill_it = j.find("skill");
  if (skill_it == j.end() || !skill_it->is_string()) throw Error(ErrorCode::kSchemaMismatch, path + ".skill");
  const std::string name = skill_it->get<std::string>();
  const auto skill = parse_skill_name(trim(name));
  if (!skill) throw Error(ErrorCode::kUnknownSkill, name);
  std::vector<std::string> params;
  if (const auto p = j.find("params"); p != j.end() && !p->is_null()) {
    if (!p->is_array()) throw Error(ErrorCode::kSchemaMismatch, path + ".params");
    for (std::size_t i = 0; i < p->size(); ++i) {
      const json& v = (*p)[i];
      if (v.is_string()) params.push_back(v.get<std::string>());
      else if (v.is_number()) params.push_back(v.dump());
      else throw Error(ErrorCode::kSchemaMismatch, path + ".params[" + std::to_string(i) + "]");
    }
  }
  return build_call(*skill, std::move(params), j.dump());
}

struct Keyword {
  std::string_view text;
  Skill skill;
};

// Longer phrases first so "pick up" wins over "pick" at the same position.
constexpr Keyword kKeywords[] = {
    {"go back to ", Skill::kNavigate}, {"navigate to ", Skill::kNavigate}, {"return to ", Skill::kNavigate},
    {"head to ", Skill::kNavigate},    {"move to ", Skill::kNavigate},     {"go to ", Skill::kNavigate},
    {"pick up ", Skill::kPick},        {"grasp ", Skill::kPick},           {"grab ", Skill::kPick},
    {"pick ", Skill::kPick},           {"place ", Skill::kPlace},          {"put ", Skill::kPlace},
    {"set ", Skill::kPlace},           {"position ", Skill::kPlace},       {"drop ", Skill::kPlace},
};

constexpr std::string_view kArgStops[] = {" and ", ",", ".", ";", " then", " to ", " for ", " on ", " from ", " in ", "!"};

std::string keyword_arg(std::string_view original, std::string_view lowered, std::size_t from, Skill skill) {
  std::size_t end = lowered.size();
  for (auto stop : kArgStops) {
    if (skill == Skill::kNavigate && (stop == " on " || stop == " in " || stop == " from ")) continue;
    const auto at = lowered.find(stop, from);
    if (at != std::string_view::npos) end = std::min(end, at);
  }
  std::string arg = unquote(original.substr(from, end - from));
  for (std::string_view article : {"the ", "a ", "an ", "some "}) {
    if (lower(arg).rfind(article, 0) == 0) {
      arg = trim(std::string_view(arg).substr(article.size()));
      break;
    }
  }
  const std::string l = lower(arg);
  if (l == "it" || l == "it up" || l == "them" || l == "up") return {};
  return arg;
}

std::vector<SkillCall> explicit_calls(std::string_view text) {
  std::vector<SkillCall> calls;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_ident(text[i]) || (i > 0 && is_ident(text[i - 1]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_ident(text[j])) ++j;
    const auto skill = parse_skill_name(text.substr(i, j - i));
    std::size_t k = j;
    while (k < text.size() && text[k] == ' ') ++k;
    const bool bare_ident_token = text.substr(i, j - i).find('_') != std::string_view::npos;
    if (skill && k < text.size() && (text[k] == '(' || text[k] == '[') && (bare_ident_token || k == j)) {
      const char close = text[k] == '(' ? ')' : ']';
      const auto end = text.find(close, k + 1);
      if (end != std::string_view::npos) {
        try {
          calls.push_back(call_from_args(*skill, text.substr(k + 1, end - k - 1), text.substr(i, end + 1 - i)));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kMalformedCall) throw;
        }
        i = end + 1;
        continue;
      }
    }
    i = j;
  }
  return calls;
}

std::string verb_of(FeedbackKind k) {
  switch (k) {
    case FeedbackKind::kNavSuccess:
    case FeedbackKind::kNavFail: return "navigation";
    case FeedbackKind::kPickSuccess:
    case FeedbackKind::kPickFail: return "pick up";
    case FeedbackKind::kPlaceSuccess:
    case FeedbackKind::kPlaceFail: return "place";
  }
  return "navigation";
}

constexpr std::string_view kFeedbackPrefix = "#feedback: ";

}  // namespace

std::string_view to_string(Skill s) {
  switch (s) {
    case Skill::kNavigate: return "navigate";
    case Skill::kPick: return "pick";
    case Skill::kPlace: return "place";
    case Skill::kDone: return "done";
  }
  return "done";
}

std::optional<Skill> parse_skill_name(std::string_view name) {
  const std::string n = lower(name);
  if (n == "navigate" || n == "go_to" || n == "goto" || n == "navigate_to" || n == "move_to") return Skill::kNavigate;
  if (n == "pick" || n == "pick_up" || n == "pickup" || n == "grasp") return Skill::kPick;
  if (n == "place" || n == "put" || n == "place_on") return Skill::kPlace;
  if (n == "done" || n == "finish") return Skill::kDone;
  return std::nullopt;
}

SkillCall navigate_to(std::string site) { return {Skill::kNavigate, {std::move(site)}}; }
SkillCall pick_object(std::string object) { return {Skill::kPick, {std::move(object)}}; }
SkillCall place_held() { return {Skill::kPlace, {}}; }
SkillCall done_call() { return {Skill::kDone, {}}; }

std::string format_call(const SkillCall& call) {
  switch (call.skill) {
    case Skill::kNavigate:
      if (call.params.size() == 2) return "go_to(" + call.params[0] + ", " + call.params[1] + ")";
      return "go_to(" + (call.params.empty() ? std::string() : call.params[0]) + ")";
    case Skill::kPick: return "pick_up(" + (call.params.empty() ? std::string() : call.params[0]) + ")";
    case Skill::kPlace: return "place()";
    case Skill::kDone: return "done";
  }
  return "done";
}

std::string call_key(const SkillCall& call) {
  std::string key(to_string(call.skill));
  key += '(';
  for (std::size_t i = 0; i < call.params.size(); ++i) {
    if (i) key += ", ";
    key += lower(call.params[i]);
  }
  key += ')';
  return key;
}

std::vector<SkillCall> Plan::flattened() const {
  std::vector<SkillCall> out;
  for (const auto& st : subtasks) out.insert(out.end(), st.calls.begin(), st.calls.end());
  return out;
}

std::string_view to_string(FeedbackKind k) {
  switch (k) {
    case FeedbackKind::kNavSuccess: return "nav_success";
    case FeedbackKind::kNavFail: return "nav_fail";
    case FeedbackKind::kPickSuccess: return "pick_success";
    case FeedbackKind::kPickFail: return "pick_fail";
    case FeedbackKind::kPlaceSuccess: return "place_success";
    case FeedbackKind::kPlaceFail: return "place_fail";
  }
  return "nav_success";
}

bool FeedbackEvent::ok() const {
  return kind == FeedbackKind::kNavSuccess || kind == FeedbackKind::kPickSuccess ||
         kind == FeedbackKind::kPlaceSuccess;
}

FeedbackEvent nav_success(std::vector<std::string> observation) {
  return {FeedbackKind::kNavSuccess, std::move(observation), std::nullopt};
}

FeedbackEvent failure(Skill skill, std::string detail) {
  FeedbackKind kind = FeedbackKind::kNavFail;
  if (skill == Skill::kPick) kind = FeedbackKind::kPickFail;
  if (skill == Skill::kPlace) kind = FeedbackKind::kPlaceFail;
  return {kind, std::nullopt, std::move(detail)};
}

FeedbackEvent success(Skill skill) {
  if (skill == Skill::kPick) return {FeedbackKind::kPickSuccess, std::nullopt, std::nullopt};
  if (skill == Skill::kPlace) return {FeedbackKind::kPlaceSuccess, std::nullopt, std::nullopt};
  return nav_success({});
}

SkillCall parse_skill_call(std::string_view text) {
  std::string t = strip_index(text);
  while (!t.empty() && (t.back() == '.' || t.back() == ';' || t.back() == ',')) t.pop_back();
  t = trim(t);
  std::size_t n = 0;
  while (n < t.size() && is_ident(t[n])) ++n;
  if (n == 0) throw Error(ErrorCode::kMalformedCall, std::string(text));
  const std::string name = t.substr(0, n);
  const auto skill = parse_skill_name(name);
  if (!skill) throw Error(ErrorCode::kUnknownSkill, name);
  const std::string rest = trim(std::string_view(t).substr(n));
  if (rest.empty()) {
    if (*skill == Skill::kPlace || *skill == Skill::kDone) return {*skill, {}};
    throw Error(ErrorCode::kMalformedCall, std::string(text));
  }
  const char open = rest.front();
  const char close = rest.back();
  if ((open != '(' && open != '[') || (close != ')' && close != ']') || rest.size() < 2) {
    throw Error(ErrorCode::kMalformedCall, std::string(text));
  }
  return call_from_args(*skill, std::string_view(rest).substr(1, rest.size() - 2), text);
}

std::vector<SkillCall> extract_calls(std::string_view sentence) {
  const std::string text = strip_index(sentence);
  auto calls = explicit_calls(text);
  if (!calls.empty()) return calls;

  const std::string lowered = lower(text);
  struct Hit {
    std::size_t pos;
    std::size_t len;
    Skill skill;
  };
  std::vector<Hit> hits;
  std::vector<bool> taken(lowered.size(), false);
  for (const auto& kw : kKeywords) {
    for (auto at = lowered.find(kw.text); at != std::string::npos; at = lowered.find(kw.text, at + 1)) {
      if (at > 0 && std::isalnum(static_cast<unsigned char>(lowered[at - 1]))) continue;
      if (taken[at]) continue;
      for (std::size_t k = at; k < at + kw.text.size(); ++k) taken[k] = true;
      hits.push_back({at, kw.text.size(), kw.skill});
    }
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) { return a.pos < b.pos; });
  for (const auto& h : hits) {
    if (h.skill == Skill::kPlace) {
      calls.push_back(place_held());
      continue;
    }
    std::string arg = keyword_arg(text, lowered, h.pos + h.len, h.skill);
    if (arg.empty()) continue;
    calls.push_back({h.skill, {std::move(arg)}});
  }
  return calls;
}

Plan parse_initial_plan(std::string_view text) {
  const json j = extract_json_object(text);
  Plan plan;
  if (const auto r = j.find("reasoning"); r != j.end() && !r->is_null()) {
    if (!r->is_string()) throw Error(ErrorCode::kSchemaMismatch, "reasoning");
    plan.reasoning = r->get<std::string>();
  }
  const auto list = j.find("action_list");
  if (list == j.end() || !list->is_array()) throw Error(ErrorCode::kSchemaMismatch, "action_list");
  for (std::size_t i = 0; i < list->size(); ++i) {
    const json& item = (*list)[i];
    const std::string path = "action_list[" + std::to_string(i) + "]";
    Subtask st;
    if (item.is_string()) {
      const std::string sentence = item.get<std::string>();
      st.desc = strip_index(sentence);
      st.calls = extract_calls(sentence);
    } else if (item.is_object()) {
      if (const auto d = item.find("desc"); d != item.end() && !d->is_null()) {
        if (!d->is_string()) throw Error(ErrorCode::kSchemaMismatch, path + ".desc");
        st.desc = d->get<std::string>();
      }
      if (const auto calls = item.find("action_list"); calls != item.end() && !calls->is_null()) {
        if (!calls->is_array()) throw Error(ErrorCode::kSchemaMismatch, path + ".action_list");
        for (std::size_t k = 0; k < calls->size(); ++k) {
          st.calls.push_back(call_from_json((*calls)[k], path + ".action_list[" + std::to_string(k) + "]"));
        }
      } else if (!item.contains("desc")) {
        throw Error(ErrorCode::kSchemaMismatch, path);
      }
    } else {
      throw Error(ErrorCode::kSchemaMismatch, path);
    }
    plan.subtasks.push_back(std::move(st));
  }
  if (const auto f = j.find("first_action"); f != j.end() && !f->is_null()) {
    plan.first_action = call_from_json(*f, "first_action");
  } else {
    const auto flat = plan.flattened();
    if (flat.empty()) throw Error(ErrorCode::kSchemaMismatch, "first_action");
    plan.first_action = flat.front();
  }
  return plan;
}

StepReply parse_step_reply(std::string_view text) {
  const json j = extract_json_object(text);
  StepReply reply;
  for (const char* key : {"step_by_step_reasoning", "reasoning"}) {
    if (const auto r = j.find(key); r != j.end() && r->is_string()) {
      reply.reasoning = r->get<std::string>();
      break;
    }
  }
  const auto next = j.find("next_action");
  if (next == j.end() || next->is_null()) throw Error(ErrorCode::kMissingNextAction, j.dump());
  reply.next_action = call_from_json(*next, "next_action");
  return reply;
}

std::string encode_plan(const Plan& plan) {
  auto call_json = [](const SkillCall& c) {
    nlohmann::ordered_json out;
    out["skill"] = to_string(c.skill);
    out["params"] = c.params;
    return out;
  };
  nlohmann::ordered_json out;
  out["reasoning"] = plan.reasoning;
  out["action_list"] = nlohmann::ordered_json::array();
  for (const auto& st : plan.subtasks) {
    nlohmann::ordered_json s;
    s["desc"] = st.desc;
    s["action_list"] = nlohmann::ordered_json::array();
    for (const auto& c : st.calls) s["action_list"].push_back(call_json(c));
    out["action_list"].push_back(std::move(s));
  }
  out["first_action"] = call_json(plan.first_action);
  return out.dump(2);
}

std::string render_feedback(const FeedbackEvent& event) {
  std::string out(kFeedbackPrefix);
  out += verb_of(event.kind);
  switch (event.kind) {
    case FeedbackKind::kNavSuccess: {
      const auto& names = event.observation ? *event.observation : std::vector<std::string>{};
      if (names.empty()) return out + " success, there is nothing on the table";
      out += " success, there are ";
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) out += (i + 1 == names.size()) ? " and " : ", ";
        out += names[i];
      }
      return out + " on the table";
    }
    case FeedbackKind::kPickSuccess:
    case FeedbackKind::kPlaceSuccess: return out + " success";
    case FeedbackKind::kNavFail:
    case FeedbackKind::kPickFail:
    case FeedbackKind::kPlaceFail: return out + " failed, " + event.detail.value_or("");
  }
  return out;
}

FeedbackEvent parse_feedback(std::string_view text) {
  std::string_view t = text;
  while (!t.empty() && (t.back() == '\n' || t.back() == '\r')) t.remove_suffix(1);
  std::string_view prefix = "#feedback:";
  if (t.substr(0, prefix.size()) != prefix) throw Error(ErrorCode::kParseFail, std::string(text));
  t.remove_prefix(prefix.size());
  if (!t.empty() && t.front() == ' ') t.remove_prefix(1);

  const std::pair<std::string_view, FeedbackKind> fails[] = {{"navigation failed, ", FeedbackKind::kNavFail},
                                                             {"pick up failed, ", FeedbackKind::kPickFail},
                                                             {"place failed, ", FeedbackKind::kPlaceFail}};
  for (const auto& [head, kind] : fails) {
    if (t.substr(0, head.size()) == head) return {kind, std::nullopt, std::string(t.substr(head.size()))};
  }
  if (t == "pick up success") return {FeedbackKind::kPickSuccess, std::nullopt, std::nullopt};
  if (t == "place success") return {FeedbackKind::kPlaceSuccess, std::nullopt, std::nullopt};
  if (t == "navigation success, there is nothing on the table") return nav_success({});

  constexpr std::string_view head = "navigation success, there are ";
  constexpr std::string_view tail = " on the table";
  if (t.size() < head.size() + tail.size() || t.substr(0, head.size()) != head ||
      t.substr(t.size() - tail.size()) != tail) {
    throw Error(ErrorCode::kParseFail, std::string(text));
  }
  std::string_view body = t.substr(head.size(), t.size() - head.size() - tail.size());
  std::vector<std::string> names;
  std::string last;
  if (const auto at = body.rfind(" and "); at != std::string_view::npos) {
    last = std::string(body.substr(at + 5));
    body = body.substr(0, at);
  }
  for (std::size_t start = 0;;) {
    const auto comma = body.find(", ", start);
    names.emplace_back(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 2;
  }
  if (!last.empty()) names.push_back(std::move(last));
  for (const auto& n : names) {
    if (n.empty()) throw Error(ErrorCode::kParseFail, std::string(text));
  }
  return nav_success(std::move(names));
}

}  // namespace leanplan
