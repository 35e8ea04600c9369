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
#include <algorithm>
#include <cctype>
#include <set>

#include "leanplan/task.hpp"

namespace leanplan {

namespace {

struct Mention {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool is_site = false;
  std::string site;
  GoalClause clause;  // objects and selectors
};

struct Word {
  std::size_t begin;
  std::size_t end;
  std::string text;
};

std::string flatten(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    const auto u = static_cast<unsigned char>(c);
    c = (std::isalnum(u) || c == '-') ? static_cast<char>(std::tolower(u)) : ' ';
  }
  return out;
}

std::vector<Word> words_of(const std::string& flat) {
  std::vector<Word> out;
  std::size_t i = 0;
  while (i < flat.size()) {
    if (flat[i] == ' ') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < flat.size() && flat[j] != ' ') ++j;
    out.push_back({i, j, flat.substr(i, j - i)});
    i = j;
  }
  return out;
}

bool at_boundary(const std::string& flat, std::size_t pos, std::size_t len) {
  const bool left = pos == 0 || flat[pos - 1] == ' ';
  const bool right = pos + len == flat.size() || flat[pos + len] == ' ';
  return left && right;
}

// Claims every free whole-word occurrence of each label, longest labels first.
template <typename OnHit>
void claim_labels(const std::string& flat, std::vector<bool>& taken,
                  std::vector<std::pair<std::string, std::size_t>> labels, OnHit on_hit) {
  std::stable_sort(labels.begin(), labels.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  for (const auto& [label, index] : labels) {
    if (label.empty()) continue;
    std::size_t pos = flat.find(label);
    while (pos != std::string::npos) {
      const bool free = std::none_of(taken.begin() + static_cast<std::ptrdiff_t>(pos),
                                     taken.begin() + static_cast<std::ptrdiff_t>(pos + label.size()),
                                     [](bool b) { return b; });
      if (free && at_boundary(flat, pos, label.size())) {
        std::fill(taken.begin() + static_cast<std::ptrdiff_t>(pos),
                  taken.begin() + static_cast<std::ptrdiff_t>(pos + label.size()), true);
        on_hit(pos, pos + label.size(), index);
      }
      pos = flat.find(label, pos + 1);
    }
  }
}

std::vector<std::string> words_before(const std::vector<Word>& words, std::size_t pos, std::size_t n) {
  std::vector<std::string> out;
  for (auto it = words.rbegin(); it != words.rend() && out.size() < n; ++it) {
    if (it->end <= pos) out.push_back(it->text);
  }
  return out;  // nearest first
}

}  // namespace

std::optional<std::vector<GoalClause>> read_instruction(std::string_view instruction, const SceneMap& scene) {
  const std::string flat = flatten(instruction);
  const auto words = words_of(flat);
  std::vector<bool> taken(flat.size(), false);
  std::vector<Mention> mentions;

  std::vector<std::pair<std::string, std::size_t>> site_labels;
  for (std::size_t i = 0; i < scene.sites.size(); ++i) {
    site_labels.emplace_back(flatten(scene.sites[i].name), i);
    for (const auto& a : scene.sites[i].aliases) site_labels.emplace_back(flatten(a), i);
  }
  claim_labels(flat, taken, site_labels, [&](std::size_t b, std::size_t e, std::size_t i) {
    Mention m;
    m.begin = b;
    m.end = e;
    m.is_site = true;
    m.site = scene.sites[i].name;
    mentions.push_back(std::move(m));
  });

  std::vector<std::pair<std::string, std::size_t>> object_labels;
  for (std::size_t i = 0; i < scene.objects.size(); ++i) {
    std::vector<std::string> names = {scene.objects[i].name};
    names.insert(names.end(), scene.objects[i].aliases.begin(), scene.objects[i].aliases.end());
    for (const auto& n : names) {
      object_labels.emplace_back(flatten(n), i);
      object_labels.emplace_back(flatten(n) + "s", i);
      object_labels.emplace_back(flatten(n) + "es", i);
    }
  }
  claim_labels(flat, taken, object_labels, [&](std::size_t b, std::size_t e, std::size_t i) {
    Mention m;
    m.begin = b;
    m.end = e;
    m.clause.kind = GoalClause::Kind::kMove;
    m.clause.object = scene.objects[i].name;
    const auto before = words_before(words, b, 2);
    m.clause.distinct = std::find(before.begin(), before.end(), "another") != before.end();
    mentions.push_back(std::move(m));
  });

  // Descriptive phrases: categories, colors and a few needs.
  std::set<std::string> colors;
  for (const auto& o : scene.objects) {
    const std::string c = o.attribute("color");
    if (!c.empty()) colors.insert(c);
  }
  const std::vector<std::pair<std::string, std::map<std::string, std::string>>> phrases = {
      {"vitamin c", {{"category", "fruit"}, {"vitamin_c", "rich"}}},
      {"something to eat", {{"edible", "yes"}}},
      {"to eat", {{"edible", "yes"}}},
      {"pick-me-up", {{"category", "drink"}, {"caffeine", "yes"}}},
      {"gift", {{"category", "toy"}}},
      {"fruits", {{"category", "fruit"}}},
      {"fruit", {{"category", "fruit"}}},
      {"drinks", {{"category", "drink"}}},
      {"drink", {{"category", "drink"}}},
      {"toys", {{"category", "toy"}}},
      {"toy", {{"category", "toy"}}},
  };
  std::vector<std::pair<std::string, std::size_t>> phrase_labels;
  for (std::size_t i = 0; i < phrases.size(); ++i) phrase_labels.emplace_back(phrases[i].first, i);
  claim_labels(flat, taken, phrase_labels, [&](std::size_t b, std::size_t e, std::size_t i) {
    Mention m;
    m.begin = b;
    m.end = e;
    m.clause.kind = GoalClause::Kind::kSelect;
    m.clause.select = phrases[i].second;
    for (const auto& w : words_before(words, b, 3)) {
      if (colors.count(w) != 0 && m.clause.select.count("color") == 0) m.clause.select["color"] = w;
      if (w == "all" || w == "every") m.clause.all = true;
      if (w == "smallest") m.clause.min_attr = "size_rank";
      if (w == "biggest" || w == "largest") m.clause.max_attr = "size_rank";
    }
    mentions.push_back(std::move(m));
  });

  std::sort(mentions.begin(), mentions.end(), [](const Mention& a, const Mention& b) { return a.begin < b.begin; });

  static const std::set<std::string> kMotion = {"go", "move", "return", "navigate", "head", "come", "back"};
  std::vector<GoalClause> out;
  std::vector<GoalClause> pending;
  for (const auto& m : mentions) {
    if (!m.is_site) {
      pending.push_back(m.clause);
      continue;
    }
    auto before = words_before(words, m.begin, 3);
    if (!before.empty() && before.front() == "the") before.erase(before.begin());
    if (!before.empty() && before.front() == "from") {
      for (auto& c : pending) {
        if (c.kind == GoalClause::Kind::kSelect && !c.from) c.from = m.site;
      }
      continue;
    }
    const bool motion = before.size() >= 2 && before[0] == "to" && kMotion.count(before[1]) != 0;
    if (motion && (pending.empty() || before[1] == "return")) {
      GoalClause go;
      go.kind = GoalClause::Kind::kGo;
      go.to = m.site;
      if (!pending.empty()) {
        // "... and return to X": objects mentioned so far lack a destination.
        pending.clear();
      }
      out.push_back(std::move(go));
      continue;
    }
    for (auto& c : pending) {
      c.to = m.site;
      out.push_back(std::move(c));
    }
    pending.clear();
  }
  if (out.empty()) return std::nullopt;
  // Only the last navigation target matters.
  std::vector<GoalClause> result;
  std::optional<GoalClause> go;
  for (auto& c : out) {
    if (c.kind == GoalClause::Kind::kGo) {
      go = std::move(c);
    } else {
      result.push_back(std::move(c));
    }
  }
  if (go) result.push_back(std::move(*go));
  return result;
}

}  // namespace leanplan
