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
#include "leanplan/memory.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "leanplan/error.hpp"

namespace leanplan {

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

HashedBagOfWords::HashedBagOfWords(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw Error(ErrorCode::kInvalidConfig, "embedding dimension must be positive");
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<double> HashedBagOfWords::embed(std::string_view text) const {
  std::vector<double> v(dimension_, 0.0);
  auto tokens = tokenize(text);
  // Text without alphanumerics still gets a stable non-zero vector.
  if (tokens.empty()) tokens.emplace_back(text);
  for (const auto& t : tokens) v[fnv1a(t) % dimension_] += 1.0;
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  for (double& x : v) x /= norm;
  return v;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0.0;
  double na = 0.0;
  double nb = 0.0;
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  for (std::size_t i = n; i < a.size(); ++i) na += a[i] * a[i];
  for (std::size_t i = n; i < b.size(); ++i) nb += b[i] * b[i];
  if (na == 0.0 || nb == 0.0) return 0.0;
  const double c = dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(c, -1.0, 1.0);
}

std::string MemoryUnit::position() const { return site + " (" + std::string(to_string(side)) + " side)"; }

std::string MemoryUnit::rendered() const { return object + " at " + position() + ": " + img_summary; }

std::optional<std::size_t> argmax_similarity(const std::vector<double>& query,
                                             const std::vector<std::vector<double>>& candidates,
                                             const std::vector<int>& ids, double threshold) {
  if (candidates.empty()) return std::nullopt;
  std::vector<double> sims;
  sims.reserve(candidates.size());
  for (const auto& c : candidates) sims.push_back(cosine(query, c));
  const double top = *std::max_element(sims.begin(), sims.end());
  if (top < threshold) return std::nullopt;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < sims.size(); ++i) {
    if (top - sims[i] <= 1e-12 && (!best || ids[i] < ids[*best])) best = i;
  }
  return best;
}

ShortTermStore::ShortTermStore(const EmbeddingProvider& embedder, double threshold)
    : embedder_(&embedder), threshold_(threshold) {}

const MemoryUnit& ShortTermStore::upsert(std::string object, std::string site, Side side, std::string img_summary,
                                         int step) {
  for (std::size_t i = 0; i < units_.size(); ++i) {
    if (normalize_label(units_[i].object) == normalize_label(object)) {
      units_.erase(units_.begin() + static_cast<std::ptrdiff_t>(i));
      vectors_.erase(vectors_.begin() + static_cast<std::ptrdiff_t>(i));
      break;
    }
  }
  MemoryUnit unit{next_id_++, std::move(object), std::move(site), side, std::move(img_summary), step};
  vectors_.push_back(embedder_->embed(unit.rendered()));
  units_.push_back(std::move(unit));
  return units_.back();
}

std::optional<MemoryUnit> ShortTermStore::retrieve(std::string_view instruction) const {
  if (units_.empty()) return std::nullopt;
  std::vector<int> ids;
  ids.reserve(units_.size());
  for (const auto& u : units_) ids.push_back(u.id);
  const auto best = argmax_similarity(embedder_->embed(instruction), vectors_, ids, threshold_);
  if (!best) return std::nullopt;
  return units_[*best];
}

const MemoryUnit* ShortTermStore::find(std::string_view object) const {
  const std::string key = normalize_label(object);
  for (const auto& u : units_) {
    if (normalize_label(u.object) == key) return &u;
  }
  return nullptr;
}

std::string ShortTermStore::dump_jsonl() const {
  std::ostringstream out;
  for (const auto& u : units_) {
    nlohmann::ordered_json j;
    j["id"] = u.id;
    j["object"] = u.object;
    j["site"] = u.site;
    j["side"] = to_string(u.side);
    j["img"] = u.img_summary;
    j["step"] = u.created_step;
    out << j.dump() << '\n';
  }
  return out.str();
}

void ShortTermStore::load_jsonl(std::string_view text) {
  std::vector<MemoryUnit> units;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = "line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kSchemaMismatch, where);
    }
    try {
      MemoryUnit u;
      u.id = j.at("id").get<int>();
      u.object = j.at("object").get<std::string>();
      u.site = j.at("site").get<std::string>();
      const auto side = parse_side(j.at("side").get<std::string>());
      if (!side) throw Error(ErrorCode::kSchemaMismatch, where + ".side");
      u.side = *side;
      u.img_summary = j.at("img").get<std::string>();
      u.created_step = j.at("step").get<int>();
      units.push_back(std::move(u));
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kSchemaMismatch, where);
    }
  }
  units_.clear();
  vectors_.clear();
  next_id_ = 1;
  for (auto& u : units) {
    next_id_ = std::max(next_id_, u.id + 1);
    vectors_.push_back(embedder_->embed(u.rendered()));
    units_.push_back(std::move(u));
  }
}

LongTermMemory LongTermMemory::from_scene(const SceneMap& scene) {
  LongTermMemory ltm;
  ltm.grid_ = scene.grid;
  for (const auto& site : scene.sites) {
    if (site.footprint.empty()) continue;
    int x0 = site.footprint.front().x, x1 = x0, y0 = site.footprint.front().y, y1 = y0;
    for (Cell c : site.footprint) {
      x0 = std::min(x0, c.x);
      x1 = std::max(x1, c.x);
      y0 = std::min(y0, c.y);
      y1 = std::max(y1, c.y);
    }
    const Cell anchor{(x0 + x1) / 2, (y0 + y1) / 2};
    ltm.add_label(site.name, anchor);
    for (const auto& alias : site.aliases) ltm.labels_.emplace(alias, anchor);
  }
  return ltm;
}

Cell LongTermMemory::lookup(std::string_view label) const {
  const auto it = labels_.find(std::string(label));
  if (it == labels_.end()) throw Error(ErrorCode::kUnknownLabel, std::string(label));
  return it->second;
}

void LongTermMemory::add_label(std::string label, Cell cell) {
  if (!grid_.in_bounds(cell)) throw Error(ErrorCode::kUnknownLabel, label + " lies outside the grid");
  labels_[std::move(label)] = cell;
}

std::vector<std::string> memory_hints(const ShortTermStore& store, const LongTermMemory& ltm,
                                      std::string_view instruction) {
  const auto unit = store.retrieve(instruction);
  if (!unit) return {};
  if (ltm.labels().count(unit->site) == 0) return {};
  return {"according to memory, " + unit->object + " was last placed at " + unit->position()};
}

}  // namespace leanplan
