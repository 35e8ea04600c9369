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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "leanplan/scene.hpp"

namespace leanplan {

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::size_t dimension() const = 0;
  /// Deterministic; never all-zero for non-empty text.
  virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Feature-hashed token counts (FNV-1a over lowercased alphanumeric tokens),
/// L2-normalized.
class HashedBagOfWords final : public EmbeddingProvider {
 public:
  explicit HashedBagOfWords(std::size_t dimension = 256);
  std::size_t dimension() const override { return dimension_; }
  std::vector<double> embed(std::string_view text) const override;

 private:
  std::size_t dimension_;
};

std::vector<std::string> tokenize(std::string_view text);
double cosine(const std::vector<double>& a, const std::vector<double>& b);

struct MemoryUnit {
  int id = 0;
  std::string object;
  std::string site;
  Side side = Side::kClose;
  std::string img_summary;
  int created_step = 0;

  /// "fruit table (close side)"
  std::string position() const;
  /// "OBJECT at POSITION: IMG"
  std::string rendered() const;

  friend bool operator==(const MemoryUnit&, const MemoryUnit&) = default;
};

/// Index of the best candidate by cosine similarity, ties to the lowest id;
/// nullopt when empty or the best similarity is below \p threshold.
std::optional<std::size_t> argmax_similarity(const std::vector<double>& query,
                                             const std::vector<std::vector<double>>& candidates,
                                             const std::vector<int>& ids, double threshold);

class ShortTermStore {
 public:
  static constexpr double kDefaultThreshold = 0.25;

  explicit ShortTermStore(const EmbeddingProvider& embedder, double threshold = kDefaultThreshold);

  /// Replaces any unit for the same object and appends a fresh one.
  const MemoryUnit& upsert(std::string object, std::string site, Side side, std::string img_summary, int step);
  std::optional<MemoryUnit> retrieve(std::string_view instruction) const;

  const std::vector<MemoryUnit>& units() const { return units_; }
  const std::vector<std::vector<double>>& vectors() const { return vectors_; }
  const MemoryUnit* find(std::string_view object) const;
  std::size_t size() const { return units_.size(); }
  double threshold() const { return threshold_; }

  std::string dump_jsonl() const;
  /// Replaces the contents. Throws Error(kSchemaMismatch).
  void load_jsonl(std::string_view text);

 private:
  const EmbeddingProvider* embedder_;
  double threshold_;
  int next_id_ = 1;
  std::vector<MemoryUnit> units_;
  std::vector<std::vector<double>> vectors_;
};

class LongTermMemory {
 public:
  LongTermMemory() = default;
  /// Lower layer is the scene grid; upper layer labels every site name and
  /// alias with the center cell of its footprint.
  static LongTermMemory from_scene(const SceneMap& scene);

  const GridMap& grid() const { return grid_; }
  const std::map<std::string, Cell>& labels() const { return labels_; }
  /// Exact match. Throws Error(kUnknownLabel).
  Cell lookup(std::string_view label) const;
  /// Throws Error(kUnknownLabel) for cells outside the grid.
  void add_label(std::string label, Cell cell);

 private:
  GridMap grid_;
  std::map<std::string, Cell> labels_;
};

/// "according to memory, <object> was last placed at <position>" for the
/// retrieved unit, or nothing.
std::vector<std::string> memory_hints(const ShortTermStore& store, const LongTermMemory& ltm,
                                      std::string_view instruction);

}  // namespace leanplan
