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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "leanplan/executor.hpp"
#include "leanplan/memory.hpp"
#include "leanplan/metrics.hpp"
#include "leanplan/task.hpp"

namespace leanplan {

enum class BackendKind { kOracle, kScripted, kHttp };

std::string_view to_string(BackendKind k);
std::optional<BackendKind> parse_backend_kind(std::string_view text);

struct RunConfig {
  BackendKind backend = BackendKind::kOracle;
  /// Scripted backend: {"turns": [...]} for one episode, or
  /// {"episodes": [{"task_id" or "instruction", "turns"}]} for a suite.
  std::string script_text;
  EpisodePolicy policy;
  std::uint64_t seed = 0;
  FaultModel faults;        // probabilities; scripted perturbations come from tasks
  bool perturb = true;      // apply the perturbations a task declares
  int workers = 1;
  std::string out_dir;      // empty: keep results in memory only
  std::optional<SceneMap> scene;  // default: canonical_scene(seed)

  /// Throws Error(kInvalidConfig).
  void validate() const;
};

struct EpisodeRun {
  Task task;
  EpisodeTranscript transcript;
  std::string jsonl;
};

struct SuiteRun {
  std::string suite;
  std::vector<EpisodeRun> runs;

  std::vector<EpisodeSummary> summaries() const;
};

/// Scene, memory and robot pose that persist across the episodes of one
/// session.
class Session {
 public:
  Session(SceneMap scene, std::uint64_t seed);

  /// Runs one task against the current scene and keeps the end state.
  EpisodeRun run(const Task& task, const RunConfig& config);

  const SceneMap& scene() const { return scene_; }
  const ShortTermStore& memory() const { return stm_; }

 private:
  SceneMap scene_;
  std::uint64_t seed_;
  int episodes_ = 0;
  HashedBagOfWords embedder_;
  ShortTermStore stm_;
  LongTermMemory ltm_;
};

/// Tasks sharing a session id run in order on one Session; sessions run in
/// parallel on config.workers threads. Results keep suite order. Writes
/// transcripts and a report under out_dir/<suite> when out_dir is set.
SuiteRun run_suite(const Suite& suite, const RunConfig& config);

/// The perturbation-free copy of a suite.
Suite without_perturbations(Suite suite);

/// Writes <dir>/<task_id>.jsonl for every run plus report.json and
/// report.txt. Throws Error(kInvalidConfig) when the directory cannot be
/// written.
void write_suite_outputs(const SuiteRun& run, const std::string& dir, const Report& report);

/// Reads instructions line by line until EOF, running each as an episode on
/// one persistent session and printing feedback lines and the verdict.
void run_repl(std::istream& in, std::ostream& out, const RunConfig& config);

}  // namespace leanplan
