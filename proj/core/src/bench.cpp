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
#include "leanplan/bench.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

#include "leanplan/error.hpp"
#include "leanplan/oracle_planner.hpp"

namespace leanplan {

std::string_view to_string(BackendKind k) {
  switch (k) {
    case BackendKind::kOracle: return "oracle";
    case BackendKind::kScripted: return "scripted";
    case BackendKind::kHttp: return "http";
  }
  return "oracle";
}

std::optional<BackendKind> parse_backend_kind(std::string_view text) {
  if (text == "oracle") return BackendKind::kOracle;
  if (text == "scripted") return BackendKind::kScripted;
  if (text == "http") return BackendKind::kHttp;
  return std::nullopt;
}

void RunConfig::validate() const {
  policy.validate();
  if (!faults.valid()) throw Error(ErrorCode::kInvalidConfig, "fault probabilities must lie in [0, 1]");
  if (workers < 1) throw Error(ErrorCode::kInvalidConfig, "workers must be at least 1");
  if (backend == BackendKind::kScripted && script_text.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "the scripted backend needs a script");
  }
  if (backend == BackendKind::kHttp) (void)HttpConfig::from_env();
}

std::vector<EpisodeSummary> SuiteRun::summaries() const {
  std::vector<EpisodeSummary> out;
  out.reserve(runs.size());
  for (const auto& r : runs) out.push_back(summarize(r.transcript));
  return out;
}

namespace {

Script script_for(const Task& task, const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("script is not JSON: ") + e.what());
  }
  if (j.is_object() && j.contains("episodes") && j["episodes"].is_array()) {
    for (const auto& ep : j["episodes"]) {
      if (!ep.is_object()) continue;
      const bool by_id = ep.contains("task_id") && ep["task_id"] == task.id;
      const bool by_text = ep.contains("instruction") && ep["instruction"] == task.instruction;
      if (by_id || by_text) return parse_script(nlohmann::json{{"turns", ep.value("turns", nlohmann::json::array())}}.dump());
    }
    throw Error(ErrorCode::kInvalidConfig, "script has no episode for task " + task.id);
  }
  try {
    return parse_script(text);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, std::string("bad script: ") + e.what());
  }
}

EpisodeTranscript early_failure(const Task& task, const RunConfig& cfg, std::uint64_t seed, FailureReason reason,
                                std::string detail) {
  EpisodeTranscript tr;
  tr.task_id = task.id;
  tr.level = task.level;
  tr.instruction = task.instruction;
  tr.backend = std::string(to_string(cfg.backend));
  tr.seed = seed;
  tr.policy = cfg.policy;
  Turn t;
  t.note = detail;
  tr.turns.push_back(std::move(t));
  tr.verdict.reason = reason;
  tr.verdict.detail = std::move(detail);
  return tr;
}

}  // namespace

Session::Session(SceneMap scene, std::uint64_t seed)
    : scene_(std::move(scene)), seed_(seed), stm_(embedder_), ltm_(LongTermMemory::from_scene(scene_)) {}

EpisodeRun Session::run(const Task& task, const RunConfig& cfg) {
  EpisodeRun run;
  run.task = task;
  const std::uint64_t seed = seed_ + static_cast<std::uint64_t>(episodes_++);

  SceneMap scene = scene_;
  try {
    apply_setup(scene, task.setup);
  } catch (const Error& e) {
    throw Error(ErrorCode::kInvalidConfig, "task " + task.id + " setup: " + e.what());
  }

  EpisodeTask et{task.id, task.level, task.instruction, std::nullopt};
  std::optional<std::string> goal_error;
  try {
    if (!task.goal.empty()) {
      et.goal = resolve_goal(task.goal, scene);
    } else if (const auto clauses = read_instruction(task.instruction, scene)) {
      et.goal = resolve_goal(*clauses, scene);
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kImpossibleTask) {
      throw Error(ErrorCode::kInvalidConfig, "task " + task.id + " goal: " + e.what());
    }
    goal_error = e.what();
  }
  if (!goal_error && !et.goal && cfg.backend == BackendKind::kOracle) goal_error = "no goal could be read from the instruction";
  if (goal_error) {
    run.transcript = early_failure(task, cfg, seed, FailureReason::kImpossibleTask, *goal_error);
    run.jsonl = transcript_jsonl(run.transcript);
    return run;
  }

  FaultModel faults = cfg.faults;
  faults.scripted_perturbations.clear();
  if (cfg.perturb) {
    try {
      faults.scripted_perturbations = resolve_perturbations(task.perturbations, scene);
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig, "task " + task.id + " perturbation: " + e.what());
    }
  }
  SimEnv env(scene, seed, faults);

  std::unique_ptr<PlannerBackend> planner;
  std::unique_ptr<VlmBackend> vlm;
  switch (cfg.backend) {
    case BackendKind::kOracle: planner = std::make_unique<OraclePlanner>(env, *et.goal); break;
    case BackendKind::kScripted: planner = std::make_unique<ScriptedPlanner>(script_for(task, cfg.script_text)); break;
    case BackendKind::kHttp: planner = std::make_unique<HttpPlanner>(HttpConfig::from_env()); break;
  }
  if (cfg.backend == BackendKind::kHttp) {
    vlm = std::make_unique<HttpVlm>(HttpConfig::from_env());
  } else {
    vlm = std::make_unique<SimulatedVlm>();
  }
  run.transcript = run_episode(env, *planner, *vlm, {&stm_, &ltm_}, cfg.policy, et);
  run.jsonl = transcript_jsonl(run.transcript);
  scene_ = env.scene();
  return run;
}

Suite without_perturbations(Suite suite) {
  for (auto& t : suite.tasks) t.perturbations.clear();
  return suite;
}

SuiteRun run_suite(const Suite& suite, const RunConfig& cfg) {
  cfg.validate();
  const SceneMap base = cfg.scene ? *cfg.scene : canonical_scene(cfg.seed);

  std::vector<std::vector<std::size_t>> sessions;
  std::map<std::string, std::size_t> index_of;
  for (std::size_t i = 0; i < suite.tasks.size(); ++i) {
    const auto [it, fresh] = index_of.emplace(suite.tasks[i].session, sessions.size());
    if (fresh) sessions.emplace_back();
    sessions[it->second].push_back(i);
  }

  SuiteRun result;
  result.suite = suite.name;
  result.runs.resize(suite.tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    while (true) {
      const std::size_t s = next.fetch_add(1);
      if (s >= sessions.size()) return;
      try {
        Session session(base, cfg.seed + sessions[s].front());
        for (std::size_t i : sessions[s]) result.runs[i] = session.run(suite.tasks[i], cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::min<int>(cfg.workers, static_cast<int>(std::max<std::size_t>(sessions.size(), 1)));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  if (!cfg.out_dir.empty() && !result.runs.empty()) {
    const Report report = ablation_report({{suite.name, result.summaries()}});
    write_suite_outputs(result, (std::filesystem::path(cfg.out_dir) / suite.name).string(), report);
  }
  return result;
}

void write_suite_outputs(const SuiteRun& run, const std::string& dir, const Report& report) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kInvalidConfig, "cannot create " + dir + ": " + ec.message());
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(std::filesystem::path(dir) / name, std::ios::binary);
    f << content;
    if (!f) throw Error(ErrorCode::kInvalidConfig, "cannot write " + name + " in " + dir);
  };
  for (const auto& r : run.runs) write(r.task.id + ".jsonl", r.jsonl);
  write("report.json", report.json.dump(2) + "\n");
  write("report.txt", report.text);
}

void run_repl(std::istream& in, std::ostream& out, const RunConfig& cfg) {
  cfg.validate();
  Session session(cfg.scene ? *cfg.scene : canonical_scene(cfg.seed), cfg.seed);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto e = line.find_last_not_of(" \t\r");
    Task task;
    task.id = "repl-" + std::to_string(++n);
    task.instruction = line.substr(b, e - b + 1);
    task.session = "repl";
    EpisodeRun run;
    try {
      run = session.run(task, cfg);
    } catch (const Error& err) {
      out << "error: " << err.what() << "\n";
      continue;
    }
    for (const auto& t : run.transcript.turns) {
      if (t.action) out << "> " << format_call(*t.action) << "\n";
      if (!t.feedback.empty()) out << t.feedback << "\n";
    }
    const auto& v = run.transcript.verdict;
    out << "verdict: " << (v.success ? "success" : "failure");
    if (v.reason) out << " (" << to_string(*v.reason) << ")";
    out << "\n" << std::flush;
    if (!cfg.out_dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(cfg.out_dir, ec);
      std::ofstream f(std::filesystem::path(cfg.out_dir) / (task.id + ".jsonl"), std::ios::binary);
      f << run.jsonl;
    }
  }
}

}  // namespace leanplan
