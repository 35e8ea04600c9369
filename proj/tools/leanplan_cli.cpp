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

// leanplan: run episodes, the benchmark suites, a REPL, and reports.
// Exit codes: 0 success, 1 failed verdict or runtime failure, 2 bad usage or
// configuration.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "leanplan/bench.hpp"
#include "leanplan/error.hpp"
#include "leanplan/metrics.hpp"
#include "leanplan/plan_codec.hpp"
#include "leanplan/task.hpp"

namespace fs = std::filesystem;
using namespace leanplan;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string backend = "oracle";
  std::string script;
  std::string scene;
  std::string feedback = "on";
  std::string memory = "off";
  std::string side_refinement = "on";
  std::string perturb = "off";
  std::string prompt = "lean";
  std::uint64_t seed = 0;
  int workers = 1;
  int max_steps = EpisodePolicy{}.max_steps;
  int max_retries = EpisodePolicy{}.max_retries_per_subgoal;
  double grasp_fail = 0.0;
  double nav_fail = 0.0;
  double misrecognition = 0.0;
  std::string out;
};

void add_run_flags(CLI::App* cmd, Options& o, bool with_workers) {
  const auto on_off = CLI::IsMember({"on", "off"});
  cmd->add_option("--backend", o.backend, "Planner backend")->check(CLI::IsMember({"oracle", "scripted", "http"}));
  cmd->add_option("--script", o.script, "Scripted backend reply file (JSON)");
  cmd->add_option("--scene", o.scene, "Scene file (JSON); default is the canonical warehouse");
  cmd->add_option("--feedback", o.feedback, "Closed-loop feedback")->check(on_off);
  cmd->add_option("--memory", o.memory, "Short- and long-term memory")->check(on_off);
  cmd->add_option("--side-refinement", o.side_refinement, "VLM table-side refinement before grasping")->check(on_off);
  cmd->add_option("--perturb", o.perturb, "Scripted environment perturbations")->check(on_off);
  cmd->add_option("--prompt", o.prompt, "Initial prompt variant")->check(CLI::IsMember({"lean", "full"}));
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--max-steps", o.max_steps, "Executed skill budget per episode");
  cmd->add_option("--max-retries", o.max_retries, "Consecutive failures allowed per skill call");
  cmd->add_option("--grasp-fail", o.grasp_fail, "Grasp failure probability");
  cmd->add_option("--nav-fail", o.nav_fail, "Navigation failure probability");
  cmd->add_option("--misrecognition", o.misrecognition, "Pick misrecognition probability");
  if (with_workers) cmd->add_option("--workers", o.workers, "Parallel sessions");
}

std::string read_file(const std::string& path, const char* what) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(std::string("cannot read ") + what + " " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw ConfigError("cannot write " + path.string());
}

RunConfig make_config(const Options& o) {
  RunConfig c;
  c.backend = *parse_backend_kind(o.backend);
  if (!o.script.empty()) c.script_text = read_file(o.script, "script");
  if (c.backend == BackendKind::kScripted && o.script.empty()) throw ConfigError("--backend scripted needs --script");
  if (!o.scene.empty()) c.scene = decode_scene(read_file(o.scene, "scene"));
  c.policy.feedback_enabled = o.feedback == "on";
  c.policy.memory_enabled = o.memory == "on";
  c.policy.side_refinement_enabled = o.side_refinement == "on";
  c.policy.prompt_variant = o.prompt == "full" ? PromptVariant::kFull : PromptVariant::kLean;
  c.policy.max_steps = o.max_steps;
  c.policy.max_retries_per_subgoal = o.max_retries;
  c.seed = o.seed;
  c.faults.grasp_fail_prob = o.grasp_fail;
  c.faults.nav_fail_prob = o.nav_fail;
  c.faults.misrecognition_prob = o.misrecognition;
  c.perturb = o.perturb == "on";
  c.workers = o.workers;
  c.validate();
  return c;
}

void print_turns(const EpisodeTranscript& tr, std::ostream& out) {
  for (const auto& t : tr.turns) {
    if (t.action) out << "> " << format_call(*t.action) << "\n";
    if (!t.feedback.empty()) out << t.feedback << "\n";
  }
  out << "verdict: " << (tr.verdict.success ? "success" : "failure");
  if (tr.verdict.reason) out << " (" << to_string(*tr.verdict.reason) << ")";
  if (!tr.verdict.detail.empty()) out << ": " << tr.verdict.detail;
  out << "\n";
}

std::optional<Task> find_builtin_task(const std::string& id) {
  for (const auto& name : builtin_suite_names()) {
    for (const auto& t : builtin_suite(name).tasks) {
      if (t.id == id) return t;
    }
  }
  return std::nullopt;
}

// A script file may carry its own task under "task" (same shape as a suite
// task entry).
std::optional<Task> task_from_script(const std::string& script_text) {
  const auto j = nlohmann::json::parse(script_text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("task")) return std::nullopt;
  nlohmann::json wrap = {{"name", "script"}, {"tasks", nlohmann::json::array({j["task"]})}};
  return parse_suite(wrap.dump()).tasks.front();
}

int cmd_episode(const Options& o, const std::string& instruction, const std::string& task_id) {
  RunConfig cfg = make_config(o);
  Task task;
  if (!task_id.empty()) {
    const auto t = find_builtin_task(task_id);
    if (!t) throw ConfigError("no builtin task " + task_id);
    task = *t;
  } else if (!instruction.empty()) {
    task.id = "episode";
    task.instruction = instruction;
    task.session = task.id;
  } else if (const auto t = task_from_script(cfg.script_text)) {
    task = *t;
  } else {
    throw ConfigError("give an instruction, --task, or a script that carries a task");
  }
  if (cfg.perturb && task.perturbations.empty()) {
    task = with_default_perturbations(Suite{"episode", task.level, {task}}, cfg.scene ? *cfg.scene : canonical_scene(cfg.seed))
               .tasks.front();
  }
  Session session(cfg.scene ? *cfg.scene : canonical_scene(cfg.seed), cfg.seed);
  const EpisodeRun run = session.run(task, cfg);
  print_turns(run.transcript, std::cout);

  const fs::path dir = o.out.empty() ? fs::path("leanplan-out") : fs::path(o.out);
  const Report report = ablation_report({{task.id, {summarize(run.transcript)}}});
  write_file(dir / (task.id + ".jsonl"), run.jsonl);
  write_file(dir / (task.id + ".report.json"), report.json.dump(2) + "\n");
  return run.transcript.verdict.success ? kOk : kFailed;
}

int cmd_bench(const Options& o, std::vector<int> levels, const std::vector<std::string>& suites) {
  for (int l : levels) {
    if (l < 1 || l > 4) {
      throw ConfigError("invalid level " + std::to_string(l) + "; valid levels are 1, 2, 3, 4");
    }
  }
  RunConfig cfg = make_config(o);
  cfg.out_dir = o.out;
  std::vector<Suite> selected;
  if (levels.empty() && suites.empty()) levels = {1, 2, 3, 4};
  for (int l : levels) selected.push_back(builtin_suite("level" + std::to_string(l)));
  for (const auto& s : suites) {
    const auto names = builtin_suite_names();
    if (std::find(names.begin(), names.end(), s) != names.end()) {
      selected.push_back(builtin_suite(s));
    } else {
      selected.push_back(parse_suite(read_file(s, "suite")));
    }
  }
  const SceneMap base = cfg.scene ? *cfg.scene : canonical_scene(cfg.seed);
  std::vector<std::pair<std::string, std::vector<EpisodeSummary>>> sets;
  for (auto& suite : selected) {
    if (cfg.perturb) suite = with_default_perturbations(std::move(suite), base);
    const SuiteRun run = run_suite(suite, cfg);
    int ok = 0;
    for (const auto& r : run.runs) ok += r.transcript.verdict.success ? 1 : 0;
    std::cout << suite.name << ": " << ok << "/" << run.runs.size() << " succeeded\n";
    sets.emplace_back(suite.name, run.summaries());
  }
  const Report report = ablation_report(sets);
  std::cout << "\n" << report.text;
  if (!o.out.empty()) {
    write_file(fs::path(o.out) / "report.json", report.json.dump(2) + "\n");
    write_file(fs::path(o.out) / "report.txt", report.text);
  }
  return kOk;
}

int cmd_repl(const Options& o) {
  RunConfig cfg = make_config(o);
  cfg.out_dir = o.out;
  run_repl(std::cin, std::cout, cfg);
  return kOk;
}

std::vector<EpisodeSummary> load_run_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw ConfigError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".jsonl") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<EpisodeSummary> out;
  for (const auto& f : files) out.push_back(summary_from_jsonl(read_file(f.string(), "transcript")));
  if (out.empty()) throw ConfigError("no transcripts in " + dir.string());
  return out;
}

std::string baselines_text() {
  const auto j = nlohmann::json::parse(builtin_data("baselines.json"));
  std::string t = "peak cost (published)\n";
  char buf[160];
  for (const auto& row : j["peak_flops"]) {
    std::snprintf(buf, sizeof buf, "  %-20s %-8s %-10s %12.1f GFLOPs\n", row["model"].get<std::string>().c_str(),
                  row["params"].get<std::string>().c_str(), row["tokens"].get<std::string>().c_str(),
                  row["peak_gflops"].get<double>());
    t += buf;
  }
  t += "latency per level (published, seconds)\n";
  for (const auto& row : j["latency"]) {
    LatencyBreakdown b{row["plan"], row["navi"], row["vlm"], row["grasp"], row["place"]};
    std::snprintf(buf, sizeof buf, "  L%d %-11s total %8.2f  recomputed %8.2f\n", row["level"].get<int>(),
                  row["method"].get<std::string>().c_str(), row["total"].get<double>(), latency_total(b));
    t += buf;
  }
  return t;
}

int cmd_report(const Options& o, const std::vector<std::string>& dirs, bool baselines, bool json) {
  if (dirs.empty() && !baselines) throw ConfigError("report needs at least one run directory or --baselines");
  if (baselines) std::cout << baselines_text();
  if (dirs.empty()) return kOk;
  std::vector<std::pair<std::string, std::vector<EpisodeSummary>>> sets;
  for (const auto& d : dirs) {
    fs::path p(d);
    const std::string label = p.filename().empty() ? p.parent_path().filename().string() : p.filename().string();
    sets.emplace_back(label, load_run_dir(p));
  }
  const Report report = ablation_report(sets);
  std::cout << (json ? report.json.dump(2) + "\n" : report.text);
  if (!o.out.empty()) {
    write_file(fs::path(o.out) / "report.json", report.json.dump(2) + "\n");
    write_file(fs::path(o.out) / "report.txt", report.text);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"leanplan: lean closed-loop task planning in a simulated warehouse"};
  app.require_subcommand(1);
  Options opt;

  auto* episode = app.add_subcommand("episode", "Run one episode");
  std::string instruction;
  std::string task_id;
  episode->add_option("instruction", instruction, "Instruction text");
  episode->add_option("--task", task_id, "Builtin task id, e.g. level1-03");
  episode->add_option("--out", opt.out, "Output directory (default leanplan-out)");
  add_run_flags(episode, opt, false);

  auto* bench = app.add_subcommand("bench", "Run benchmark suites");
  std::vector<int> levels;
  std::vector<std::string> suites;
  bench->add_option("--level", levels, "Task level 1-4 (repeatable)");
  bench->add_option("--suite", suites, "Builtin suite name or suite file (repeatable)");
  bench->add_option("--out", opt.out, "Output directory for transcripts and reports");
  add_run_flags(bench, opt, true);

  auto* repl = app.add_subcommand("repl", "Read instructions line by line on one persistent session");
  repl->add_option("--out", opt.out, "Directory for per-episode transcripts");
  add_run_flags(repl, opt, false);

  auto* report = app.add_subcommand("report", "Aggregate transcripts from run directories");
  std::vector<std::string> dirs;
  bool baselines = false;
  bool json = false;
  report->add_option("dirs", dirs, "Run directories, one run set each");
  report->add_flag("--baselines", baselines, "Print the published comparison figures");
  report->add_flag("--json", json, "Print the JSON report instead of the table");
  report->add_option("--out", opt.out, "Write report.json and report.txt here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*episode) return cmd_episode(opt, instruction, task_id);
    if (*bench) return cmd_bench(opt, levels, suites);
    if (*repl) return cmd_repl(opt);
    if (*report) return cmd_report(opt, dirs, baselines, json);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    const bool config = e.code() == ErrorCode::kInvalidConfig || e.code() == ErrorCode::kSchemaMismatch ||
                        e.code() == ErrorCode::kInvalidScene;
    return config ? kUsage : kFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
