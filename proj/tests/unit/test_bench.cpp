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
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "leanplan/bench.hpp"
#include "leanplan/error.hpp"

using namespace leanplan;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("leanplan-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(const std::string& args) {
  const std::string cmd = std::string(LEANPLAN_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("bench") {
  TEST_CASE("parallel sessions give the same transcripts as serial ones") {
    RunConfig serial;
    serial.seed = 5;
    serial.faults.grasp_fail_prob = 0.2;
    RunConfig parallel = serial;
    parallel.workers = 4;
    const Suite s = builtin_suite("level2");
    const SuiteRun a = run_suite(s, serial);
    const SuiteRun b = run_suite(s, parallel);
    REQUIRE(a.runs.size() == b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
      CHECK(a.runs[i].task.id == b.runs[i].task.id);
      CHECK(a.runs[i].jsonl == b.runs[i].jsonl);
    }
  }

  TEST_CASE("config validation") {
    RunConfig c;
    c.workers = 0;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.backend = BackendKind::kScripted;
    CHECK_THROWS_AS(c.validate(), Error);
    c = {};
    c.faults.grasp_fail_prob = 1.5;
    CHECK_THROWS_AS(c.validate(), Error);
    CHECK(parse_backend_kind("scripted") == BackendKind::kScripted);
    CHECK_FALSE(parse_backend_kind("gpt").has_value());
  }

  TEST_CASE("a session keeps the scene and memory between episodes") {
    RunConfig c;
    c.policy.memory_enabled = true;
    Session session(canonical_scene(), 3);

    Task first;
    first.id = "a";
    first.level = 1;
    first.instruction = "find the banana and put it on the storage rack";
    GoalClause banana;
    banana.object = "banana";
    banana.to = "storage rack";
    first.goal = {banana};
    const EpisodeRun r1 = session.run(first, c);
    REQUIRE(r1.transcript.verdict.success);
    CHECK(session.memory().find("banana") != nullptr);
    bool at_rack = false;
    for (const auto* o : session.scene().objects_at("storage rack")) at_rack |= o->name == "banana";
    CHECK(at_rack);

    Task second;
    second.id = "b";
    second.level = 3;
    second.instruction = "find a yellow fruit and place it on the dining table";
    GoalClause yellow;
    yellow.kind = GoalClause::Kind::kSelect;
    yellow.select = {{"category", "fruit"}, {"color", "yellow"}};
    yellow.to = "dining table";
    second.goal = {yellow};
    const EpisodeRun r2 = session.run(second, c);
    CHECK(r2.transcript.verdict.success);
    REQUIRE_FALSE(r2.transcript.turns.empty());
    REQUIRE_FALSE(r2.transcript.turns.front().planner.empty());
    const std::string& prompt = r2.transcript.turns.front().planner.front().stimulus;
    CHECK(prompt.find("according to memory") != std::string::npos);
    CHECK(prompt.find("storage rack") != std::string::npos);
  }

  TEST_CASE("an unreadable instruction fails without a crash") {
    Session session(canonical_scene(), 1);
    Task t;
    t.id = "x";
    t.instruction = "sing me a song";
    const EpisodeRun r = session.run(t, RunConfig{});
    CHECK_FALSE(r.transcript.verdict.success);
    CHECK(r.transcript.verdict.reason == FailureReason::kImpossibleTask);
  }

  TEST_CASE("repl runs one episode per line") {
    std::istringstream in("Move to the fruit table.\n\nfind lemon and put it on the drink table\n");
    std::ostringstream out;
    run_repl(in, out, RunConfig{});
    const std::string text = out.str();
    std::size_t n = 0;
    for (std::size_t pos = text.find("verdict: success"); pos != std::string::npos;
         pos = text.find("verdict: success", pos + 1)) {
      ++n;
    }
    CHECK(n == 2);
    CHECK(text.find("#feedback: pick up success") != std::string::npos);
  }

  TEST_CASE("suite outputs land on disk") {
    const fs::path dir = scratch("suite");
    RunConfig c;
    c.out_dir = dir.string();
    const SuiteRun r = run_suite(builtin_suite("level1"), c);
    CHECK(fs::exists(dir / "level1" / "report.json"));
    CHECK(fs::exists(dir / "level1" / "report.txt"));
    const std::string first = slurp(dir / "level1" / (r.runs[0].task.id + ".jsonl"));
    CHECK(first == r.runs[0].jsonl);
    fs::remove_all(dir);
  }

  TEST_CASE("cli exit codes") {
    const fs::path dir = scratch("cli");
    const std::string out = " --out " + dir.string();
    CHECK(cli("episode \"Move to the fruit table.\"" + out) == 0);
    CHECK(cli("episode \"find lemon and put it on the drink table\" --grasp-fail 1" + out) == 1);
    CHECK(cli("bench --level 5" + out) == 2);
    CHECK(cli("episode --backend scripted --script /nonexistent/script.json" + out) == 2);
    CHECK(cli("episode --bogus-flag" + out) == 2);
    CHECK(cli("episode --task level9-01" + out) == 2);
    CHECK(cli("bench --level 1" + out) == 0);
    fs::remove_all(dir);
  }

  TEST_CASE("cli runs are reproducible for a seed") {
    const fs::path a = scratch("seed-a");
    const fs::path b = scratch("seed-b");
    const std::string args = "episode \"find the apple and put it on the shipping table\" --grasp-fail 0.4 --seed 11";
    REQUIRE(cli(args + " --out " + a.string()) <= 1);
    REQUIRE(cli(args + " --out " + b.string()) <= 1);
    const std::string ta = slurp(a / "episode.jsonl");
    CHECK_FALSE(ta.empty());
    CHECK(ta == slurp(b / "episode.jsonl"));
    fs::remove_all(a);
    fs::remove_all(b);
  }
}
