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
#include "leanplan/prompt.hpp"

#include <set>

namespace leanplan {

namespace {

// Context, skill, objective and output sections, followed by the map header.
constexpr std::string_view kPromptHead = R"lp(#CONTEXT#

You are highly skilled in robotic task planning, breaking down intricate and long-term tasks into distinct primitive actions. The robot has a mobile base and one arm; the room has many tables: a table of fruit, a table of drinks, a table of toys with corresponding objects on them, and a shipping shelf receiving shelf, which is shipping and receiving the objects.

When given a language instruction, you are required to break them into sub-tasks; for each subtask, you should list a set of skills to meet the goal.

#SKILL#

go_to(table name) pick_up(object name) place(object name) done


You must strictly obey these rules using the exact output form above. We assume that the objects are all on the table; thus, you can do pick_up right after the navigation skill is successful. Before the pick skill, you should analyze the feedback and analyze accordingly which object is correct/matches. It is possible that these subtask has same table to go. You can only execute one skill at a time; remember, the robot can only hold one object at a time.

#OBECTIVE#

When given a language instruction, you must break it into subtasks with short but logical analysis. Then, for each subtask, you should list a set of skills to meet the goal. At the start of each subtask, you should first go_to the correct table. You should analyse the feedback and analyse accordingly which object is correct/matches. Before placement, you should first go to the table as instruction.

Then, you need to output the first skill to execute and output one corresponding skill according to the user’s feedback. You can adjust the skill according to the feedback. Once the instruction is finished, you should finish the task by skill done.

#OUTPUT#

All of your output should be in JSON format.

At the first time, if it is #instruction, you should output

1. Describe the environment precisely and accurately, reasoning by instruction and environment(MAP) to give accurate actions and parameters2. overall action list3.the first action.

Otherwise, if it is #feedback according to the user’s feedback, you should output

1.step-by-step reasoning according to the feedback: you should check if the planned next action could be executed according to the feedback, give the reason, and the next action

2. next action to execute.

in this stage, you should only output the one skill that is exactly the next.

Except for the reasoning part, the output should consist of skills. All of your output should be in JSON format.

)lp";

constexpr std::string_view kFullExamples = R"lp(example 1:
user:#instruction: find lemon, apple and put it on a shipping table
your answer:
{
"reasoning": "The environment consists of a fruit table, a shipping shelf, a toy rack, a drink table, and a receiving shelf. The object [lemon] is most possible on the [fruit table], The object [apple] is most possible on the [fruit table]",
"action_list": [
"1. Go to the fruit table and find the lemon.",
"2. Pick up the lemon",
"3. Go to the shipping table",
"4. Place the lemon on the shipping table."
"5. Go to the fruit table and find the apple."
"6. Pick up the apple",
"7. Go to the shipping table",
"8. Place the apple on the shipping table".
],
"first_action": "1.go_to[fruit table]"
}

example 2:
user: #feedback: navigation success, there are apple, banana, lemon, plum and strawberry on the table
your answer:{
"step_by_step_reasoning": "Based on the feedback that we have navigated to the [fruit table] successfully, and there are apples, bananas, lemons, plums, and strawberries on the table. The object to pick up is [yellow fruit], according to the feedback, the yellow fruit is [lemon], I will first pick up [lemon].
"next_action": "pick_up(lemon)"
}

example 3:
user: #feedback: navigation success, there are squirrel toy, shark toy, school bus toy and fire machine toy on the table
your answer:{
"step_by_step_reasoning": "Based on the feedback that we have navigated to the [toy rack] successfully, there are squirrel toys, shark toys, school bus toys, and fire machine toys on the table. The object to pick up is [lemon]. However, there is no [lemon] on the table. Thus, we need to navigate to the most possible table for object [lemon], which is [fruit table]",
"next_action": "go_to(fruit table)"
}

example 4:
user:#feedback: pick up success
your answer: {
"step_by_step_reasoning": "Based on the feedback, we have picked up the [pepsi can] successfully. Now we need to place it on the [purchase table]."
"next_action": "go_to(purchase table)"
})lp";

constexpr std::string_view kLeanExample = R"lp(user:#feedback: place success
your answer: {"next_action": "done"})lp";

constexpr std::string_view kPaperMapSites[] = {"fruit table", "shipping shelf", "toy rack", "drink table",
                                               "receiving shelf"};
constexpr std::string_view kPaperMapLine = "[fruit table] [shipping shelf] [toy rack] [drink table][receiving shelf]";

}  // namespace

std::string render_map_line(const SceneMap& scene) {
  std::set<const Site*> covered;
  bool paper_layout = true;
  for (auto name : kPaperMapSites) {
    const Site* s = scene.find_site(name);
    if (s == nullptr) {
      paper_layout = false;
      break;
    }
    covered.insert(s);
  }
  std::string line;
  if (paper_layout) {
    line = kPaperMapLine;
  } else {
    covered.clear();
  }
  for (const auto& site : scene.sites) {
    if (site.kind == SiteKind::kEntry || covered.count(&site) != 0) continue;
    if (!line.empty()) line += ' ';
    line += "[" + site.name + "]";
  }
  return line;
}

std::string render_initial_prompt(std::string_view task, const SceneMap& scene,
                                  const std::vector<std::string>& memory_hints, PromptVariant variant) {
  std::string out(kPromptHead);
  out += "#MAP#\n\n";
  out += render_map_line(scene);
  out += "\n\n#EXAMPLE#\n\n";
  out += variant == PromptVariant::kFull ? kFullExamples : kLeanExample;
  if (!memory_hints.empty()) {
    out += "\n\n#MEMORY#\n";
    for (const auto& h : memory_hints) out += "\n" + h;
  }
  out += "\n\n#instruction: ";
  out += task;
  return out;
}

std::size_t approx_tokens(std::string_view text) { return text.size() / 4; }

std::string render_vlm_side_prompt(std::string_view object) {
  return "Please tell me which side of the table the " + std::string(object) +
         " is closer to:\n1. left side,\n2. right side,\n3. far side, \n4. close side. \n"
         "The output should be the corresponding number and the color and shape of the object in JSON format.";
}

std::string render_vlm_describe_prompt(std::string_view object) {
  return "Please tell me the details of " + std::string(object) + " in the picture with a brief sentence";
}

std::string render_reprompt(std::string_view problem) {
  return "#feedback: invalid reply, " + std::string(problem) +
         ". Answer with one JSON object containing next_action";
}

}  // namespace leanplan
