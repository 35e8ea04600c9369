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
#include <string>
#include <string_view>
#include <vector>

#include "leanplan/scene.hpp"

namespace leanplan {

/// kLean carries a single one-line exchange under #EXAMPLE#; kFull carries
/// the four worked examples.
enum class PromptVariant { kLean, kFull };

/// Site list for the #MAP# section. Entry points are not listed.
std::string render_map_line(const SceneMap& scene);

/// Planner prompt: #CONTEXT#, #SKILL#, #OBECTIVE#, #OUTPUT#, #MAP#, #EXAMPLE#,
/// an optional #MEMORY# block and a closing "#instruction: <task>" line.
std::string render_initial_prompt(std::string_view task, const SceneMap& scene,
                                  const std::vector<std::string>& memory_hints,
                                  PromptVariant variant = PromptVariant::kLean);

/// Four characters per token.
std::size_t approx_tokens(std::string_view text);

std::string render_vlm_side_prompt(std::string_view object);
std::string render_vlm_describe_prompt(std::string_view object);

/// Status message sent after an unparseable planner reply.
std::string render_reprompt(std::string_view problem);

}  // namespace leanplan
