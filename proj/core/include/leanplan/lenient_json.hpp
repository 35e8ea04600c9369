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

#include <optional>
#include <string_view>

#include <nlohmann/json.hpp>

namespace leanplan {

/// Parses one JSON value starting at \p text[0] with the recovery rules needed
/// for language-model output: "#..." comment lines between members, missing or
/// trailing commas, stray characters after a string value, a raw newline
/// closing an unterminated string, and a bare "{ {" whose inner members are
/// merged into the enclosing object. Returns nullopt on failure.
std::optional<nlohmann::json> parse_lenient(std::string_view text);

/// Finds the outermost JSON object in free text (code fences and prose are
/// skipped). Tries each "{" in order. Throws Error(kNoJsonFound).
nlohmann::json extract_json_object(std::string_view text);

}  // namespace leanplan
