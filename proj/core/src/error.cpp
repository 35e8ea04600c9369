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

#include "leanplan/error.hpp"

namespace leanplan {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownSite: return "UnknownSite";
    case ErrorCode::kUnknownObject: return "UnknownObject";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kUnreachable: return "Unreachable";
    case ErrorCode::kNotFacingSite: return "NotFacingSite";
    case ErrorCode::kObjectNotVisible: return "ObjectNotVisible";
    case ErrorCode::kNothingHeld: return "NothingHeld";
    case ErrorCode::kInvalidPerturbation: return "InvalidPerturbation";
    case ErrorCode::kInvalidScene: return "InvalidScene";
    case ErrorCode::kUnknownSkill: return "UnknownSkill";
    case ErrorCode::kMalformedCall: return "MalformedCall";
    case ErrorCode::kNoJsonFound: return "NoJsonFound";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kMissingNextAction: return "MissingNextAction";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kBadStatus: return "BadStatus";
    case ErrorCode::kScriptExhausted: return "ScriptExhausted";
    case ErrorCode::kScriptMismatch: return "ScriptMismatch";
    case ErrorCode::kParseFail: return "ParseFail";
    case ErrorCode::kImpossibleTask: return "ImpossibleTask";
    case ErrorCode::kPreconditionBypassed: return "PreconditionBypassed";
    case ErrorCode::kPlannerProtocolError: return "PlannerProtocolError";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

}  // namespace leanplan
