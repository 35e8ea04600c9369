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
#include "leanplan/model_gateway.hpp"

namespace leanplan {

namespace {

const ObjectInstance& first_visible(std::string_view object, const SimEnv& env) {
  if (!env.scene().faced_site()) throw Error(ErrorCode::kObjectNotVisible, std::string(object));
  const ObjectInstance* o = env.primary_visible(object);
  if (o == nullptr) throw Error(ErrorCode::kObjectNotVisible, std::string(object));
  return *o;
}

}  // namespace

SideAnswer SimulatedVlm::table_side(std::string_view object, const SimEnv& env) {
  const ObjectInstance& o = first_visible(object, env);
  return {env.table_side(object), o.attribute("color"), o.attribute("shape")};
}

std::string SimulatedVlm::describe(std::string_view object, const SimEnv& env) {
  const ObjectInstance& o = first_visible(object, env);
  const Side side = env.table_side(object);
  std::string out = "a";
  for (const char* key : {"color", "shape"}) {
    const std::string v = o.attribute(key);
    if (!v.empty()) out += " " + v;
  }
  out += " " + o.name;
  const std::string category = o.attribute("category");
  if (!category.empty() && category != o.name) out += " (" + category + ")";
  out += " on the " + std::string(to_string(side)) + " side";
  return out;
}

}  // namespace leanplan
