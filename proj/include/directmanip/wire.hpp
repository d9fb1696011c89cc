//*****************************************************************************
// Copyright 2026 The directmanip Authors
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
//*****************************************************************************

#pragma once

#include <chrono>
#include <string>

#include <json.hpp>

#include "directmanip/document.hpp"
#include "directmanip/orchestrator.hpp"
#include "directmanip/prompt.hpp"
#include "directmanip/tools.hpp"

// JSON forms used by the HTTP service.
//   spans     {"span": [start, end]}
//   elements  {"id": "c0"}
//   points    {"x": 150, "y": 140}
//   segments  {"literal": "..."} | {"object": <ref>, "display": "..."} | {"slot": 0}
namespace directmanip::wire {

using nlohmann::json;

json to_json(const ObjectRef& ref);
ObjectRef ref_from_json(const json& j);

json to_json(const Selection& selection);
Selection selection_from_json(const json& j);

json to_json(const ComposedPrompt& prompt);
// Object-words without a "display" get default_display(doc, ref).
ComposedPrompt prompt_from_json(const json& j, const Document& doc);

json to_json(const Document& doc);
json to_json(const ChangeSet& changes, DocumentKind kind);
json to_json(const Tool& tool);
json to_json(const OperationResult& result, const std::vector<Tool>& toolbar);

std::string iso8601(std::chrono::system_clock::time_point t);

}  // namespace directmanip::wire
