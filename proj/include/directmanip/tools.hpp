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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "directmanip/document.hpp"
#include "directmanip/prompt.hpp"

namespace directmanip {

enum class ToolKind { SelectionApplied, Slotted, Global };

std::string_view to_string(ToolKind kind);

// A previously executed prompt, reusable from the toolbar.
struct Tool {
    std::string id;
    std::string label;
    ComposedPrompt template_prompt;  // object-words replaced by slots
    ToolKind kind = ToolKind::Global;
    std::size_t arity = 0;
    DocumentKind document_kind = DocumentKind::Text;
    std::chrono::system_clock::time_point created_at;

    // Identity used to suppress duplicate registrations.
    bool same_definition(const Tool& other) const {
        return label == other.label && kind == other.kind &&
               template_prompt == other.template_prompt &&
               document_kind == other.document_kind;
    }
};

// Object-words become Slot(0..k-1) in order. Kind: slotted when the prompt had
// object-words, otherwise selection-applied when a selection was active,
// otherwise global. The id is left empty for the toolbar to assign.
Tool abstract_tool(const ComposedPrompt& prompt, bool had_selection, DocumentKind document_kind);

struct ToolInvocation {
    ComposedPrompt prompt;
    Selection selection;
};

// Slotted tools fill their slots with `nouns`; selection-applied tools use
// `nouns` as the selection; global tools take no nouns. Throws ArityMismatch
// or NounKindMismatch.
ToolInvocation instantiate_tool(const Tool& tool, std::span<const ObjectRef> nouns,
                                const Document& doc);

// Append-ordered tool registry of one session.
class Toolbar {
public:
    // Registers `tool` unless an identical definition exists. Returns the id
    // of the new tool, or nothing when it was a duplicate.
    std::optional<std::string> add(Tool tool);

    const Tool* find(std::string_view id) const;
    const std::vector<Tool>& tools() const noexcept { return tools_; }
    std::size_t size() const noexcept { return tools_.size(); }

private:
    std::vector<Tool> tools_;
    std::size_t next_id_ = 0;
};

}  // namespace directmanip
