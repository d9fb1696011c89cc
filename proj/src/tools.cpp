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

#include "directmanip/tools.hpp"

#include <algorithm>

#include "directmanip/error.hpp"

namespace directmanip {

std::string_view to_string(ToolKind kind) {
    switch (kind) {
    case ToolKind::SelectionApplied: return "selectionApplied";
    case ToolKind::Slotted: return "slotted";
    case ToolKind::Global: return "global";
    }
    return "global";
}

Tool abstract_tool(const ComposedPrompt& prompt, bool had_selection, DocumentKind document_kind) {
    std::vector<PromptSegment> segments;
    std::size_t next_slot = 0;
    for (const auto& segment : prompt.segments()) {
        if (std::holds_alternative<ObjectWord>(segment)) segments.push_back(Slot{next_slot++});
        else segments.push_back(segment);
    }
    Tool tool;
    tool.label = tool_label(prompt);
    tool.template_prompt = ComposedPrompt(std::move(segments));
    tool.arity = tool.template_prompt.slot_count();
    tool.kind = tool.arity > 0    ? ToolKind::Slotted
                : had_selection ? ToolKind::SelectionApplied
                                : ToolKind::Global;
    tool.document_kind = document_kind;
    tool.created_at = std::chrono::system_clock::now();
    return tool;
}

namespace {

void check_noun_kind(const Tool& tool, const ObjectRef& noun, const Document& doc) {
    const bool text_noun = is_span(noun);
    if (doc.kind() != tool.document_kind ||
        text_noun != (tool.document_kind == DocumentKind::Text)) {
        throw Error(ErrorCode::NounKindMismatch,
                    "noun " + describe(noun) + " does not fit a " +
                        std::string(to_string(tool.document_kind)) + " tool");
    }
}

}  // namespace

ToolInvocation instantiate_tool(const Tool& tool, std::span<const ObjectRef> nouns,
                                const Document& doc) {
    for (const auto& noun : nouns) check_noun_kind(tool, noun, doc);

    switch (tool.kind) {
    case ToolKind::Global:
        if (!nouns.empty()) throw Error(ErrorCode::ArityMismatch, "global tools take no nouns");
        return {tool.template_prompt, {}};
    case ToolKind::SelectionApplied:
        if (nouns.empty()) {
            throw Error(ErrorCode::ArityMismatch, "selection tools need at least one noun");
        }
        return {tool.template_prompt, Selection{{nouns.begin(), nouns.end()}}};
    case ToolKind::Slotted:
        break;
    }

    if (nouns.size() != tool.arity) {
        throw Error(ErrorCode::ArityMismatch, "tool \"" + tool.label + "\" takes " +
                                                  std::to_string(tool.arity) + " nouns, got " +
                                                  std::to_string(nouns.size()));
    }
    std::vector<PromptSegment> segments;
    for (const auto& segment : tool.template_prompt.segments()) {
        if (const auto* slot = std::get_if<Slot>(&segment)) {
            const auto& noun = nouns[slot->index];
            segments.push_back(ObjectWord{noun, default_display(doc, noun)});
        } else {
            segments.push_back(segment);
        }
    }
    return {ComposedPrompt(std::move(segments)), {}};
}

std::optional<std::string> Toolbar::add(Tool tool) {
    const auto duplicate = std::find_if(tools_.begin(), tools_.end(),
                                        [&](const Tool& t) { return t.same_definition(tool); });
    if (duplicate != tools_.end()) return std::nullopt;
    tool.id = "t" + std::to_string(next_id_++);
    tools_.push_back(std::move(tool));
    return tools_.back().id;
}

const Tool* Toolbar::find(std::string_view id) const {
    for (const auto& tool : tools_) {
        if (tool.id == id) return &tool;
    }
    return nullptr;
}

}  // namespace directmanip
