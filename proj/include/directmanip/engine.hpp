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

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "directmanip/document.hpp"
#include "directmanip/prompt.hpp"

namespace directmanip {

enum class Role { System, User };

std::string_view to_string(Role role);

struct ChatMessage {
    Role role = Role::User;
    std::string content;
    bool operator==(const ChatMessage&) const = default;
};

struct EngineConfig {
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;
};

// The chat request actually sent to the model.
struct EngineeredRequest {
    std::vector<ChatMessage> messages;
    std::string model = "gpt-3.5-turbo";
    double temperature = 0.0;

    // Content of the single user message.
    const std::string& user_message() const;
    bool operator==(const EngineeredRequest&) const = default;
};

struct Delimiter {
    TextSpan span;
    std::string token;
};

using DelimiterAssignment = std::vector<Delimiter>;

// Tokens "{n}]" in span order, n strictly increasing and skipping any token
// that already occurs in the document.
DelimiterAssignment allocate_delimiters(const Document& doc, std::vector<TextSpan> spans);

using LocalizedTarget = std::variant<TextSpan, SvgElementId>;

// Blank-out template: the target is replaced by "<blank>" in context and the
// model is asked to rewrite only that part.
EngineeredRequest engineer_localized(const Document& doc, const LocalizedTarget& target,
                                     std::string_view instruction,
                                     const EngineConfig& config = {});

// The byte range a localized target occupies in `doc.content()`.
TextSpan localized_span(const Document& doc, const LocalizedTarget& target);

// Delimiter template for prompts that reference text spans.
EngineeredRequest engineer_text_refs(const Document& doc, const ComposedPrompt& prompt,
                                     const EngineConfig& config = {});

// Id template for prompts that reference svg elements or points; each entry of
// `locations` appends an "Apply at location (x, y)" context line.
EngineeredRequest engineer_svg_refs(const Document& doc, const ComposedPrompt& prompt,
                                    const std::vector<SvgPoint>& locations = {},
                                    const EngineConfig& config = {});

// Whole-document template for prompts without object-words.
EngineeredRequest engineer_global(const Document& doc, const ComposedPrompt& prompt,
                                  const std::vector<SvgPoint>& locations = {},
                                  const EngineConfig& config = {});

// Objects that pulse while the request is in flight: the selection followed by
// the prompt's nouns, without duplicates.
std::vector<ObjectRef> feedback_targets(const Selection& selection, const ComposedPrompt& prompt);

}  // namespace directmanip
