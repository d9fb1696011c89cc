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

namespace directmanip {

struct Literal {
    std::string text;
    bool operator==(const Literal&) const = default;
};

// An object dropped into the prompt field.
struct ObjectWord {
    ObjectRef ref;
    std::string display;
    bool operator==(const ObjectWord&) const = default;
};

// A noun placeholder in an abstracted tool.
struct Slot {
    std::size_t index = 0;
    bool operator==(const Slot&) const = default;
};

using PromptSegment = std::variant<Literal, ObjectWord, Slot>;

// The user-facing prompt. Construction drops empty literals and merges
// adjacent ones; object-word displays must be non-empty and slot indices
// contiguous from 0.
class ComposedPrompt {
public:
    ComposedPrompt() = default;
    explicit ComposedPrompt(std::vector<PromptSegment> segments);
    static ComposedPrompt literal(std::string text);

    const std::vector<PromptSegment>& segments() const noexcept { return segments_; }
    bool empty() const noexcept { return segments_.empty(); }

    std::size_t object_word_count() const;
    std::size_t slot_count() const;
    bool has_object_words() const { return object_word_count() > 0; }

    // Concatenated literal text only.
    std::string literal_text() const;

    bool operator==(const ComposedPrompt&) const = default;

private:
    std::vector<PromptSegment> segments_;
};

// Where a dragged object lands: `segment` indexes a Literal (or equals
// segments().size() to append), `offset` is a byte offset inside it. With
// `onto_word`, the whitespace-delimited word containing `offset` is replaced.
struct PromptPosition {
    std::size_t segment = 0;
    std::size_t offset = 0;
    bool onto_word = false;
};

ComposedPrompt insert_object_word(const ComposedPrompt& prompt, const PromptPosition& position,
                                  ObjectRef ref, std::string display);

// Convenience for the common "drop onto this word" gesture: targets the first
// literal word equal to `word`.
ComposedPrompt drop_onto_word(const ComposedPrompt& prompt, std::string_view word, ObjectRef ref,
                              std::string display);

std::vector<ObjectRef> extract_nouns(const ComposedPrompt& prompt);

// Literals with each object-word or slot shown as "?", whitespace collapsed.
std::string tool_label(const ComposedPrompt& prompt);

// Short chip text for a reference: selected text (20 code points max),
// "tag#id" for elements, "(x, y)" for points.
std::string default_display(const Document& doc, const ObjectRef& ref);

}  // namespace directmanip
