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

#include "directmanip/prompt.hpp"

#include <algorithm>

#include "directmanip/error.hpp"
#include "directmanip/svg.hpp"
#include "directmanip/utf8.hpp"

namespace directmanip {

namespace {

template <typename T>
std::size_t count_of(const std::vector<PromptSegment>& segments) {
    return static_cast<std::size_t>(std::count_if(
        segments.begin(), segments.end(),
        [](const PromptSegment& s) { return std::holds_alternative<T>(s); }));
}

bool ends_with_space(std::string_view s) { return !s.empty() && utf8::is_space(s.back()); }
bool starts_with_space(std::string_view s) { return !s.empty() && utf8::is_space(s.front()); }

}  // namespace

ComposedPrompt::ComposedPrompt(std::vector<PromptSegment> segments) {
    std::vector<bool> slot_seen;
    for (auto& segment : segments) {
        if (auto* lit = std::get_if<Literal>(&segment)) {
            if (lit->text.empty()) continue;
            if (!segments_.empty()) {
                if (auto* prev = std::get_if<Literal>(&segments_.back())) {
                    prev->text += lit->text;
                    continue;
                }
            }
        } else if (const auto* word = std::get_if<ObjectWord>(&segment)) {
            if (word->display.empty()) {
                throw Error(ErrorCode::InvalidPrompt, "object-word with empty display text");
            }
        } else {
            const auto index = std::get<Slot>(segment).index;
            if (index >= segments.size()) {
                throw Error(ErrorCode::InvalidPrompt, "slot index out of range");
            }
            if (slot_seen.size() <= index) slot_seen.resize(index + 1, false);
            if (slot_seen[index]) throw Error(ErrorCode::InvalidPrompt, "duplicate slot index");
            slot_seen[index] = true;
        }
        segments_.push_back(std::move(segment));
    }
    if (std::find(slot_seen.begin(), slot_seen.end(), false) != slot_seen.end()) {
        throw Error(ErrorCode::InvalidPrompt, "slot indices are not contiguous from 0");
    }
}

ComposedPrompt ComposedPrompt::literal(std::string text) {
    return ComposedPrompt({Literal{std::move(text)}});
}

std::size_t ComposedPrompt::object_word_count() const { return count_of<ObjectWord>(segments_); }
std::size_t ComposedPrompt::slot_count() const { return count_of<Slot>(segments_); }

std::string ComposedPrompt::literal_text() const {
    std::string out;
    for (const auto& segment : segments_) {
        if (const auto* lit = std::get_if<Literal>(&segment)) out += lit->text;
    }
    return out;
}

ComposedPrompt insert_object_word(const ComposedPrompt& prompt, const PromptPosition& position,
                                  ObjectRef ref, std::string display) {
    const auto& segments = prompt.segments();
    ObjectWord word{std::move(ref), std::move(display)};
    std::vector<PromptSegment> out(segments.begin(), segments.end());

    if (position.segment == segments.size()) {
        if (position.offset != 0 || position.onto_word) {
            throw Error(ErrorCode::InvalidPosition, "append position must be offset 0");
        }
        if (!out.empty()) {
            auto* last = std::get_if<Literal>(&out.back());
            if (last == nullptr) out.push_back(Literal{" "});
            else if (!ends_with_space(last->text)) last->text += ' ';
        }
        out.push_back(std::move(word));
        return ComposedPrompt(std::move(out));
    }

    if (position.segment > segments.size()) {
        throw Error(ErrorCode::InvalidPosition, "segment index out of range");
    }
    const auto* lit = std::get_if<Literal>(&segments[position.segment]);
    if (lit == nullptr) throw Error(ErrorCode::InvalidPosition, "position is not inside a literal");
    const std::string_view text = lit->text;
    if (!utf8::is_boundary(text, position.offset)) {
        throw Error(ErrorCode::InvalidPosition, "offset is out of range or splits a character");
    }

    std::size_t cut_begin = position.offset;
    std::size_t cut_end = position.offset;
    if (position.onto_word) {
        const bool inside = cut_begin < text.size() && !utf8::is_space(text[cut_begin]);
        const bool after = cut_begin > 0 && !utf8::is_space(text[cut_begin - 1]);
        if (!inside && !after) throw Error(ErrorCode::InvalidPosition, "no word at offset");
        if (!inside) --cut_begin;
        while (cut_begin > 0 && !utf8::is_space(text[cut_begin - 1])) --cut_begin;
        while (cut_end < text.size() && !utf8::is_space(text[cut_end])) ++cut_end;
    }

    std::string left(text.substr(0, cut_begin));
    std::string right(text.substr(cut_end));
    const bool has_prev = position.segment > 0;
    const bool has_next = position.segment + 1 < segments.size();
    if (!left.empty() ? !ends_with_space(left) : has_prev) left += ' ';
    if (!right.empty() ? !starts_with_space(right) : has_next) right.insert(0, 1, ' ');

    out.erase(out.begin() + static_cast<std::ptrdiff_t>(position.segment));
    std::vector<PromptSegment> middle{Literal{std::move(left)}, std::move(word),
                                      Literal{std::move(right)}};
    out.insert(out.begin() + static_cast<std::ptrdiff_t>(position.segment),
               std::make_move_iterator(middle.begin()), std::make_move_iterator(middle.end()));
    return ComposedPrompt(std::move(out));
}

ComposedPrompt drop_onto_word(const ComposedPrompt& prompt, std::string_view word, ObjectRef ref,
                              std::string display) {
    const auto& segments = prompt.segments();
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto* lit = std::get_if<Literal>(&segments[s]);
        if (lit == nullptr) continue;
        const std::string_view text = lit->text;
        std::size_t i = 0;
        while (i < text.size()) {
            while (i < text.size() && utf8::is_space(text[i])) ++i;
            const std::size_t begin = i;
            while (i < text.size() && !utf8::is_space(text[i])) ++i;
            if (i > begin && text.substr(begin, i - begin) == word) {
                return insert_object_word(prompt, {s, begin, true}, std::move(ref),
                                          std::move(display));
            }
        }
    }
    throw Error(ErrorCode::InvalidPosition, "word \"" + std::string(word) + "\" not in prompt");
}

std::vector<ObjectRef> extract_nouns(const ComposedPrompt& prompt) {
    std::vector<ObjectRef> nouns;
    for (const auto& segment : prompt.segments()) {
        if (const auto* word = std::get_if<ObjectWord>(&segment)) nouns.push_back(word->ref);
    }
    return nouns;
}

std::string tool_label(const ComposedPrompt& prompt) {
    std::string raw;
    for (const auto& segment : prompt.segments()) {
        if (const auto* lit = std::get_if<Literal>(&segment)) raw += lit->text;
        else raw += '?';
    }
    std::string label;
    bool pending_space = false;
    for (const char c : raw) {
        if (utf8::is_space(c)) {
            pending_space = !label.empty();
            continue;
        }
        if (pending_space) label += ' ';
        pending_space = false;
        label += c;
    }
    return label;
}

std::string default_display(const Document& doc, const ObjectRef& ref) {
    if (const auto* span = std::get_if<TextSpan>(&ref)) {
        validate_span(doc.content(), *span);
        auto shown = utf8::truncate(
            std::string_view(doc.content()).substr(span->start, span->length()), 20);
        return shown.empty() ? describe(ref) : shown;
    }
    if (const auto* el = std::get_if<SvgElementId>(&ref)) {
        if (doc.kind() == DocumentKind::Svg) {
            const auto tree = svg::parse_svg(doc.content());
            if (const auto* found = svg::find_element(tree, el->id)) {
                return found->tag + "#" + el->id;
            }
        }
        throw Error(ErrorCode::UnknownElement, "no element with id \"" + el->id + "\"");
    }
    return describe(ref);
}

}  // namespace directmanip
