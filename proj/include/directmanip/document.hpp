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

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "directmanip/text_span.hpp"

namespace directmanip {

enum class DocumentKind { Text, Svg };

std::string_view to_string(DocumentKind kind);

// The object of interest. Immutable: every mutation yields a new value with a
// larger version. Svg content is always in canonical form.
class Document {
public:
    Document() = default;

    static Document text(std::string content);
    // Parses, assigns ids and canonicalises `source`.
    static Document svg(std::string_view source);

    DocumentKind kind() const noexcept { return kind_; }
    const std::string& content() const noexcept { return content_; }
    std::uint64_t version() const noexcept { return version_; }

    // Same kind and content bytes, ignoring version.
    bool same_content(const Document& other) const noexcept {
        return kind_ == other.kind_ && content_ == other.content_;
    }

    // New content at version()+1. Svg content must already be canonical.
    Document with_content(std::string content) const;
    Document with_version(std::uint64_t version) const;

    bool operator==(const Document&) const = default;

private:
    Document(DocumentKind kind, std::string content, std::uint64_t version)
        : kind_(kind), content_(std::move(content)), version_(version) {}

    DocumentKind kind_ = DocumentKind::Text;
    std::string content_;
    std::uint64_t version_ = 0;
};

struct SvgElementId {
    std::string id;
    auto operator<=>(const SvgElementId&) const = default;
};

struct SvgPoint {
    long x = 0;
    long y = 0;
    auto operator<=>(const SvgPoint&) const = default;
};

using ObjectRef = std::variant<TextSpan, SvgElementId, SvgPoint>;

inline bool is_span(const ObjectRef& r) { return std::holds_alternative<TextSpan>(r); }
inline bool is_element(const ObjectRef& r) { return std::holds_alternative<SvgElementId>(r); }
inline bool is_point(const ObjectRef& r) { return std::holds_alternative<SvgPoint>(r); }

std::string describe(const ObjectRef& ref);

struct Selection {
    std::vector<ObjectRef> refs;

    bool empty() const noexcept { return refs.empty(); }
    bool operator==(const Selection&) const = default;
};

enum class ChangeKind { Inserted, Replaced };

struct TextChange {
    TextSpan span;  // in the new document
    ChangeKind kind = ChangeKind::Replaced;
    bool operator==(const TextChange&) const = default;
};

struct ChangeSet {
    std::vector<TextChange> text;
    std::vector<std::string> added;
    std::vector<std::string> removed;
    std::vector<std::string> modified;

    bool empty() const noexcept {
        return text.empty() && added.empty() && removed.empty() && modified.empty();
    }
    bool operator==(const ChangeSet&) const = default;
};

// Throws InvalidSpan when `span` is out of range, reversed, or splits a
// UTF-8 sequence.
void validate_span(std::string_view content, const TextSpan& span);

Document splice_text(const Document& doc, const TextSpan& span, std::string_view replacement);

// Text: spans sorted, identical spans deduplicated, overlaps rejected.
// Svg: ids and points deduplicated in first-occurrence order; nested element
// targets rejected as overlapping.
Selection normalize_selection(const Document& doc, const Selection& selection);

// Character-granularity LCS diff. Unmatched runs in `updated` are reported,
// with runs separated only by matched non-whitespace characters coalesced.
ChangeSet diff_text(const Document& old_doc, const Document& updated);

// Id-keyed element diff over canonical svg documents.
ChangeSet diff_svg(const Document& old_doc, const Document& updated);

ChangeSet diff(const Document& old_doc, const Document& updated);

}  // namespace directmanip
