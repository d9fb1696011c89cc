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

#include "directmanip/document.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "directmanip/error.hpp"
#include "directmanip/svg.hpp"
#include "directmanip/utf8.hpp"

namespace directmanip {

std::string_view to_string(DocumentKind kind) {
    return kind == DocumentKind::Text ? "text" : "svg";
}

Document Document::text(std::string content) {
    return Document(DocumentKind::Text, std::move(content), 0);
}

Document Document::svg(std::string_view source) {
    return Document(DocumentKind::Svg, svg::canonicalize(source), 0);
}

Document Document::with_content(std::string content) const {
    if (kind_ == DocumentKind::Svg && !svg::is_canonical(content)) {
        throw Error(ErrorCode::NotCanonical, "svg content is not in canonical form");
    }
    return Document(kind_, std::move(content), version_ + 1);
}

Document Document::with_version(std::uint64_t version) const {
    return Document(kind_, content_, version);
}

std::string describe(const ObjectRef& ref) {
    if (const auto* span = std::get_if<TextSpan>(&ref)) {
        return "[" + std::to_string(span->start) + ", " + std::to_string(span->end) + ")";
    }
    if (const auto* el = std::get_if<SvgElementId>(&ref)) return "#" + el->id;
    const auto& pt = std::get<SvgPoint>(ref);
    return "(" + std::to_string(pt.x) + ", " + std::to_string(pt.y) + ")";
}

void validate_span(std::string_view content, const TextSpan& span) {
    if (span.start > span.end || span.end > content.size()) {
        throw Error(ErrorCode::InvalidSpan, "span " + describe(span) + " out of bounds for " +
                                                std::to_string(content.size()) + " bytes");
    }
    if (!utf8::is_boundary(content, span.start) || !utf8::is_boundary(content, span.end)) {
        throw Error(ErrorCode::InvalidSpan,
                    "span " + describe(span) + " is not on a character boundary");
    }
}

Document splice_text(const Document& doc, const TextSpan& span, std::string_view replacement) {
    validate_span(doc.content(), span);
    std::string out;
    out.reserve(doc.content().size() - span.length() + replacement.size());
    out.append(doc.content(), 0, span.start);
    out.append(replacement);
    out.append(doc.content(), span.end);
    return doc.with_content(std::move(out));
}

Selection normalize_selection(const Document& doc, const Selection& selection) {
    Selection out;
    if (doc.kind() == DocumentKind::Text) {
        std::vector<TextSpan> spans;
        for (const auto& ref : selection.refs) {
            const auto* span = std::get_if<TextSpan>(&ref);
            if (span == nullptr) {
                throw Error(ErrorCode::KindMismatch,
                            "svg reference " + describe(ref) + " in a text selection");
            }
            validate_span(doc.content(), *span);
            if (span->empty()) throw Error(ErrorCode::InvalidSpan, "empty span in selection");
            spans.push_back(*span);
        }
        std::sort(spans.begin(), spans.end());
        spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
        for (std::size_t i = 1; i < spans.size(); ++i) {
            if (spans[i - 1].overlaps(spans[i])) {
                throw Error(ErrorCode::OverlappingSelection,
                            "spans " + describe(spans[i - 1]) + " and " + describe(spans[i]) +
                                " overlap");
            }
        }
        out.refs.assign(spans.begin(), spans.end());
        return out;
    }

    const auto serialized = svg::serialize_with_spans(svg::parse_svg(doc.content()));
    std::map<std::string, TextSpan, std::less<>> spans_by_id;
    for (const auto& es : serialized.spans) spans_by_id.emplace(es.id, es.span);

    std::set<std::string, std::less<>> seen_ids;
    std::set<SvgPoint> seen_points;
    std::vector<std::pair<std::string, TextSpan>> targets;
    for (const auto& ref : selection.refs) {
        if (is_span(ref)) {
            throw Error(ErrorCode::KindMismatch,
                        "text span " + describe(ref) + " in an svg selection");
        }
        if (const auto* el = std::get_if<SvgElementId>(&ref)) {
            const auto found = spans_by_id.find(el->id);
            if (found == spans_by_id.end()) {
                throw Error(ErrorCode::UnknownElement, "no element with id \"" + el->id + "\"");
            }
            if (!seen_ids.insert(el->id).second) continue;
            for (const auto& [other_id, other_span] : targets) {
                if (other_span.overlaps(found->second)) {
                    throw Error(ErrorCode::OverlappingSelection,
                                "elements \"" + other_id + "\" and \"" + el->id + "\" are nested");
                }
            }
            targets.emplace_back(el->id, found->second);
        } else if (!seen_points.insert(std::get<SvgPoint>(ref)).second) {
            continue;
        }
        out.refs.push_back(ref);
    }
    return out;
}

namespace {

enum class Op : unsigned char { Match, Delete, Insert };

// Cells above this count are not aligned; the whole middle is one change.
constexpr std::size_t kMaxCells = 400'000'000;

std::vector<Op> align(const std::vector<char32_t>& a, std::size_t a_begin, std::size_t a_end,
                      const std::vector<char32_t>& b, std::size_t b_begin, std::size_t b_end) {
    const std::size_t n = a_end - a_begin;
    const std::size_t m = b_end - b_begin;
    std::vector<Op> ops;
    ops.reserve(n + m);
    if (n == 0 || m == 0 || n * m > kMaxCells) {
        ops.insert(ops.end(), n, Op::Delete);
        ops.insert(ops.end(), m, Op::Insert);
        return ops;
    }

    // Suffix LCS lengths, two rows at a time; `prefer_delete` records the
    // traceback choice at mismatching cells.
    std::vector<std::uint32_t> next(m + 1, 0);
    std::vector<std::uint32_t> row(m + 1, 0);
    std::vector<bool> prefer_delete(n * m);
    for (std::size_t i = n; i-- > 0;) {
        row[m] = 0;
        for (std::size_t j = m; j-- > 0;) {
            if (a[a_begin + i] == b[b_begin + j]) {
                row[j] = next[j + 1] + 1;
            } else {
                const bool del = next[j] >= row[j + 1];
                prefer_delete[i * m + j] = del;
                row[j] = del ? next[j] : row[j + 1];
            }
        }
        std::swap(row, next);
    }

    std::size_t i = 0;
    std::size_t j = 0;
    while (i < n && j < m) {
        if (a[a_begin + i] == b[b_begin + j]) {
            ops.push_back(Op::Match);
            ++i;
            ++j;
        } else if (prefer_delete[i * m + j]) {
            ops.push_back(Op::Delete);
            ++i;
        } else {
            ops.push_back(Op::Insert);
            ++j;
        }
    }
    ops.insert(ops.end(), n - i, Op::Delete);
    ops.insert(ops.end(), m - j, Op::Insert);
    return ops;
}

bool is_space_cp(char32_t c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
           c == 0xA0;
}

}  // namespace

ChangeSet diff_text(const Document& old_doc, const Document& updated) {
    if (old_doc.kind() != DocumentKind::Text || updated.kind() != DocumentKind::Text) {
        throw Error(ErrorCode::KindMismatch, "diff_text requires two text documents");
    }
    ChangeSet changes;
    if (old_doc.content() == updated.content()) return changes;

    const auto a = utf8::decode(old_doc.content());
    const auto b = utf8::decode(updated.content());
    const auto b_offsets = utf8::code_point_offsets(updated.content());

    std::size_t prefix = 0;
    while (prefix < a.size() && prefix < b.size() && a[prefix] == b[prefix]) ++prefix;
    std::size_t suffix = 0;
    while (suffix < a.size() - prefix && suffix < b.size() - prefix &&
           a[a.size() - 1 - suffix] == b[b.size() - 1 - suffix]) {
        ++suffix;
    }

    const auto ops = align(a, prefix, a.size() - suffix, b, prefix, b.size() - suffix);

    // Walk the alignment, growing a pending span over inserted code points.
    // Matched non-space code points between two insertions stay inside the
    // span; a matched space closes it.
    struct Pending {
        std::size_t start = 0;  // code point indices in b
        std::size_t end = 0;
        bool replaced = false;
    };
    std::optional<Pending> pending;
    bool deleted_since_match = false;
    std::size_t j = prefix;

    auto flush = [&] {
        if (!pending) return;
        changes.text.push_back({{b_offsets[pending->start], b_offsets[pending->end]},
                                pending->replaced ? ChangeKind::Replaced : ChangeKind::Inserted});
        pending.reset();
    };

    for (const Op op : ops) {
        switch (op) {
        case Op::Match:
            if (pending && is_space_cp(b[j])) flush();
            deleted_since_match = false;
            ++j;
            break;
        case Op::Delete:
            deleted_since_match = true;
            if (pending) pending->replaced = true;
            break;
        case Op::Insert:
            if (pending) pending->end = j + 1;
            else pending = Pending{j, j + 1, false};
            if (deleted_since_match) pending->replaced = true;
            ++j;
            break;
        }
    }
    flush();
    return changes;
}

ChangeSet diff_svg(const Document& old_doc, const Document& updated) {
    if (old_doc.kind() != DocumentKind::Svg || updated.kind() != DocumentKind::Svg) {
        throw Error(ErrorCode::KindMismatch, "diff_svg requires two svg documents");
    }
    if (!svg::is_canonical(old_doc.content()) || !svg::is_canonical(updated.content())) {
        throw Error(ErrorCode::NotCanonical, "diff_svg requires canonical svg documents");
    }
    ChangeSet changes;
    if (old_doc.content() == updated.content()) return changes;

    auto markup_by_id = [](const std::string& content) {
        const auto serialized = svg::serialize_with_spans(svg::parse_svg(content));
        std::vector<std::pair<std::string, std::string_view>> out;
        const std::string_view text(content);
        for (const auto& es : serialized.spans) {
            out.emplace_back(es.id, text.substr(es.span.start, es.span.length()));
        }
        return out;
    };
    const auto before = markup_by_id(old_doc.content());
    const auto after = markup_by_id(updated.content());
    const std::map<std::string_view, std::string_view> before_map(before.begin(), before.end());
    const std::map<std::string_view, std::string_view> after_map(after.begin(), after.end());

    for (const auto& [id, markup] : after) {
        const auto found = before_map.find(id);
        if (found == before_map.end()) changes.added.push_back(id);
        else if (found->second != markup) changes.modified.push_back(id);
    }
    for (const auto& [id, markup] : before) {
        if (after_map.find(id) == after_map.end()) changes.removed.push_back(id);
    }
    return changes;
}

ChangeSet diff(const Document& old_doc, const Document& updated) {
    if (old_doc.kind() == DocumentKind::Svg) return diff_svg(old_doc, updated);
    return diff_text(old_doc, updated);
}

}  // namespace directmanip
