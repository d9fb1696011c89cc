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

#include "directmanip/engine.hpp"

#include <algorithm>
#include <map>

#include "directmanip/error.hpp"
#include "directmanip/svg.hpp"
#include "directmanip/utf8.hpp"

namespace directmanip {

namespace {

constexpr std::string_view kBlank = "<blank>";
constexpr std::string_view kSeparator = "\n\n";

EngineeredRequest make_request(std::string message, const EngineConfig& config) {
    EngineeredRequest request;
    request.messages.push_back({Role::User, std::move(message)});
    request.model = config.model;
    request.temperature = config.temperature;
    return request;
}

void require_kind(const Document& doc, DocumentKind kind, std::string_view what) {
    if (doc.kind() != kind) {
        throw Error(ErrorCode::KindMismatch, std::string(what) + " requires a " +
                                                 std::string(to_string(kind)) + " document");
    }
}

void reject_slots(const ComposedPrompt& prompt) {
    if (prompt.slot_count() > 0) {
        throw Error(ErrorCode::InvalidPrompt, "prompt still contains unfilled slots");
    }
}

std::string point_text(const SvgPoint& p) {
    return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
}

void append_locations(std::string& message, const std::vector<SvgPoint>& locations) {
    for (const auto& p : locations) {
        message += kSeparator;
        message += "Apply at location ";
        message += point_text(p);
    }
}

}  // namespace

std::string_view to_string(Role role) { return role == Role::System ? "system" : "user"; }

const std::string& EngineeredRequest::user_message() const {
    for (const auto& m : messages) {
        if (m.role == Role::User) return m.content;
    }
    throw Error(ErrorCode::InvalidPrompt, "request has no user message");
}

DelimiterAssignment allocate_delimiters(const Document& doc, std::vector<TextSpan> spans) {
    DelimiterAssignment out;
    out.reserve(spans.size());
    std::size_t n = 0;
    for (const auto& span : spans) {
        std::string token;
        for (;; ++n) {
            token = std::to_string(n) + "]";
            if (doc.content().find(token) == std::string::npos) break;
        }
        out.push_back({span, std::move(token)});
        ++n;
    }
    return out;
}

TextSpan localized_span(const Document& doc, const LocalizedTarget& target) {
    if (const auto* span = std::get_if<TextSpan>(&target)) {
        validate_span(doc.content(), *span);
        return *span;
    }
    require_kind(doc, DocumentKind::Svg, "an element target");
    const auto& id = std::get<SvgElementId>(target).id;
    return svg::element_span(svg::parse_svg(doc.content()), id).span;
}

EngineeredRequest engineer_localized(const Document& doc, const LocalizedTarget& target,
                                     std::string_view instruction, const EngineConfig& config) {
    if (utf8::trim(instruction).empty()) {
        throw Error(ErrorCode::EmptyInstruction, "localized prompt needs an instruction");
    }
    const TextSpan span = localized_span(doc, target);
    const std::string_view content = doc.content();

    std::string message;
    message.reserve(content.size() + instruction.size() + 96);
    message.append(content.substr(0, span.start));
    message.append(kBlank);
    message.append(content.substr(span.end));
    message.append(kSeparator);
    message.append(kBlank).append(": ").append(content.substr(span.start, span.length()));
    message.append(kSeparator);
    message.append("INSTRUCTION: ").append(instruction);
    message.append(kSeparator);
    message.append("Rewrite ").append(kBlank).append(". Follow INSTRUCTION");
    message.append(kSeparator);
    message.append(kBlank).append(":");
    return make_request(std::move(message), config);
}

EngineeredRequest engineer_text_refs(const Document& doc, const ComposedPrompt& prompt,
                                     const EngineConfig& config) {
    require_kind(doc, DocumentKind::Text, "the text reference template");
    reject_slots(prompt);
    std::vector<TextSpan> spans;
    for (const auto& ref : extract_nouns(prompt)) {
        const auto* span = std::get_if<TextSpan>(&ref);
        if (span == nullptr) {
            throw Error(ErrorCode::KindMismatch, "svg reference " + describe(ref) +
                                                     " in a text prompt");
        }
        validate_span(doc.content(), *span);
        if (span->empty()) throw Error(ErrorCode::InvalidSpan, "empty span referenced in prompt");
        spans.push_back(*span);
    }
    if (spans.empty()) throw Error(ErrorCode::NoObjectWords, "prompt references no text");
    std::sort(spans.begin(), spans.end());
    spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
    for (std::size_t i = 1; i < spans.size(); ++i) {
        if (spans[i - 1].overlaps(spans[i])) {
            throw Error(ErrorCode::OverlappingSelection,
                        "referenced spans " + describe(spans[i - 1]) + " and " +
                            describe(spans[i]) + " overlap");
        }
    }

    const auto delimiters = allocate_delimiters(doc, spans);
    std::map<TextSpan, std::string_view> token_of;
    for (const auto& d : delimiters) token_of.emplace(d.span, d.token);

    const std::string_view content = doc.content();
    std::string message;
    std::size_t cursor = 0;
    for (const auto& d : delimiters) {
        message.append(content.substr(cursor, d.span.start - cursor));
        message.append(d.token);
        message.append(content.substr(d.span.start, d.span.length()));
        message.append(d.token);
        cursor = d.span.end;
    }
    message.append(content.substr(cursor));
    message.append(kSeparator);
    for (const auto& segment : prompt.segments()) {
        if (const auto* lit = std::get_if<Literal>(&segment)) {
            message.append(lit->text);
        } else {
            const auto& span = std::get<TextSpan>(std::get<ObjectWord>(segment).ref);
            message.append("text delimited by ").append(token_of.at(span));
        }
    }
    message.append(kSeparator);
    message.append("Keep rest of the text identical");
    return make_request(std::move(message), config);
}

EngineeredRequest engineer_svg_refs(const Document& doc, const ComposedPrompt& prompt,
                                    const std::vector<SvgPoint>& locations,
                                    const EngineConfig& config) {
    require_kind(doc, DocumentKind::Svg, "the svg reference template");
    reject_slots(prompt);
    if (!prompt.has_object_words()) {
        throw Error(ErrorCode::NoObjectWords, "prompt references no svg objects");
    }
    const auto tree = svg::parse_svg(doc.content());
    std::string message = doc.content();
    message.append(kSeparator);
    message.append("Return modified SVG code to ");
    for (const auto& segment : prompt.segments()) {
        if (const auto* lit = std::get_if<Literal>(&segment)) {
            message.append(lit->text);
            continue;
        }
        const auto& ref = std::get<ObjectWord>(segment).ref;
        if (const auto* el = std::get_if<SvgElementId>(&ref)) {
            if (svg::find_element(tree, el->id) == nullptr) {
                throw Error(ErrorCode::UnknownElement, "no element with id \"" + el->id + "\"");
            }
            message.append("element with id \"").append(el->id).append("\"");
        } else if (const auto* pt = std::get_if<SvgPoint>(&ref)) {
            message.append(point_text(*pt));
        } else {
            throw Error(ErrorCode::KindMismatch,
                        "text span " + describe(ref) + " in an svg prompt");
        }
    }
    append_locations(message, locations);
    return make_request(std::move(message), config);
}

EngineeredRequest engineer_global(const Document& doc, const ComposedPrompt& prompt,
                                  const std::vector<SvgPoint>& locations,
                                  const EngineConfig& config) {
    reject_slots(prompt);
    if (prompt.has_object_words()) {
        throw Error(ErrorCode::InvalidPrompt,
                    "prompts with object-words use a reference template");
    }
    const auto instruction = prompt.literal_text();
    if (utf8::trim(instruction).empty()) {
        throw Error(ErrorCode::EmptyInstruction, "prompt is empty");
    }
    if (!locations.empty()) require_kind(doc, DocumentKind::Svg, "a location context");

    std::string message = doc.content();
    message.append(kSeparator);
    message.append(instruction);
    message.append(kSeparator);
    message.append("Return only the full modified ");
    message.append(doc.kind() == DocumentKind::Svg ? "SVG code" : "text");
    message.append(", nothing else");
    append_locations(message, locations);
    return make_request(std::move(message), config);
}

std::vector<ObjectRef> feedback_targets(const Selection& selection, const ComposedPrompt& prompt) {
    std::vector<ObjectRef> targets;
    auto add = [&](const ObjectRef& ref) {
        if (std::find(targets.begin(), targets.end(), ref) == targets.end()) {
            targets.push_back(ref);
        }
    };
    for (const auto& ref : selection.refs) add(ref);
    for (const auto& ref : extract_nouns(prompt)) add(ref);
    return targets;
}

}  // namespace directmanip
