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

#include "directmanip/wire.hpp"

#include <ctime>

#include "directmanip/error.hpp"

namespace directmanip::wire {

namespace {

[[noreturn]] void bad(const std::string& message) {
    throw Error(ErrorCode::InvalidPrompt, message);
}

std::size_t offset_value(const json& j) {
    if (!j.is_number_integer() || j.get<long long>() < 0) bad("span offsets must be non-negative integers");
    return j.get<std::size_t>();
}

long coordinate(const json& j) {
    if (!j.is_number()) bad("point coordinates must be numbers");
    if (j.is_number_float()) return static_cast<long>(std::lround(j.get<double>()));
    return j.get<long>();
}

}  // namespace

json to_json(const ObjectRef& ref) {
    if (const auto* span = std::get_if<TextSpan>(&ref)) {
        return {{"span", {span->start, span->end}}};
    }
    if (const auto* el = std::get_if<SvgElementId>(&ref)) return {{"id", el->id}};
    const auto& pt = std::get<SvgPoint>(ref);
    return {{"x", pt.x}, {"y", pt.y}};
}

ObjectRef ref_from_json(const json& j) {
    if (!j.is_object()) bad("reference must be an object");
    if (j.contains("span")) {
        const auto& span = j["span"];
        if (!span.is_array() || span.size() != 2) bad("span must be [start, end]");
        return TextSpan{offset_value(span[0]), offset_value(span[1])};
    }
    if (j.contains("id")) {
        if (!j["id"].is_string()) bad("element id must be a string");
        return SvgElementId{j["id"].get<std::string>()};
    }
    if (j.contains("x") && j.contains("y")) return SvgPoint{coordinate(j["x"]), coordinate(j["y"])};
    bad("reference needs \"span\", \"id\" or \"x\"/\"y\"");
}

json to_json(const Selection& selection) {
    json out = json::array();
    for (const auto& ref : selection.refs) out.push_back(to_json(ref));
    return out;
}

Selection selection_from_json(const json& j) {
    Selection out;
    if (j.is_null()) return out;
    if (!j.is_array()) bad("selection must be an array");
    for (const auto& item : j) out.refs.push_back(ref_from_json(item));
    return out;
}

json to_json(const ComposedPrompt& prompt) {
    json out = json::array();
    for (const auto& segment : prompt.segments()) {
        if (const auto* lit = std::get_if<Literal>(&segment)) {
            out.push_back({{"literal", lit->text}});
        } else if (const auto* word = std::get_if<ObjectWord>(&segment)) {
            out.push_back({{"object", to_json(word->ref)}, {"display", word->display}});
        } else {
            out.push_back({{"slot", std::get<Slot>(segment).index}});
        }
    }
    return out;
}

ComposedPrompt prompt_from_json(const json& j, const Document& doc) {
    if (j.is_string()) return ComposedPrompt::literal(j.get<std::string>());
    if (!j.is_array()) bad("segments must be an array");
    std::vector<PromptSegment> segments;
    for (const auto& item : j) {
        if (!item.is_object()) bad("segment must be an object");
        if (item.contains("literal")) {
            if (!item["literal"].is_string()) bad("literal must be a string");
            segments.push_back(Literal{item["literal"].get<std::string>()});
        } else if (item.contains("object")) {
            auto ref = ref_from_json(item["object"]);
            std::string display;
            if (item.contains("display") && item["display"].is_string()) {
                display = item["display"].get<std::string>();
            }
            if (display.empty()) display = default_display(doc, ref);
            segments.push_back(ObjectWord{std::move(ref), std::move(display)});
        } else if (item.contains("slot")) {
            segments.push_back(Slot{offset_value(item["slot"])});
        } else {
            bad("segment needs \"literal\", \"object\" or \"slot\"");
        }
    }
    return ComposedPrompt(std::move(segments));
}

json to_json(const Document& doc) {
    return {{"kind", to_string(doc.kind())}, {"content", doc.content()}, {"version", doc.version()}};
}

json to_json(const ChangeSet& changes, DocumentKind kind) {
    if (kind == DocumentKind::Text) {
        json spans = json::array();
        for (const auto& c : changes.text) {
            spans.push_back({{"span", {c.span.start, c.span.end}},
                             {"kind", c.kind == ChangeKind::Inserted ? "inserted" : "replaced"}});
        }
        return {{"spans", std::move(spans)}};
    }
    return {{"added", changes.added}, {"removed", changes.removed}, {"modified", changes.modified}};
}

json to_json(const Tool& tool) {
    return {{"id", tool.id},
            {"label", tool.label},
            {"kind", to_string(tool.kind)},
            {"arity", tool.arity},
            {"documentKind", to_string(tool.document_kind)},
            {"template", to_json(tool.template_prompt)},
            {"createdAt", iso8601(tool.created_at)}};
}

json to_json(const OperationResult& result, const std::vector<Tool>& toolbar) {
    json created = nullptr;
    if (result.created_tool_id) {
        for (const auto& tool : toolbar) {
            if (tool.id == *result.created_tool_id) created = to_json(tool);
        }
    }
    json statuses = json::array();
    for (const auto& s : result.per_target_status) {
        json entry = {{"ok", s.ok}};
        entry["ref"] = s.ref ? to_json(*s.ref) : json(nullptr);
        if (!s.ok) {
            entry["error"] = s.code ? std::string(to_string(*s.code)) : std::string("Error");
            entry["message"] = s.error;
        }
        statuses.push_back(std::move(entry));
    }
    return {{"kind", to_string(result.kind)},
            {"document", to_json(result.document)},
            {"changes", to_json(result.changes, result.document.kind())},
            {"createdTool", std::move(created)},
            {"perTargetStatus", std::move(statuses)},
            {"elapsedMs", result.elapsed.count()}};
}

std::string iso8601(std::chrono::system_clock::time_point t) {
    const auto secs = std::chrono::time_point_cast<std::chrono::seconds>(t);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t - secs).count();
    const std::time_t tt = std::chrono::system_clock::to_time_t(secs);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
    char out[40];
    std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
    return out;
}

}  // namespace directmanip::wire
