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

#include "directmanip/orchestrator.hpp"

#include <algorithm>
#include <future>
#include <map>
#include <set>

#include "directmanip/svg.hpp"
#include "directmanip/utf8.hpp"

namespace directmanip {

std::string_view to_string(OperationKind kind) {
    switch (kind) {
    case OperationKind::Localized: return "localized";
    case OperationKind::TextRefs: return "textRefs";
    case OperationKind::SvgRefs: return "svgRefs";
    case OperationKind::Global: return "global";
    case OperationKind::ToolInvocation: return "toolInvocation";
    }
    return "global";
}

OperationKind choose_operation_kind(const Selection& selection, const ComposedPrompt& prompt,
                                    DocumentKind doc_kind) {
    const bool has_targets = std::any_of(selection.refs.begin(), selection.refs.end(),
                                         [](const ObjectRef& r) { return !is_point(r); });
    const bool has_points = std::any_of(selection.refs.begin(), selection.refs.end(), is_point);
    if (has_targets && has_points) {
        throw Error(ErrorCode::MixedSelection,
                    "a selection cannot mix locations with objects to rewrite");
    }
    if (has_targets) return OperationKind::Localized;
    if (prompt.has_object_words()) {
        return doc_kind == DocumentKind::Svg ? OperationKind::SvgRefs : OperationKind::TextRefs;
    }
    return OperationKind::Global;
}

namespace {

std::string_view strip_fence(std::string_view s) {
    if (s.substr(0, 3) != "```") return s;
    const auto newline = s.find('\n');
    if (newline == std::string_view::npos) return s;
    s.remove_prefix(newline + 1);
    s = utf8::trim(s);
    if (s.size() >= 3 && s.substr(s.size() - 3) == "```") s.remove_suffix(3);
    return s;
}

std::string_view strip_quotes(std::string_view s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
        s.remove_prefix(1);
        s.remove_suffix(1);
    }
    return s;
}

bool is_svg_open(std::string_view s, std::size_t at) {
    if (s.substr(at, 4) != "<svg") return false;
    if (at + 4 >= s.size()) return false;
    const char next = s[at + 4];
    return next == '>' || next == '/' || utf8::is_space(next);
}

std::string_view extract_svg(std::string_view s) {
    std::size_t begin = std::string_view::npos;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (is_svg_open(s, i)) {
            begin = i;
            break;
        }
    }
    if (begin == std::string_view::npos) throw Error(ErrorCode::SvgNotFound, "response has no <svg> element");
    int depth = 0;
    std::size_t i = begin;
    while (i < s.size()) {
        if (is_svg_open(s, i)) {
            const auto close = s.find('>', i);
            if (close == std::string_view::npos) break;
            if (s[close - 1] != '/') ++depth;
            else if (depth == 0) return s.substr(begin, close + 1 - begin);
            i = close + 1;
        } else if (s.substr(i, 6) == "</svg>") {
            if (--depth == 0) return s.substr(begin, i + 6 - begin);
            i += 6;
        } else {
            ++i;
        }
    }
    throw Error(ErrorCode::SvgNotFound, "response has an unterminated <svg> element");
}

}  // namespace

std::string extract_payload(std::string_view raw, OperationKind kind, DocumentKind doc_kind) {
    auto s = utf8::trim(raw);
    if (s.empty()) throw Error(ErrorCode::EmptyPayload, "model returned an empty response");
    s = utf8::trim(strip_fence(s));
    if (kind == OperationKind::Localized && s.substr(0, 7) == "<blank>") {
        auto rest = s.substr(7);
        if (!rest.empty() && rest.front() == ':') s = utf8::trim(rest.substr(1));
    }
    s = utf8::trim(strip_quotes(s));
    const bool whole_svg = doc_kind == DocumentKind::Svg && kind != OperationKind::Localized;
    if (whole_svg) s = extract_svg(s);
    if (s.empty()) throw Error(ErrorCode::EmptyPayload, "model returned an empty payload");
    return std::string(s);
}

namespace {

std::string render_instruction(const ComposedPrompt& prompt, const Document& doc) {
    std::string out;
    for (const auto& segment : prompt.segments()) {
        if (const auto* lit = std::get_if<Literal>(&segment)) {
            out += lit->text;
            continue;
        }
        if (std::holds_alternative<Slot>(segment)) {
            throw Error(ErrorCode::InvalidPrompt, "prompt still contains unfilled slots");
        }
        const auto& ref = std::get<ObjectWord>(segment).ref;
        if (const auto* span = std::get_if<TextSpan>(&ref)) {
            validate_span(doc.content(), *span);
            out += '"';
            out.append(doc.content(), span->start, span->length());
            out += '"';
        } else if (const auto* el = std::get_if<SvgElementId>(&ref)) {
            out += "element with id \"" + el->id + "\"";
        } else {
            out += describe(ref);
        }
    }
    return out;
}

std::vector<SvgPoint> points_of(const Selection& selection) {
    std::vector<SvgPoint> out;
    for (const auto& ref : selection.refs) {
        if (const auto* p = std::get_if<SvgPoint>(&ref)) out.push_back(*p);
    }
    return out;
}

}  // namespace

OperationPlan plan_operation(const Document& doc, const ComposedPrompt& prompt,
                             const Selection& selection, const EngineConfig& config) {
    OperationPlan plan;
    plan.kind = choose_operation_kind(selection, prompt, doc.kind());
    switch (plan.kind) {
    case OperationKind::Localized: {
        const auto instruction = render_instruction(prompt, doc);
        for (const auto& ref : selection.refs) {
            LocalizedTarget target = is_span(ref) ? LocalizedTarget(std::get<TextSpan>(ref))
                                                  : LocalizedTarget(std::get<SvgElementId>(ref));
            plan.calls.push_back({ref, engineer_localized(doc, target, instruction, config)});
        }
        break;
    }
    case OperationKind::TextRefs: {
        plan.calls.push_back({std::nullopt, engineer_text_refs(doc, prompt, config)});
        std::vector<TextSpan> spans;
        for (const auto& ref : extract_nouns(prompt)) spans.push_back(std::get<TextSpan>(ref));
        std::sort(spans.begin(), spans.end());
        spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
        plan.delimiters = allocate_delimiters(doc, std::move(spans));
        break;
    }
    case OperationKind::SvgRefs:
        plan.calls.push_back(
            {std::nullopt, engineer_svg_refs(doc, prompt, points_of(selection), config)});
        break;
    case OperationKind::Global:
        plan.calls.push_back(
            {std::nullopt, engineer_global(doc, prompt, points_of(selection), config)});
        break;
    case OperationKind::ToolInvocation:
        break;
    }
    return plan;
}

// ---------------------------------------------------------------------------

namespace {

struct CallOutcome {
    std::optional<std::string> payload;
    std::optional<ErrorCode> code;
    std::string error;
};

void record_failure(CallOutcome& outcome, const std::exception& e) {
    if (const auto* err = dynamic_cast<const Error*>(&e)) outcome.code = err->code();
    else outcome.code = ErrorCode::InvalidResponse;
    outcome.error = e.what();
}

std::string strip_tokens(std::string text, const DelimiterAssignment& delimiters) {
    // Longest tokens first so "10]" is not eaten as "0]".
    std::vector<std::string_view> tokens;
    for (const auto& d : delimiters) tokens.push_back(d.token);
    std::sort(tokens.begin(), tokens.end(),
              [](std::string_view a, std::string_view b) { return a.size() > b.size(); });
    for (const auto token : tokens) {
        std::size_t at = 0;
        while ((at = text.find(token, at)) != std::string::npos) text.erase(at, token.size());
    }
    return text;
}

std::string canonical_or_invalid(std::string_view svg_text) {
    try {
        return svg::canonicalize(svg_text);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidResponse, std::string("model returned invalid svg: ") + e.what());
    }
}

// Parent container and index of the element with `id`.
std::pair<svg::Element*, std::size_t> locate(svg::Element& root, std::string_view id) {
    for (std::size_t i = 0; i < root.children.size(); ++i) {
        if (root.children[i].id() == id) return {&root, i};
        auto found = locate(root.children[i], id);
        if (found.first != nullptr) return found;
    }
    return {nullptr, 0};
}

void collect_subtree_ids(const svg::Element& el, std::set<std::string, std::less<>>& out) {
    if (auto id = el.id()) out.emplace(*id);
    for (const auto& child : el.children) collect_subtree_ids(child, out);
}

void strip_colliding_ids(svg::Element& el, const std::set<std::string, std::less<>>& reserved) {
    if (auto id = el.id(); id && reserved.count(*id) != 0) el.erase_attribute("id");
    for (auto& child : el.children) strip_colliding_ids(child, reserved);
}

std::map<std::string, std::string> markup_by_id(const std::string& content) {
    const auto serialized = svg::serialize_with_spans(svg::parse_svg(content));
    std::map<std::string, std::string> out;
    for (const auto& es : serialized.spans) {
        out.emplace(es.id, content.substr(es.span.start, es.span.length()));
    }
    return out;
}

}  // namespace

class Workspace::BusyGuard {
public:
    BusyGuard(Workspace& ws, const CancelToken& token) : ws_(ws) {
        std::lock_guard lock(ws_.mutex_);
        if (ws_.busy_) throw Error(ErrorCode::Busy, "an operation is already in flight");
        ws_.busy_ = true;
        ws_.in_flight_ = token;
        snapshot_ = ws_.document_;
    }
    ~BusyGuard() {
        std::lock_guard lock(ws_.mutex_);
        ws_.busy_ = false;
        ws_.in_flight_.reset();
    }
    BusyGuard(const BusyGuard&) = delete;
    BusyGuard& operator=(const BusyGuard&) = delete;

    const Document& snapshot() const { return snapshot_; }

private:
    Workspace& ws_;
    Document snapshot_;
};

Workspace::Workspace(Document document, std::shared_ptr<const Backend> backend,
                     EngineConfig config)
    : backend_(std::move(backend)), config_(std::move(config)), document_(std::move(document)) {}

OperationResult Workspace::execute(const ComposedPrompt& prompt, const Selection& selection) {
    CancelToken token;
    BusyGuard guard(*this, token);
    return run(prompt, selection, guard.snapshot(), token);
}

OperationResult Workspace::invoke_tool(std::string_view tool_id,
                                       const std::vector<ObjectRef>& nouns) {
    CancelToken token;
    BusyGuard guard(*this, token);
    Tool tool;
    {
        std::lock_guard lock(mutex_);
        const auto* found = toolbar_.find(tool_id);
        if (found == nullptr) {
            throw Error(ErrorCode::UnknownTool, "no tool \"" + std::string(tool_id) + "\"");
        }
        tool = *found;
    }
    auto invocation = instantiate_tool(tool, nouns, guard.snapshot());
    return run(invocation.prompt, invocation.selection, guard.snapshot(), token);
}

OperationResult Workspace::run(const ComposedPrompt& prompt, const Selection& raw_selection,
                               const Document& snapshot, const CancelToken& cancel) {
    const auto started = std::chrono::steady_clock::now();
    const Selection selection = normalize_selection(snapshot, raw_selection);
    const OperationPlan plan = plan_operation(snapshot, prompt, selection, config_);

    // Fan out; every call observes the same cancel token.
    std::vector<std::future<std::string>> futures;
    futures.reserve(plan.calls.size());
    for (const auto& call : plan.calls) {
        futures.push_back(std::async(std::launch::async, [this, &call, &cancel] {
            return backend_->complete(call.request, cancel);
        }));
    }
    std::vector<CallOutcome> outcomes(plan.calls.size());
    for (std::size_t i = 0; i < futures.size(); ++i) {
        try {
            outcomes[i].payload = futures[i].get();
        } catch (const std::exception& e) {
            record_failure(outcomes[i], e);
        }
    }
    if (cancel.cancelled()) throw Error(ErrorCode::Cancelled, "operation cancelled");

    const bool is_svg = snapshot.kind() == DocumentKind::Svg;
    std::string new_content;

    if (plan.kind == OperationKind::Localized) {
        // Clean payloads first so per-target failures leave their target alone.
        for (auto& outcome : outcomes) {
            if (!outcome.payload) continue;
            try {
                outcome.payload = extract_payload(*outcome.payload, plan.kind, snapshot.kind());
                if (is_svg) (void)svg::parse_fragment(*outcome.payload);
            } catch (const std::exception& e) {
                outcome.payload.reset();
                record_failure(outcome, e);
                if (outcome.code == ErrorCode::ParseError) outcome.code = ErrorCode::InvalidResponse;
            }
        }
        const bool any_ok = std::any_of(outcomes.begin(), outcomes.end(),
                                        [](const CallOutcome& o) { return o.payload.has_value(); });
        if (!any_ok) {
            const auto& first = outcomes.front();
            throw Error(first.code.value_or(ErrorCode::InvalidResponse), first.error);
        }

        if (!is_svg) {
            // Back to front, so earlier offsets stay valid.
            new_content = snapshot.content();
            for (std::size_t i = plan.calls.size(); i-- > 0;) {
                if (!outcomes[i].payload) continue;
                const auto& span = std::get<TextSpan>(*plan.calls[i].target);
                new_content.replace(span.start, span.length(), *outcomes[i].payload);
            }
        } else {
            auto tree = svg::parse_svg(snapshot.content());
            std::set<std::string, std::less<>> all_ids;
            for (auto& id : svg::collect_ids(tree)) all_ids.insert(std::move(id));
            std::set<std::string, std::less<>> affected;
            const auto old_spans = svg::serialize_with_spans(tree).spans;

            for (std::size_t i = 0; i < plan.calls.size(); ++i) {
                if (!outcomes[i].payload) continue;
                const auto& id = std::get<SvgElementId>(*plan.calls[i].target).id;
                auto [parent, index] = locate(tree.root, id);
                if (parent == nullptr) continue;  // normalize_selection guarantees presence

                std::set<std::string, std::less<>> subtree;
                collect_subtree_ids(parent->children[index], subtree);
                std::set<std::string, std::less<>> reserved;
                std::set_difference(all_ids.begin(), all_ids.end(), subtree.begin(), subtree.end(),
                                    std::inserter(reserved, reserved.end()));

                auto fragment = svg::parse_fragment(*outcomes[i].payload);
                for (auto& el : fragment) strip_colliding_ids(el, reserved);
                if (!fragment.empty() && !fragment.front().id()) {
                    fragment.front().set_attribute("id", id);
                }
                auto& siblings = parent->children;
                siblings.erase(siblings.begin() + static_cast<std::ptrdiff_t>(index));
                siblings.insert(siblings.begin() + static_cast<std::ptrdiff_t>(index),
                                std::make_move_iterator(fragment.begin()),
                                std::make_move_iterator(fragment.end()));

                affected.insert(subtree.begin(), subtree.end());
                const auto target_span = std::find_if(old_spans.begin(), old_spans.end(),
                                                      [&](const svg::ElementSpan& s) { return s.id == id; });
                for (const auto& s : old_spans) {
                    if (s.span.contains(target_span->span)) affected.insert(s.id);
                }
            }
            new_content = svg::serialize_svg(svg::assign_ids(std::move(tree)));

            const auto before = markup_by_id(snapshot.content());
            const auto after = markup_by_id(new_content);
            for (const auto& [id, markup] : before) {
                if (affected.count(id) != 0) continue;
                const auto found = after.find(id);
                if (found == after.end() || found->second != markup) {
                    throw Error(ErrorCode::InvalidResponse,
                                "rewrite would change element \"" + id + "\" outside the selection");
                }
            }
        }
    } else {
        auto& outcome = outcomes.front();
        if (!outcome.payload) throw Error(outcome.code.value_or(ErrorCode::InvalidResponse), outcome.error);
        auto payload = extract_payload(*outcome.payload, plan.kind, snapshot.kind());
        if (is_svg) new_content = canonical_or_invalid(payload);
        else if (plan.kind == OperationKind::TextRefs) new_content = strip_tokens(std::move(payload), plan.delimiters);
        else new_content = std::move(payload);
    }

    OperationResult result;
    result.kind = plan.kind;
    result.document = snapshot.with_content(std::move(new_content));
    result.changes = diff(snapshot, result.document);
    for (std::size_t i = 0; i < plan.calls.size(); ++i) {
        TargetStatus status;
        status.ref = plan.calls[i].target;
        status.ok = outcomes[i].payload.has_value();
        status.code = outcomes[i].code;
        status.error = outcomes[i].error;
        result.per_target_status.push_back(std::move(status));
    }

    auto tool = abstract_tool(prompt, !selection.empty(), snapshot.kind());
    {
        std::lock_guard lock(mutex_);
        if (cancel.cancelled()) throw Error(ErrorCode::Cancelled, "operation cancelled");
        history_.record({tool.label, snapshot, result.document}, document_);
        result.created_tool_id = toolbar_.add(std::move(tool));
        document_ = result.document;
    }
    result.elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - started);
    return result;
}

Document Workspace::undo() {
    std::lock_guard lock(mutex_);
    if (busy_) throw Error(ErrorCode::Busy, "an operation is in flight");
    const auto restored = history_.undo(document_);
    document_ = restored.with_version(document_.version() + 1);
    return document_;
}

Document Workspace::redo() {
    std::lock_guard lock(mutex_);
    if (busy_) throw Error(ErrorCode::Busy, "an operation is in flight");
    const auto restored = history_.redo(document_);
    document_ = restored.with_version(document_.version() + 1);
    return document_;
}

bool Workspace::cancel() {
    std::lock_guard lock(mutex_);
    if (!in_flight_) return false;
    in_flight_->cancel();
    return true;
}

std::vector<ObjectRef> Workspace::preview(const ComposedPrompt& prompt,
                                          const Selection& selection) const {
    const auto doc = document();
    return feedback_targets(normalize_selection(doc, selection), prompt);
}

Document Workspace::document() const {
    std::lock_guard lock(mutex_);
    return document_;
}

std::vector<Tool> Workspace::tools() const {
    std::lock_guard lock(mutex_);
    return toolbar_.tools();
}

bool Workspace::can_undo() const {
    std::lock_guard lock(mutex_);
    return history_.can_undo();
}

bool Workspace::can_redo() const {
    std::lock_guard lock(mutex_);
    return history_.can_redo();
}

std::size_t Workspace::history_depth() const {
    std::lock_guard lock(mutex_);
    return history_.undo_depth();
}

bool Workspace::busy() const {
    std::lock_guard lock(mutex_);
    return busy_;
}

}  // namespace directmanip
