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
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "directmanip/backend.hpp"
#include "directmanip/document.hpp"
#include "directmanip/engine.hpp"
#include "directmanip/error.hpp"
#include "directmanip/history.hpp"
#include "directmanip/prompt.hpp"
#include "directmanip/tools.hpp"

namespace directmanip {

enum class OperationKind { Localized, TextRefs, SvgRefs, Global, ToolInvocation };

std::string_view to_string(OperationKind kind);

// Decision table:
//   selection holds spans or elements      -> Localized
//   prompt holds object-words              -> TextRefs / SvgRefs
//   otherwise                              -> Global
// Points in an svg selection only add location context. Throws
// MixedSelection when points are mixed with element targets.
OperationKind choose_operation_kind(const Selection& selection, const ComposedPrompt& prompt,
                                    DocumentKind doc_kind);

// Response hygiene: trims, strips a surrounding code fence, a "<blank>:" echo
// (localized), and one pair of surrounding quotes; for whole-svg responses
// extracts the first <svg>...</svg>. Throws EmptyPayload or SvgNotFound.
std::string extract_payload(std::string_view raw, OperationKind kind, DocumentKind doc_kind);

struct PlannedCall {
    std::optional<ObjectRef> target;  // set for localized calls
    EngineeredRequest request;
};

struct OperationPlan {
    OperationKind kind = OperationKind::Global;
    std::vector<PlannedCall> calls;
    DelimiterAssignment delimiters;  // text-refs only
};

// The engineered requests `execute` would send, without sending them.
// `selection` must be normalized.
OperationPlan plan_operation(const Document& doc, const ComposedPrompt& prompt,
                             const Selection& selection, const EngineConfig& config = {});

struct TargetStatus {
    std::optional<ObjectRef> ref;
    bool ok = true;
    std::optional<ErrorCode> code;
    std::string error;
};

struct OperationResult {
    OperationKind kind = OperationKind::Global;
    Document document;
    ChangeSet changes;
    std::optional<std::string> created_tool_id;
    std::vector<TargetStatus> per_target_status;
    std::chrono::milliseconds elapsed{0};
};

// One editing context: the document, its undo history and its toolbar. A
// single operation may be in flight at a time; reads and cancel() are allowed
// concurrently.
class Workspace {
public:
    Workspace(Document document, std::shared_ptr<const Backend> backend,
              EngineConfig config = {});

    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;

    OperationResult execute(const ComposedPrompt& prompt, const Selection& selection);
    OperationResult invoke_tool(std::string_view tool_id, const std::vector<ObjectRef>& nouns);

    Document undo();
    Document redo();

    // Fires the in-flight operation's cancel signal; a no-op when idle.
    // Returns whether an operation was in flight.
    bool cancel();

    std::vector<ObjectRef> preview(const ComposedPrompt& prompt, const Selection& selection) const;

    Document document() const;
    std::vector<Tool> tools() const;
    bool can_undo() const;
    bool can_redo() const;
    std::size_t history_depth() const;
    bool busy() const;

private:
    class BusyGuard;

    OperationResult run(const ComposedPrompt& prompt, const Selection& selection,
                        const Document& snapshot, const CancelToken& cancel);

    std::shared_ptr<const Backend> backend_;
    EngineConfig config_;

    mutable std::mutex mutex_;
    Document document_;
    History history_;
    Toolbar toolbar_;
    bool busy_ = false;
    std::optional<CancelToken> in_flight_;
};

}  // namespace directmanip
