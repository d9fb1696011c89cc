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

#include "directmanip/history.hpp"

#include "directmanip/error.hpp"

namespace directmanip {

void History::record(HistoryEntry entry, const Document& current) {
    if (!entry.before.same_content(current)) {
        throw Error(ErrorCode::StaleSnapshot, "history entry does not start from the current document");
    }
    if (entry.before.version() >= entry.after.version()) {
        throw Error(ErrorCode::StaleSnapshot, "history entry does not advance the version");
    }
    undo_.push_back(std::move(entry));
    redo_.clear();
}

Document History::undo(const Document& current) {
    if (undo_.empty()) throw Error(ErrorCode::NothingToUndo, "nothing to undo");
    if (!undo_.back().after.same_content(current)) {
        throw Error(ErrorCode::StaleSnapshot, "current document is not the last recorded result");
    }
    redo_.push_back(std::move(undo_.back()));
    undo_.pop_back();
    return redo_.back().before;
}

Document History::redo(const Document& current) {
    if (redo_.empty()) throw Error(ErrorCode::NothingToRedo, "nothing to redo");
    if (!redo_.back().before.same_content(current)) {
        throw Error(ErrorCode::StaleSnapshot, "current document is not the undone state");
    }
    undo_.push_back(std::move(redo_.back()));
    redo_.pop_back();
    return undo_.back().after;
}

}  // namespace directmanip
