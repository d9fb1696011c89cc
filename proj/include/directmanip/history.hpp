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
#include <string>
#include <vector>

#include "directmanip/document.hpp"

namespace directmanip {

// One user-level operation, however many model calls it took.
struct HistoryEntry {
    std::string label;
    Document before;
    Document after;
    std::chrono::system_clock::time_point timestamp = std::chrono::system_clock::now();
};

// Linear undo/redo over full document snapshots.
class History {
public:
    // Throws StaleSnapshot unless entry.before matches `current` and
    // entry.after is newer than entry.before.
    void record(HistoryEntry entry, const Document& current);

    // Returns the snapshot before the last operation. Throws NothingToUndo,
    // or StaleSnapshot when `current` is not that operation's result.
    Document undo(const Document& current);
    Document redo(const Document& current);

    bool can_undo() const noexcept { return !undo_.empty(); }
    bool can_redo() const noexcept { return !redo_.empty(); }
    std::size_t undo_depth() const noexcept { return undo_.size(); }
    std::size_t redo_depth() const noexcept { return redo_.size(); }

    const std::vector<HistoryEntry>& undo_stack() const noexcept { return undo_; }

private:
    std::vector<HistoryEntry> undo_;
    std::vector<HistoryEntry> redo_;
};

}  // namespace directmanip
