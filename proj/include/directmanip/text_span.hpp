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

#include <compare>
#include <cstddef>

namespace directmanip {

// Half-open byte range [start, end) into UTF-8 content.
struct TextSpan {
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const noexcept { return end - start; }
    bool empty() const noexcept { return start == end; }
    bool overlaps(const TextSpan& other) const noexcept {
        return start < other.end && other.start < end;
    }
    bool contains(const TextSpan& other) const noexcept {
        return start <= other.start && other.end <= end;
    }

    auto operator<=>(const TextSpan&) const = default;
};

}  // namespace directmanip
