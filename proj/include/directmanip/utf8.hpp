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

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace directmanip::utf8 {

inline bool is_continuation(unsigned char c) { return (c & 0xC0) == 0x80; }

// True when `offset` does not split a multi-byte sequence. `offset ==
// text.size()` is a boundary.
inline bool is_boundary(std::string_view text, std::size_t offset) {
    if (offset > text.size()) return false;
    if (offset == text.size()) return true;
    return !is_continuation(static_cast<unsigned char>(text[offset]));
}

bool is_valid(std::string_view text);

// Byte offsets of every code point start, plus a final entry equal to
// text.size().
std::vector<std::size_t> code_point_offsets(std::string_view text);

// Decoded code points; invalid bytes decode to themselves.
std::vector<char32_t> decode(std::string_view text);

std::string truncate(std::string_view text, std::size_t max_code_points,
                     std::string_view ellipsis = "…");

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
           c == '\v';
}

std::string_view trim(std::string_view text);

}  // namespace directmanip::utf8
