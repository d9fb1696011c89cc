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

// Seeded random inputs for the property tests.

#include <algorithm>
#include <array>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "directmanip/document.hpp"
#include "directmanip/prompt.hpp"
#include "directmanip/svg.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T, std::size_t N>
const T& pick(Rng& rng, const std::array<T, N>& items) {
    return items[uniform(rng, 0, N - 1)];
}

// Mixed ASCII, punctuation and multi-byte characters.
inline std::string text(Rng& rng, std::size_t max_chars) {
    static const std::array<const char*, 24> pieces = {
        "a", "b", "c", "e", "t", "s", "r", "o", " ", " ", " ", "\n", ",", ".", "0", "]",
        "\xC3\xA9", "\xC3\xBC", "\xE6\x97\xA5", "\xE2\x80\x94", "\xF0\x9F\x98\x80", "<", "&", "\""};
    std::string out;
    const auto n = uniform(rng, 0, max_chars);
    for (std::size_t i = 0; i < n; ++i) out += pick(rng, pieces);
    return out;
}

inline std::string word(Rng& rng) {
    static const std::array<const char*, 10> words = {
        "rabbit", "tail", "day", "hot", "ran", "pink", "sleepy", "caf\xC3\xA9", "\xE6\x97\xA5\xE6\x9C\xAC", "daisy"};
    return pick(rng, words);
}

// Byte offsets of every character boundary, end included.
inline std::vector<std::size_t> boundaries(const std::string& s) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) out.push_back(i);
    }
    out.push_back(s.size());
    return out;
}

inline directmanip::TextSpan span(Rng& rng, const std::string& s) {
    const auto b = boundaries(s);
    auto i = uniform(rng, 0, b.size() - 1);
    auto j = uniform(rng, 0, b.size() - 1);
    if (i > j) std::swap(i, j);
    return {b[i], b[j]};
}

// Up to `max_count` pairwise disjoint, non-empty spans in ascending order.
inline std::vector<directmanip::TextSpan> disjoint_spans(Rng& rng, const std::string& s,
                                                         std::size_t max_count) {
    const auto b = boundaries(s);
    if (b.size() < 2) return {};
    std::set<std::size_t> cuts;
    const auto want = std::min(2 * uniform(rng, 1, max_count), b.size());
    while (cuts.size() < want) cuts.insert(uniform(rng, 0, b.size() - 1));
    std::vector<std::size_t> c(cuts.begin(), cuts.end());
    std::vector<directmanip::TextSpan> out;
    for (std::size_t k = 0; k + 1 < c.size(); k += 2) out.push_back({b[c[k]], b[c[k + 1]]});
    return out;
}

inline std::string attribute_value(Rng& rng) {
    static const std::array<const char*, 14> pieces = {
        "1", "2", "50", " ", "-", ".", "M", "L", "&", "<", ">", "\"", "'", "\xC3\xA9"};
    std::string out;
    const auto n = uniform(rng, 0, 6);
    for (std::size_t i = 0; i < n; ++i) out += pick(rng, pieces);
    return out;
}

// Text content as stored by the parser: non-empty, no surrounding whitespace.
inline std::string element_text(Rng& rng) {
    static const std::array<const char*, 9> pieces = {"hi", "a", "&", "<", ">", "\"", "x y", "\xE6\x97\xA5", "1"};
    std::string out;
    const auto n = uniform(rng, 1, 4);
    for (std::size_t i = 0; i < n; ++i) out += pick(rng, pieces);
    return out;
}

inline directmanip::svg::Element element(Rng& rng, int depth) {
    static const std::array<const char*, 7> tags = {"circle", "rect", "line", "path", "polygon", "text", "g"};
    static const std::array<const char*, 12> names = {
        "cx", "cy", "r", "x", "y", "width", "height", "fill", "stroke", "d", "points", "transform"};
    static const std::array<const char*, 6> ids = {"a", "b", "c0", "c2", "petal", "c10"};

    directmanip::svg::Element el;
    do {
        el.tag = pick(rng, tags);
    } while (depth >= 3 && el.tag == "g");
    std::set<std::string> used;
    const auto attrs = uniform(rng, 0, 4);
    for (std::size_t i = 0; i < attrs; ++i) {
        std::string name = pick(rng, names);
        if (used.insert(name).second) el.attributes.push_back({name, attribute_value(rng)});
    }
    if (chance(rng, 0.35)) {
        auto pos = el.attributes.begin() + static_cast<std::ptrdiff_t>(uniform(rng, 0, el.attributes.size()));
        el.attributes.insert(pos, {"id", pick(rng, ids)});
    }
    if (el.tag == "text") {
        el.text = element_text(rng);
    } else if (el.tag == "g") {
        const auto n = uniform(rng, 0, 4);
        for (std::size_t i = 0; i < n; ++i) el.children.push_back(element(rng, depth + 1));
    }
    return el;
}

inline directmanip::svg::SvgTree tree(Rng& rng) {
    directmanip::svg::SvgTree t;
    t.root.tag = "svg";
    if (chance(rng, 0.7)) t.root.attributes.push_back({"width", "300"});
    if (chance(rng, 0.5)) t.root.attributes.push_back({"height", "150"});
    const auto n = uniform(rng, 0, 8);
    for (std::size_t i = 0; i < n; ++i) t.root.children.push_back(element(rng, 1));
    return t;
}

// Ids of every non-root element, document order.
inline void element_ids(const directmanip::svg::Element& el, std::vector<std::string>& out) {
    for (const auto& child : el.children) {
        if (auto id = child.id()) out.emplace_back(*id);
        element_ids(child, out);
    }
}

// A literal instruction with `words` object-words built from `nouns`.
inline directmanip::ComposedPrompt prompt(Rng& rng, const std::vector<directmanip::ObjectRef>& nouns,
                                          const std::vector<std::string>& displays) {
    static const std::array<const char*, 8> verbs = {
        "replace", "draw a line from", "make", "swap", "connect", "move", "color", "synonym for"};
    static const std::array<const char*, 6> joins = {" and ", " to ", " with ", ", ", " near ", " "};
    std::vector<directmanip::PromptSegment> segments;
    if (chance(rng, 0.8)) segments.push_back(directmanip::Literal{std::string(pick(rng, verbs)) + " "});
    for (std::size_t i = 0; i < nouns.size(); ++i) {
        if (i > 0) segments.push_back(directmanip::Literal{pick(rng, joins)});
        segments.push_back(directmanip::ObjectWord{nouns[i], displays[i]});
    }
    if (nouns.empty() || chance(rng, 0.5)) segments.push_back(directmanip::Literal{" " + word(rng)});
    return directmanip::ComposedPrompt(std::move(segments));
}

}  // namespace gen
