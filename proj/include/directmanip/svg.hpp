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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "directmanip/text_span.hpp"

namespace directmanip::svg {

struct Attribute {
    std::string name;
    std::string value;

    bool operator==(const Attribute&) const = default;
};

// Generic XML element. Any tag is accepted; `text` holds the element's
// direct character data, trimmed, or nothing when it is only whitespace.
struct Element {
    std::string tag;
    std::vector<Attribute> attributes;
    std::vector<Element> children;
    std::optional<std::string> text;

    const std::string* attribute(std::string_view name) const;
    void set_attribute(std::string_view name, std::string value);
    bool erase_attribute(std::string_view name);
    std::optional<std::string_view> id() const;

    bool operator==(const Element&) const = default;
};

struct SvgTree {
    Element root;

    bool operator==(const SvgTree&) const = default;
};

struct ElementSpan {
    std::string id;
    TextSpan span;
};

struct Serialization {
    std::string text;
    // Every element carrying an id, in document order.
    std::vector<ElementSpan> spans;
};

// Throws ParseError (malformed XML, with byte position) or Error{NotSvg}.
SvgTree parse_svg(std::string_view source);

// Zero or more sibling elements, e.g. a model's rewrite of one element.
std::vector<Element> parse_fragment(std::string_view source);

// Gives every non-root element a unique id. Existing first-occurrence ids are
// kept; missing or duplicate ids become "c{n}" with the smallest unused n,
// handed out in document order.
SvgTree assign_ids(SvgTree tree);

std::string serialize_svg(const SvgTree& tree);
Serialization serialize_with_spans(const SvgTree& tree);

// Serialization of one element as it appears at `depth` inside a canonical
// document (the first line carries no indentation).
std::string serialize_element(const Element& element, int depth);

ElementSpan element_span(const SvgTree& tree, std::string_view id);

// parse + assign_ids + serialize.
std::string canonicalize(std::string_view source);

bool is_canonical(std::string_view content);

const Element* find_element(const SvgTree& tree, std::string_view id);

// Element ids in document order (root included when it has one).
std::vector<std::string> collect_ids(const SvgTree& tree);

}  // namespace directmanip::svg
