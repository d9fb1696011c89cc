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

#include "directmanip/svg.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

#include "directmanip/error.hpp"
#include "directmanip/utf8.hpp"

namespace directmanip::svg {

const std::string* Element::attribute(std::string_view name) const {
    for (const auto& attr : attributes) {
        if (attr.name == name) return &attr.value;
    }
    return nullptr;
}

void Element::set_attribute(std::string_view name, std::string value) {
    for (auto& attr : attributes) {
        if (attr.name == name) {
            attr.value = std::move(value);
            return;
        }
    }
    attributes.push_back({std::string(name), std::move(value)});
}

bool Element::erase_attribute(std::string_view name) {
    auto it = std::find_if(attributes.begin(), attributes.end(),
                           [&](const Attribute& a) { return a.name == name; });
    if (it == attributes.end()) return false;
    attributes.erase(it);
    return true;
}

std::optional<std::string_view> Element::id() const {
    if (const auto* value = attribute("id")) return std::string_view(*value);
    return std::nullopt;
}

namespace {

constexpr int kMaxDepth = 512;

bool is_name_start(char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
           c == ':' || static_cast<unsigned char>(c) >= 0x80;
}

bool is_name_char(char c) {
    return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    SvgTree document() {
        if (src_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
        skip_misc();
        if (at_end() || peek() != '<') fail("expected root element");
        SvgTree tree{element(0)};
        skip_misc();
        if (!at_end()) fail("unexpected content after root element");
        if (tree.root.tag != "svg") {
            throw Error(ErrorCode::NotSvg,
                        "root element is <" + tree.root.tag + ">, expected <svg>");
        }
        return tree;
    }

    std::vector<Element> fragment() {
        std::vector<Element> out;
        skip_misc();
        while (!at_end()) {
            if (peek() != '<') fail("text outside of an element");
            out.push_back(element(0));
            skip_misc();
        }
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& message) const {
        throw ParseError(pos_, message);
    }

    bool at_end() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }
    bool starts_with(std::string_view s) const { return src_.substr(pos_, s.size()) == s; }

    void skip_space() {
        while (!at_end() && utf8::is_space(peek())) ++pos_;
    }

    void skip_until(std::string_view terminator, const char* what) {
        const auto found = src_.find(terminator, pos_);
        if (found == std::string_view::npos) fail(std::string("unterminated ") + what);
        pos_ = found + terminator.size();
    }

    // Whitespace, comments, processing instructions and doctype.
    void skip_misc() {
        for (;;) {
            skip_space();
            if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (starts_with("<!DOCTYPE") || starts_with("<!doctype")) {
                skip_doctype();
            } else {
                return;
            }
        }
    }

    void skip_doctype() {
        int bracket = 0;
        while (!at_end()) {
            const char c = src_[pos_++];
            if (c == '[') ++bracket;
            else if (c == ']') --bracket;
            else if (c == '>' && bracket <= 0) return;
        }
        fail("unterminated doctype");
    }

    std::string name() {
        if (at_end() || !is_name_start(peek())) fail("expected a name");
        const std::size_t begin = pos_;
        while (!at_end() && is_name_char(peek())) ++pos_;
        return std::string(src_.substr(begin, pos_ - begin));
    }

    void decode_entity(std::string& out) {
        const std::size_t begin = pos_;
        const auto semi = src_.find(';', pos_);
        if (semi == std::string_view::npos || semi - pos_ > 12) fail("malformed entity");
        const auto entity = src_.substr(pos_ + 1, semi - pos_ - 1);
        pos_ = semi + 1;
        if (entity == "amp") out += '&';
        else if (entity == "lt") out += '<';
        else if (entity == "gt") out += '>';
        else if (entity == "quot") out += '"';
        else if (entity == "apos") out += '\'';
        else if (!entity.empty() && entity[0] == '#') {
            const bool hex = entity.size() > 1 && (entity[1] == 'x' || entity[1] == 'X');
            const auto digits = entity.substr(hex ? 2 : 1);
            std::uint32_t cp = 0;
            const auto [ptr, ec] =
                std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
            if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() ||
                cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
                pos_ = begin;
                fail("invalid character reference");
            }
            append_utf8(out, cp);
        } else {
            pos_ = begin;
            fail("unknown entity");
        }
    }

    std::string attribute_value() {
        if (at_end() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
        const char quote = src_[pos_++];
        std::string value;
        while (!at_end() && peek() != quote) {
            if (peek() == '<') fail("'<' in attribute value");
            if (peek() == '&') decode_entity(value);
            else value += src_[pos_++];
        }
        if (at_end()) fail("unterminated attribute value");
        ++pos_;
        return value;
    }

    Element element(int depth) {
        if (depth > kMaxDepth) fail("elements nested too deeply");
        const std::size_t open_at = pos_;
        ++pos_;  // '<'
        Element el;
        el.tag = name();
        for (;;) {
            const std::size_t before = pos_;
            skip_space();
            if (at_end()) fail("unterminated start tag");
            if (starts_with("/>")) {
                pos_ += 2;
                return el;
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            if (pos_ == before) fail("expected whitespace before attribute");
            auto attr_name = name();
            skip_space();
            if (at_end() || peek() != '=') fail("expected '=' after attribute name");
            ++pos_;
            skip_space();
            auto value = attribute_value();
            if (el.attribute(attr_name) != nullptr) fail("duplicate attribute '" + attr_name + "'");
            el.attributes.push_back({std::move(attr_name), std::move(value)});
        }

        std::string text;
        for (;;) {
            if (at_end()) {
                pos_ = open_at;
                fail("unclosed element <" + el.tag + ">");
            }
            if (starts_with("</")) {
                const std::size_t close_at = pos_;
                pos_ += 2;
                const auto closing = name();
                if (closing != el.tag) {
                    pos_ = close_at;
                    fail("mismatched closing tag </" + closing + "> for <" + el.tag + ">");
                }
                skip_space();
                if (at_end() || peek() != '>') fail("expected '>'");
                ++pos_;
                break;
            }
            if (starts_with("<!--")) {
                skip_until("-->", "comment");
            } else if (starts_with("<![CDATA[")) {
                const std::size_t begin = pos_ + 9;
                skip_until("]]>", "CDATA section");
                text.append(src_.substr(begin, pos_ - 3 - begin));
            } else if (starts_with("<?")) {
                skip_until("?>", "processing instruction");
            } else if (peek() == '<') {
                el.children.push_back(element(depth + 1));
            } else if (peek() == '&') {
                decode_entity(text);
            } else {
                text += src_[pos_++];
            }
        }
        const auto trimmed = utf8::trim(text);
        if (!trimmed.empty()) el.text = std::string(trimmed);
        return el;
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

void escape_into(std::string& out, std::string_view text, bool attribute) {
    for (const char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"':
            if (attribute) out += "&quot;";
            else out += c;
            break;
        default: out += c;
        }
    }
}

void indent(std::string& out, int depth) { out.append(static_cast<std::size_t>(depth) * 2, ' '); }

void write(const Element& el, int depth, std::string& out, std::vector<ElementSpan>* spans) {
    const std::size_t start = out.size();
    out += '<';
    out += el.tag;
    for (const auto& attr : el.attributes) {
        out += ' ';
        out += attr.name;
        out += "=\"";
        escape_into(out, attr.value, true);
        out += '"';
    }
    out += '>';
    if (el.text) escape_into(out, *el.text, false);
    if (!el.children.empty()) {
        for (const auto& child : el.children) {
            out += '\n';
            indent(out, depth + 1);
            write(child, depth + 1, out, spans);
        }
        out += '\n';
        indent(out, depth);
    }
    out += "</";
    out += el.tag;
    out += '>';
    if (spans != nullptr) {
        if (auto id = el.id()) spans->push_back({std::string(*id), {start, out.size()}});
    }
}

template <typename Fn>
void preorder(const Element& el, Fn&& fn) {
    fn(el);
    for (const auto& child : el.children) preorder(child, fn);
}

template <typename Fn>
void preorder_mut(Element& el, Fn&& fn) {
    fn(el);
    for (auto& child : el.children) preorder_mut(child, fn);
}

}  // namespace

SvgTree parse_svg(std::string_view source) { return Parser(source).document(); }

std::vector<Element> parse_fragment(std::string_view source) {
    return Parser(source).fragment();
}

SvgTree assign_ids(SvgTree tree) {
    std::unordered_set<std::string> taken;
    std::vector<Element*> needs_id;
    if (auto id = tree.root.id()) taken.emplace(*id);
    for (auto& child : tree.root.children) {
        preorder_mut(child, [&](Element& el) {
            auto id = el.id();
            if (id && taken.emplace(*id).second) return;
            needs_id.push_back(&el);
        });
    }
    std::size_t counter = 0;
    for (auto* el : needs_id) {
        std::string candidate;
        do {
            candidate = "c" + std::to_string(counter++);
        } while (taken.count(candidate) != 0);
        taken.insert(candidate);
        el->set_attribute("id", std::move(candidate));
    }
    return tree;
}

std::string serialize_svg(const SvgTree& tree) {
    std::string out;
    write(tree.root, 0, out, nullptr);
    return out;
}

Serialization serialize_with_spans(const SvgTree& tree) {
    Serialization result;
    write(tree.root, 0, result.text, &result.spans);
    // write() records post-order; callers want document order.
    std::stable_sort(result.spans.begin(), result.spans.end(),
                     [](const ElementSpan& a, const ElementSpan& b) {
                         return a.span.start < b.span.start;
                     });
    return result;
}

std::string serialize_element(const Element& element, int depth) {
    std::string out;
    write(element, depth, out, nullptr);
    return out;
}

ElementSpan element_span(const SvgTree& tree, std::string_view id) {
    auto serialized = serialize_with_spans(tree);
    for (auto& span : serialized.spans) {
        if (span.id == id) return std::move(span);
    }
    throw Error(ErrorCode::UnknownElement, "no element with id \"" + std::string(id) + "\"");
}

std::string canonicalize(std::string_view source) {
    return serialize_svg(assign_ids(parse_svg(source)));
}

bool is_canonical(std::string_view content) {
    try {
        return canonicalize(content) == content;
    } catch (const Error&) {
        return false;
    }
}

const Element* find_element(const SvgTree& tree, std::string_view id) {
    const Element* found = nullptr;
    preorder(tree.root, [&](const Element& el) {
        if (found == nullptr && el.id() == id) found = &el;
    });
    return found;
}

std::vector<std::string> collect_ids(const SvgTree& tree) {
    std::vector<std::string> ids;
    preorder(tree.root, [&](const Element& el) {
        if (auto id = el.id()) ids.emplace_back(*id);
    });
    return ids;
}

}  // namespace directmanip::svg
