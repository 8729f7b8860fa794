/*
 * Copyright (C) 2026 The polcheck Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "polcheck/xml_lite.hpp"

#include <cctype>

#include "polcheck/errors.hpp"
#include "polcheck/text.hpp"

namespace polcheck {

const std::string* XmlNode::attribute(std::string_view key) const {
    for (const auto& [k, v] : attributes)
        if (k == key)
            return &v;
    return nullptr;
}

const XmlNode* XmlNode::child(std::string_view name) const {
    for (const XmlNode& c : children)
        if (c.name == name)
            return &c;
    return nullptr;
}

std::vector<const XmlNode*> XmlNode::children_named(std::string_view name) const {
    std::vector<const XmlNode*> out;
    for (const XmlNode& c : children)
        if (c.name == name)
            out.push_back(&c);
    return out;
}

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view text) : text_(text) {}

    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    bool has(std::string_view s) const { return text_.substr(pos_, s.size()) == s; }

    char take() {
        char c = text_[pos_++];
        if (c == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        return c;
    }

    void expect(std::string_view s) {
        if (!has(s))
            fail("expected '" + std::string(s) + "'");
        for (std::size_t i = 0; i < s.size(); ++i)
            take();
    }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek())))
            take();
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("XML: " + msg, line_, column_);
    }

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool is_name_char(char c) {
    return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) || c == '-' ||
           c == '.' || c == '$';
}

std::string parse_name(Cursor& cur) {
    if (cur.eof() || !is_name_start(cur.peek()))
        cur.fail("expected a name");
    std::string name;
    while (!cur.eof() && is_name_char(cur.peek()))
        name.push_back(cur.take());
    return name;
}

void append_entity(Cursor& cur, std::string& out) {
    // cur sits just past '&'
    std::string entity;
    while (!cur.eof() && cur.peek() != ';') {
        entity.push_back(cur.take());
        if (entity.size() > 10)
            cur.fail("unterminated entity reference");
    }
    if (cur.eof())
        cur.fail("unterminated entity reference");
    cur.take(); // ';'
    if (entity == "amp")
        out.push_back('&');
    else if (entity == "lt")
        out.push_back('<');
    else if (entity == "gt")
        out.push_back('>');
    else if (entity == "quot")
        out.push_back('"');
    else if (entity == "apos")
        out.push_back('\'');
    else if (!entity.empty() && entity[0] == '#') {
        long code = 0;
        try {
            code = entity[1] == 'x' || entity[1] == 'X'
                       ? std::stol(entity.substr(2), nullptr, 16)
                       : std::stol(entity.substr(1), nullptr, 10);
        } catch (...) {
            cur.fail("bad numeric character reference: &" + entity + ";");
        }
        if (code <= 0 || code > 0x10FFFF)
            cur.fail("numeric character reference out of range");
        // UTF-8 encode
        unsigned long cp = static_cast<unsigned long>(code);
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else if (cp < 0x800) {
            out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else if (cp < 0x10000) {
            out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        } else {
            out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
            out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
        }
    } else {
        cur.fail("unknown entity: &" + entity + ";");
    }
}

std::string parse_attribute_value(Cursor& cur) {
    if (cur.eof() || (cur.peek() != '"' && cur.peek() != '\''))
        cur.fail("expected a quoted attribute value");
    const char quote = cur.take();
    std::string value;
    while (true) {
        if (cur.eof())
            cur.fail("unterminated attribute value");
        char c = cur.peek();
        if (c == quote) {
            cur.take();
            return value;
        }
        if (c == '<')
            cur.fail("'<' not allowed in attribute value");
        if (c == '&') {
            cur.take();
            append_entity(cur, value);
            continue;
        }
        value.push_back(cur.take());
    }
}

void skip_misc(Cursor& cur) {
    // whitespace, comments, processing instructions, doctype
    while (true) {
        cur.skip_ws();
        if (cur.has("<!--")) {
            cur.expect("<!--");
            while (!cur.has("-->")) {
                if (cur.eof())
                    cur.fail("unterminated comment");
                cur.take();
            }
            cur.expect("-->");
        } else if (cur.has("<?")) {
            cur.expect("<?");
            while (!cur.has("?>")) {
                if (cur.eof())
                    cur.fail("unterminated processing instruction");
                cur.take();
            }
            cur.expect("?>");
        } else if (cur.has("<!DOCTYPE")) {
            while (!cur.eof() && cur.peek() != '>')
                cur.take();
            if (cur.eof())
                cur.fail("unterminated DOCTYPE");
            cur.take();
        } else {
            return;
        }
    }
}

XmlNode parse_element(Cursor& cur, int depth) {
    if (depth > 64)
        cur.fail("element nesting too deep");
    const std::size_t line = cur.line();
    const std::size_t column = cur.column();
    cur.expect("<");
    XmlNode node;
    node.line = line;
    node.column = column;
    node.name = parse_name(cur);

    // attributes
    while (true) {
        cur.skip_ws();
        if (cur.eof())
            cur.fail("unterminated start tag <" + node.name + ">");
        if (cur.has("/>")) {
            cur.expect("/>");
            return node;
        }
        if (cur.peek() == '>') {
            cur.take();
            break;
        }
        std::string key = parse_name(cur);
        for (const auto& [existing, _] : node.attributes)
            if (existing == key)
                cur.fail("duplicate attribute '" + key + "' on <" + node.name + ">");
        cur.skip_ws();
        cur.expect("=");
        cur.skip_ws();
        node.attributes.emplace_back(std::move(key), parse_attribute_value(cur));
    }

    // content
    while (true) {
        if (cur.eof())
            cur.fail("missing closing tag </" + node.name + ">");
        if (cur.has("</")) {
            cur.expect("</");
            std::string closing = parse_name(cur);
            if (closing != node.name)
                cur.fail("mismatched closing tag </" + closing + ">, expected </" + node.name +
                         ">");
            cur.skip_ws();
            cur.expect(">");
            return node;
        }
        if (cur.has("<!--")) {
            cur.expect("<!--");
            while (!cur.has("-->")) {
                if (cur.eof())
                    cur.fail("unterminated comment");
                cur.take();
            }
            cur.expect("-->");
            continue;
        }
        if (cur.has("<![CDATA[")) {
            cur.expect("<![CDATA[");
            while (!cur.has("]]>")) {
                if (cur.eof())
                    cur.fail("unterminated CDATA section");
                node.text.push_back(cur.take());
            }
            cur.expect("]]>");
            continue;
        }
        if (cur.has("<?")) {
            cur.expect("<?");
            while (!cur.has("?>")) {
                if (cur.eof())
                    cur.fail("unterminated processing instruction");
                cur.take();
            }
            cur.expect("?>");
            continue;
        }
        if (cur.peek() == '<') {
            node.children.push_back(parse_element(cur, depth + 1));
            continue;
        }
        if (cur.peek() == '&') {
            cur.take();
            append_entity(cur, node.text);
            continue;
        }
        node.text.push_back(cur.take());
    }
}

} // namespace

XmlNode parse_xml(std::string_view text) {
    Cursor cur(text);
    skip_misc(cur);
    if (cur.eof())
        cur.fail("document has no root element");
    if (cur.peek() != '<')
        cur.fail("expected '<'");
    XmlNode root = parse_element(cur, 0);
    skip_misc(cur);
    if (!cur.eof())
        cur.fail("trailing content after root element");
    return root;
}

XmlNode parse_xml_file(const std::filesystem::path& path) {
    return parse_xml(read_file(path));
}

} // namespace polcheck
