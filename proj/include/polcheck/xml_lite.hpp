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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace polcheck {

/// A parsed XML element. Text content is accumulated across child text
/// nodes; attribute order is document order.
struct XmlNode {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<XmlNode> children;
    std::string text;
    std::size_t line = 0;
    std::size_t column = 0;

    const std::string* attribute(std::string_view key) const;
    const XmlNode* child(std::string_view name) const;
    std::vector<const XmlNode*> children_named(std::string_view name) const;
};

/// Strict parser for the XML subset that analysis-result files use:
/// one root element, nested elements, quoted attributes, comments, CDATA,
/// processing instructions, and the five standard character entities plus
/// numeric references. Raises ParseError with 1-based line/column on any
/// malformed input.
XmlNode parse_xml(std::string_view text);
XmlNode parse_xml_file(const std::filesystem::path& path);

} // namespace polcheck
