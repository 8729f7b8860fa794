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

#include "polcheck/text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "polcheck/errors.hpp"

namespace polcheck {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

} // namespace

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b]))
        ++b;
    while (e > b && is_space(s[e - 1]))
        --e;
    return std::string(s.substr(b, e - b));
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string normalize_ws(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c : s) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::vector<std::string> split_lines(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == '\n') {
            std::string_view line = s.substr(start, i - start);
            if (!line.empty() && line.back() == '\r')
                line.remove_suffix(1);
            if (i < s.size() || !line.empty() || start < s.size())
                out.emplace_back(line);
            start = i + 1;
        }
    }
    if (!s.empty() && s.back() == '\n' && !out.empty() && out.back().empty())
        out.pop_back();
    return out;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError("cannot write file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw ConfigError("write failed: " + path.string());
}

bool has_negation_cue(std::string_view text) {
    std::string token;
    auto check = [&token]() {
        if (token.empty())
            return false;
        if (token == "not" || token == "never" || token == "no" || token == "nor" ||
            token == "cannot")
            return true;
        // contractions: don't, won't, doesn't, ...
        return token.size() >= 3 && token.compare(token.size() - 3, 3, "n't") == 0;
    };
    for (char raw : text) {
        char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'') {
            token.push_back(c);
        } else {
            if (check())
                return true;
            token.clear();
        }
    }
    return check();
}

std::string strip_html(std::string_view html) {
    std::string text;
    text.reserve(html.size());
    std::size_t i = 0;
    auto skip_until = [&](std::string_view close) {
        while (i < html.size()) {
            if (html.size() - i >= close.size()) {
                bool match = true;
                for (std::size_t k = 0; k < close.size(); ++k) {
                    char a = static_cast<char>(std::tolower(static_cast<unsigned char>(html[i + k])));
                    if (a != close[k]) {
                        match = false;
                        break;
                    }
                }
                if (match) {
                    i += close.size();
                    return;
                }
            }
            ++i;
        }
    };
    while (i < html.size()) {
        char c = html[i];
        if (c == '<') {
            std::string_view rest = html.substr(i);
            auto starts_ci = [&rest](std::string_view p) {
                if (rest.size() < p.size())
                    return false;
                for (std::size_t k = 0; k < p.size(); ++k) {
                    if (static_cast<char>(std::tolower(static_cast<unsigned char>(rest[k]))) != p[k])
                        return false;
                }
                return true;
            };
            if (starts_ci("<script")) {
                skip_until("</script>");
            } else if (starts_ci("<style")) {
                skip_until("</style>");
            } else if (starts_ci("<!--")) {
                skip_until("-->");
            } else {
                while (i < html.size() && html[i] != '>')
                    ++i;
                if (i < html.size())
                    ++i;
            }
            text.push_back(' ');
            continue;
        }
        if (c == '&') {
            static const std::pair<std::string_view, char> entities[] = {
                {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'},
                {"&apos;", '\''}, {"&nbsp;", ' '},
            };
            bool replaced = false;
            for (const auto& [name, ch] : entities) {
                if (html.substr(i, name.size()) == name) {
                    text.push_back(ch);
                    i += name.size();
                    replaced = true;
                    break;
                }
            }
            if (replaced)
                continue;
        }
        text.push_back(c);
        ++i;
    }
    // collapse whitespace, preserving nothing but single spaces
    std::string out;
    out.reserve(text.size());
    bool pending = false;
    for (char c : text) {
        if (is_space(c)) {
            pending = !out.empty();
            continue;
        }
        if (pending) {
            out.push_back(' ');
            pending = false;
        }
        out.push_back(c);
    }
    return out;
}

std::vector<std::pair<std::string, std::string>> read_table_file(const std::filesystem::path& path) {
    std::string content = read_file(path);
    std::vector<std::pair<std::string, std::string>> rows;
    std::size_t lineno = 0;
    for (const std::string& raw : split_lines(content)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#')
            continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path.string() + ": expected TAB-separated key/value", lineno, 1);
        std::string key = trim(line.substr(0, tab));
        std::string value = trim(line.substr(tab + 1));
        if (key.empty() || value.empty())
            throw ParseError(path.string() + ": empty key or value", lineno, 1);
        rows.emplace_back(std::move(key), std::move(value));
    }
    return rows;
}

} // namespace polcheck
