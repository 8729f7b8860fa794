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

std::string trim(std::string_view s);
std::string to_lower(std::string_view s);
/// Lowercase, trim, and collapse internal whitespace runs to single spaces.
std::string normalize_ws(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_lines(std::string_view s);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// True when the text contains a negation token ("not", "never", "no",
/// "nor", "cannot", or an "n't" contraction) as a whole word.
bool has_negation_cue(std::string_view text);

/// Remove markup from an HTML document: script/style elements dropped,
/// tags replaced by whitespace, the standard character entities decoded,
/// whitespace collapsed.
std::string strip_html(std::string_view html);

/// Tab-separated key/value rows from a plain text table file.
/// Blank lines and lines starting with '#' are skipped.
std::vector<std::pair<std::string, std::string>> read_table_file(const std::filesystem::path& path);

} // namespace polcheck
