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
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace polcheck {

/// Versioned prompt templates loaded from a directory of .txt files.
/// A template's name is its file stem (e.g. "policy_extract.v1"), so prompt
/// wording changes are new files, and ledgers can reference name+version.
/// Placeholders are written {{key}}.
class PromptCatalog {
public:
    static PromptCatalog load(const std::filesystem::path& dir);

    bool has(const std::string& name) const { return templates_.count(name) > 0; }
    const std::string& raw(const std::string& name) const;

    /// Substitutes every {{key}}; an unknown template or a leftover
    /// placeholder is a configuration error.
    std::string render(const std::string& name,
                       const std::vector<std::pair<std::string, std::string>>& vars) const;

    std::vector<std::string> names() const;

private:
    std::map<std::string, std::string> templates_;
};

} // namespace polcheck
