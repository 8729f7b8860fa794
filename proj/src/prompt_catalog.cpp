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

#include "polcheck/prompt_catalog.hpp"

#include <algorithm>

#include "polcheck/errors.hpp"
#include "polcheck/text.hpp"

namespace polcheck {

PromptCatalog PromptCatalog::load(const std::filesystem::path& dir) {
    if (!std::filesystem::is_directory(dir))
        throw ConfigError("prompt directory not found: " + dir.string());
    PromptCatalog catalog;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt")
            continue;
        catalog.templates_[entry.path().stem().string()] = read_file(entry.path());
    }
    if (catalog.templates_.empty())
        throw ConfigError("no prompt templates (*.txt) in " + dir.string());
    return catalog;
}

const std::string& PromptCatalog::raw(const std::string& name) const {
    auto it = templates_.find(name);
    if (it == templates_.end())
        throw ConfigError("unknown prompt template: " + name);
    return it->second;
}

std::string PromptCatalog::render(
    const std::string& name,
    const std::vector<std::pair<std::string, std::string>>& vars) const {
    std::string out = raw(name);
    for (const auto& [key, value] : vars) {
        const std::string placeholder = "{{" + key + "}}";
        std::size_t pos = 0;
        while ((pos = out.find(placeholder, pos)) != std::string::npos) {
            out.replace(pos, placeholder.size(), value);
            pos += value.size();
        }
    }
    std::size_t leftover = out.find("{{");
    if (leftover != std::string::npos && out.find("}}", leftover) != std::string::npos)
        throw ConfigError("unbound placeholder in prompt template " + name + ": " +
                          out.substr(leftover, out.find("}}", leftover) - leftover + 2));
    return out;
}

std::vector<std::string> PromptCatalog::names() const {
    std::vector<std::string> out;
    out.reserve(templates_.size());
    for (const auto& [name, _] : templates_)
        out.push_back(name);
    return out;
}

} // namespace polcheck
