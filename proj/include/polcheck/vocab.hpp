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
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "polcheck/triple.hpp"

namespace polcheck {

/// The canonical data-type list. Loaded from a tab-separated file
/// (id, display label); the shipped default has 14 entries.
class Taxonomy {
public:
    struct Entry {
        std::string id;
        std::string label;
    };

    static Taxonomy load(const std::filesystem::path& path);

    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }
    bool contains(std::string_view id) const;

    /// Builds a validated DataType; unknown ids are rejected.
    DataType make(std::string_view id) const;

    std::optional<DataType> find_id(std::string_view id) const;
    std::optional<DataType> find_label(std::string_view label) const; // case-insensitive

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_map<std::string, std::size_t> by_label_; // lowercased label
};

/// Controlled-vocabulary normalization backed by deterministic synonym
/// tables, shared by the policy and leak pipelines.
class Vocab {
public:
    /// Loads taxonomy.txt, data_synonyms.txt, and action_synonyms.txt from
    /// a data directory. Synonym targets are validated against the taxonomy
    /// and the closed action vocabulary.
    static Vocab load(const std::filesystem::path& data_dir);

    const Taxonomy& taxonomy() const { return taxonomy_; }

    /// Maps free text onto a taxonomy entry, or nullopt when unmapped.
    /// Canonical ids and labels map to themselves. Empty input is a
    /// precondition error.
    std::optional<DataType> normalize_data_type(std::string_view raw) const;

    /// Maps free text ("never share", "transmit", "not-collect") onto a
    /// legal Action, or nullopt when the verb is unknown.
    std::optional<Action> normalize_action(std::string_view raw) const;

    /// Maps actor text ("first-party", "third-party:flurry", "we") onto an
    /// Actor, or nullopt.
    std::optional<Actor> normalize_actor(std::string_view raw) const;

private:
    Taxonomy taxonomy_;
    std::unordered_map<std::string, std::string> data_synonyms_;   // phrase -> taxonomy id
    std::unordered_map<std::string, Action::Verb> action_synonyms_; // verb phrase -> verb
};

} // namespace polcheck
