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
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "polcheck/triple.hpp"
#include "polcheck/vocab.hpp"

namespace polcheck {

enum class KgKind { Policy, Leak };

std::string_view kg_kind_name(KgKind kind);
KgKind kg_kind_from_name(std::string_view name);

/// An ordered, deduplicated collection of triples. Insertion order is
/// document order; a triple whose (actor, action, data) key already exists
/// is ignored, keeping the first occurrence.
class KnowledgeGraph {
public:
    explicit KnowledgeGraph(KgKind kind) : kind_(kind) {}

    KgKind kind() const { return kind_; }
    const std::vector<Triple>& triples() const { return triples_; }
    std::size_t size() const { return triples_.size(); }
    bool empty() const { return triples_.empty(); }

    /// Appends the triple unless its practice key is already present.
    /// Returns true when the triple was added. Throws PreconditionError if
    /// the triple's provenance style does not match the graph kind
    /// (policy graphs hold segment provenance, leak graphs flow provenance).
    bool insert(Triple t);

    bool operator==(const KnowledgeGraph& o) const {
        return kind_ == o.kind_ && triples_ == o.triples_;
    }
    bool operator!=(const KnowledgeGraph& o) const { return !(*this == o); }

    /// Line-oriented serialization: a "# polcheck-kg v1 kind=<kind>" header
    /// followed by one TAB-separated triple per line.
    std::string to_text() const;
    static KnowledgeGraph from_text(std::string_view text, const Taxonomy& taxonomy);

    nlohmann::json to_json() const;
    static KnowledgeGraph from_json(const nlohmann::json& j, const Taxonomy& taxonomy);

    /// Writes JSON for a .json extension, the line format otherwise.
    void save(const std::filesystem::path& path) const;
    static KnowledgeGraph load(const std::filesystem::path& path, const Taxonomy& taxonomy);

private:
    KgKind kind_;
    std::vector<Triple> triples_;
    std::unordered_set<std::string> keys_;
};

} // namespace polcheck
