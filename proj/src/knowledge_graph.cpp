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

#include "polcheck/knowledge_graph.hpp"

#include "polcheck/errors.hpp"
#include "polcheck/text.hpp"

namespace polcheck {

namespace {

constexpr std::string_view kTextHeaderPrefix = "# polcheck-kg v1 kind=";
constexpr int kJsonVersion = 1;

void check_provenance_style(KgKind kind, const Triple& t) {
    const bool ok = (kind == KgKind::Policy &&
                     t.provenance.kind() == Provenance::Kind::PolicySegment) ||
                    (kind == KgKind::Leak && t.provenance.kind() == Provenance::Kind::FlowRecord);
    if (!ok)
        throw PreconditionError("triple provenance " + t.provenance.to_string() +
                                " does not match graph kind " +
                                std::string(kg_kind_name(kind)));
}

} // namespace

std::string_view kg_kind_name(KgKind kind) {
    return kind == KgKind::Policy ? "policy" : "leak";
}

KgKind kg_kind_from_name(std::string_view name) {
    std::string n = trim(name);
    if (n == "policy")
        return KgKind::Policy;
    if (n == "leak")
        return KgKind::Leak;
    throw ParseError("unknown knowledge-graph kind: " + n);
}

bool KnowledgeGraph::insert(Triple t) {
    check_provenance_style(kind_, t);
    if (!keys_.insert(t.practice_key()).second)
        return false;
    triples_.push_back(std::move(t));
    return true;
}

std::string KnowledgeGraph::to_text() const {
    std::string out(kTextHeaderPrefix);
    out += kg_kind_name(kind_);
    out += "\n";
    for (const Triple& t : triples_) {
        out += t.actor.to_string();
        out += '\t';
        out += t.action.to_string();
        out += '\t';
        out += t.data.id();
        out += '\t';
        out += t.provenance.to_string();
        out += '\n';
    }
    return out;
}

KnowledgeGraph KnowledgeGraph::from_text(std::string_view text, const Taxonomy& taxonomy) {
    std::vector<std::string> lines = split_lines(text);
    if (lines.empty() || lines[0].rfind(kTextHeaderPrefix, 0) != 0)
        throw ParseError("missing knowledge-graph header line", 1, 1);
    KnowledgeGraph kg(kg_kind_from_name(lines[0].substr(kTextHeaderPrefix.size())));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() != 4)
            throw ParseError("expected 4 TAB-separated fields", i + 1, 1);
        Triple t{Actor::parse(cols[0]), Action::parse(cols[1]), taxonomy.make(cols[2]),
                 Provenance::parse(cols[3])};
        kg.insert(std::move(t));
    }
    return kg;
}

nlohmann::json KnowledgeGraph::to_json() const {
    nlohmann::json triples = nlohmann::json::array();
    for (const Triple& t : triples_) {
        triples.push_back({{"actor", t.actor.to_string()},
                           {"action", t.action.to_string()},
                           {"data", t.data.id()},
                           {"provenance", t.provenance.to_string()}});
    }
    return {{"schema", "polcheck-kg"},
            {"version", kJsonVersion},
            {"kind", std::string(kg_kind_name(kind_))},
            {"triples", triples}};
}

KnowledgeGraph KnowledgeGraph::from_json(const nlohmann::json& j, const Taxonomy& taxonomy) {
    if (!j.is_object() || j.value("schema", "") != "polcheck-kg")
        throw ParseError("not a polcheck-kg document");
    if (j.value("version", 0) != kJsonVersion)
        throw ParseError("unsupported polcheck-kg version");
    KnowledgeGraph kg(kg_kind_from_name(j.at("kind").get<std::string>()));
    for (const auto& e : j.at("triples")) {
        Triple t{Actor::parse(e.at("actor").get<std::string>()),
                 Action::parse(e.at("action").get<std::string>()),
                 taxonomy.make(e.at("data").get<std::string>()),
                 Provenance::parse(e.at("provenance").get<std::string>())};
        kg.insert(std::move(t));
    }
    return kg;
}

void KnowledgeGraph::save(const std::filesystem::path& path) const {
    if (path.extension() == ".json")
        write_file(path, to_json().dump(2) + "\n");
    else
        write_file(path, to_text());
}

KnowledgeGraph KnowledgeGraph::load(const std::filesystem::path& path, const Taxonomy& taxonomy) {
    std::string content = read_file(path);
    if (path.extension() == ".json") {
        nlohmann::json j = nlohmann::json::parse(content, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded())
            throw ParseError("invalid JSON in " + path.string());
        return from_json(j, taxonomy);
    }
    return from_text(content, taxonomy);
}

} // namespace polcheck
