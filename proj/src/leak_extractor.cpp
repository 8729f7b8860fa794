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

#include "polcheck/leak_extractor.hpp"

#include <algorithm>

#include "polcheck/errors.hpp"
#include "polcheck/parallel.hpp"
#include "polcheck/text.hpp"
#include "polcheck/xml_lite.hpp"

namespace polcheck {

namespace {

// Element/attribute names as emitted by the analysis tool's serializer.
// Case-insensitive lookups tolerate serializer drift across versions.
std::string lower(std::string_view s) {
    return to_lower(s);
}

const XmlNode* find_child_ci(const XmlNode& node, std::string_view name) {
    std::string want = lower(name);
    for (const XmlNode& c : node.children)
        if (lower(c.name) == want)
            return &c;
    return nullptr;
}

std::vector<const XmlNode*> children_ci(const XmlNode& node, std::string_view name) {
    std::string want = lower(name);
    std::vector<const XmlNode*> out;
    for (const XmlNode& c : node.children)
        if (lower(c.name) == want)
            out.push_back(&c);
    return out;
}

const std::string* attr_ci(const XmlNode& node, std::string_view name) {
    std::string want = lower(name);
    for (const auto& [k, v] : node.attributes)
        if (lower(k) == want)
            return &v;
    return nullptr;
}

} // namespace

FlowParseResult parse_flowdroid_xml_text(std::string_view xml, std::string_view file_label) {
    XmlNode root = parse_xml(xml);

    const XmlNode* results = nullptr;
    if (lower(root.name) == "results") {
        results = &root;
    } else {
        results = find_child_ci(root, "Results");
        if (!results)
            throw ParseError("no <Results> element under root <" + root.name + ">");
    }

    FlowParseResult out;
    if (const std::string* version = attr_ci(root, "FileFormatVersion"))
        out.format_version = *version;

    std::size_t index = 0;
    for (const XmlNode* result : children_ci(*results, "Result")) {
        const std::size_t id = index++;
        const XmlNode* sink = find_child_ci(*result, "Sink");
        if (!sink) {
            out.issues.push_back({id, "result has no sink element"});
            continue;
        }
        const std::string* sink_stmt = attr_ci(*sink, "Statement");
        const std::string* sink_method = attr_ci(*sink, "Method");
        if (!sink_stmt || !sink_method || trim(*sink_stmt).empty() ||
            trim(*sink_method).empty()) {
            out.issues.push_back({id, "sink is missing its statement or method attribute"});
            continue;
        }
        const XmlNode* sources = find_child_ci(*result, "Sources");
        if (!sources) {
            out.issues.push_back({id, "result has no sources element"});
            continue;
        }
        FlowRecord record;
        record.id = id;
        record.sink_statement = trim(*sink_stmt);
        record.sink_method = trim(*sink_method);
        record.source_file = std::string(file_label);
        for (const XmlNode* source : children_ci(*sources, "Source")) {
            const std::string* stmt = attr_ci(*source, "Statement");
            const std::string* method = attr_ci(*source, "Method");
            if (!stmt || !method || trim(*method).empty()) {
                out.issues.push_back({id, "source is missing its statement or method attribute"});
                continue;
            }
            record.sources.push_back({trim(*stmt), trim(*method)});
        }
        if (record.sources.empty()) {
            out.issues.push_back({id, "result has no usable source elements"});
            continue;
        }
        out.records.push_back(std::move(record));
    }
    return out;
}

FlowParseResult parse_flowdroid_xml(const std::filesystem::path& path) {
    std::string content = read_file(path);
    try {
        return parse_flowdroid_xml_text(content, path.filename().string());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string signature_class(std::string_view method_sig) {
    std::string sig = trim(method_sig);
    if (sig.size() < 2 || sig.front() != '<')
        return {};
    std::size_t colon = sig.find(':');
    if (colon == std::string::npos)
        return {};
    return trim(std::string_view(sig).substr(1, colon - 1));
}

std::string signature_method(std::string_view method_sig) {
    std::string sig = trim(method_sig);
    std::size_t colon = sig.find(':');
    std::size_t paren = sig.find('(');
    if (colon == std::string::npos || paren == std::string::npos || paren < colon)
        return {};
    std::string_view middle = std::string_view(sig).substr(colon + 1, paren - colon - 1);
    std::size_t space = middle.rfind(' ');
    if (space == std::string_view::npos)
        return trim(middle);
    return trim(middle.substr(space + 1));
}

std::string invoked_signature(std::string_view statement) {
    std::size_t open = statement.find('<');
    if (open == std::string_view::npos)
        return {};
    std::size_t close = statement.find('>', open);
    if (close == std::string_view::npos)
        return {};
    std::string sig(statement.substr(open, close - open + 1));
    // must look like "<class: ret name(args)>"
    if (sig.find(':') == std::string::npos || sig.find('(') == std::string::npos)
        return {};
    return sig;
}

RuleTables RuleTables::load(const std::filesystem::path& data_dir) {
    RuleTables tables;
    for (auto& [sig, data_id] : read_table_file(data_dir / "source_methods.txt")) {
        std::string cls = signature_class(sig);
        std::string method = signature_method(sig);
        if (!cls.empty() && !method.empty())
            tables.source_by_member_.emplace_back(cls + "#" + method, data_id);
        tables.source_methods_.emplace_back(sig, data_id);
    }
    for (auto& [prefix, action] : read_table_file(data_dir / "sink_methods.txt")) {
        std::string a = normalize_ws(action);
        if (a != "share" && a != "collect")
            throw ConfigError("sink_methods.txt action must be share or collect: " + prefix);
        tables.sink_prefixes_.emplace_back(
            prefix, a == "share" ? Action::Verb::Share : Action::Verb::Collect);
    }
    for (auto& [prefix, name] : read_table_file(data_dir / "sdk_prefixes.txt"))
        tables.sdk_prefixes_.emplace_back(prefix, normalize_ws(name));
    return tables;
}

std::optional<std::string> RuleTables::source_data_id(std::string_view method_sig) const {
    std::string sig = trim(method_sig);
    for (const auto& [key, data_id] : source_methods_)
        if (key == sig)
            return data_id;
    std::string cls = signature_class(sig);
    std::string method = signature_method(sig);
    if (!cls.empty() && !method.empty()) {
        std::string member = cls + "#" + method;
        for (const auto& [key, data_id] : source_by_member_)
            if (key == member)
                return data_id;
    }
    return std::nullopt;
}

Action::Verb RuleTables::sink_action(std::string_view method_sig) const {
    std::string cls = signature_class(method_sig);
    if (cls.empty())
        cls = trim(method_sig);
    std::size_t best_len = 0;
    Action::Verb best = Action::Verb::Collect;
    for (const auto& [prefix, verb] : sink_prefixes_) {
        if (cls.rfind(prefix, 0) == 0 && prefix.size() > best_len) {
            best_len = prefix.size();
            best = verb;
        }
    }
    return best;
}

std::optional<std::string> RuleTables::sdk_name(std::string_view method_sig) const {
    std::string cls = signature_class(method_sig);
    if (cls.empty())
        return std::nullopt;
    std::size_t best_len = 0;
    std::optional<std::string> best;
    for (const auto& [prefix, name] : sdk_prefixes_) {
        if (cls.rfind(prefix, 0) == 0 && prefix.size() > best_len) {
            best_len = prefix.size();
            best = name;
        }
    }
    return best;
}

namespace {

constexpr const char* kLeakMapPrompt = "leak_map.v1";

std::string taxonomy_id_list(const Vocab& vocab) {
    std::string out;
    for (const auto& entry : vocab.taxonomy().entries()) {
        if (!out.empty())
            out += ", ";
        out += entry.id;
    }
    return out;
}

std::string describe_record(const FlowRecord& record) {
    std::string out = "sink method: " + record.sink_method + "\n";
    out += "sink statement: " + record.sink_statement + "\n";
    for (const FlowSource& s : record.sources) {
        out += "source method: " + s.method + "\n";
        out += "source statement: " + s.statement + "\n";
    }
    return out;
}

// Expects a single "leak: <actor> | <action> | <data>" line.
std::optional<Triple> parse_llm_leak(const std::string& response, const Vocab& vocab,
                                     Provenance provenance) {
    for (const std::string& raw : split_lines(response)) {
        std::string line = trim(raw);
        static constexpr std::string_view kPrefix = "leak:";
        if (line.rfind(kPrefix, 0) != 0)
            continue;
        std::vector<std::string> parts = split(line.substr(kPrefix.size()), '|');
        if (parts.size() != 3)
            return std::nullopt;
        auto actor = vocab.normalize_actor(parts[0]);
        auto action = vocab.normalize_action(parts[1]);
        auto data = vocab.normalize_data_type(parts[2]);
        if (!actor || !action || !data)
            return std::nullopt;
        if (action->negated)
            return std::nullopt; // a leak is an observed positive act
        return Triple{*actor, *action, *data, provenance};
    }
    return std::nullopt;
}

} // namespace

FlowClass classify_flow(const FlowRecord& record, const RuleTables& rules, const Vocab& vocab,
                        LlmClient* client, const PromptCatalog* prompts, Diagnostics& diag) {
    Provenance provenance = Provenance::flow(record.source_file, record.id);

    // rule-table route. Data comes from the API a source statement invokes;
    // the enclosing method attribute is the fallback for statements that
    // embed no signature.
    std::optional<Triple> by_rules;
    std::optional<std::string> data_id;
    for (const FlowSource& s : record.sources) {
        std::string api = invoked_signature(s.statement);
        if (!api.empty() && (data_id = rules.source_data_id(api)))
            break;
        if ((data_id = rules.source_data_id(s.method)))
            break;
    }
    if (data_id) {
        auto data = vocab.normalize_data_type(*data_id);
        if (!data)
            throw ConfigError("source table maps to unknown data type: " + *data_id);
        // The enclosing sink method tells whose code the data reached; the
        // invoked sink API tells whether it left the device or process.
        Actor actor = Actor::first_party();
        if (auto sdk = rules.sdk_name(record.sink_method))
            actor = Actor::third_party(*sdk);
        std::string sink_api = invoked_signature(record.sink_statement);
        Action action{rules.sink_action(sink_api.empty() ? record.sink_method : sink_api),
                      false};
        by_rules = Triple{actor, action, *data, provenance};
    }

    // optional model route; it may override the tables but must validate
    if (client && prompts) {
        ChatExchange exchange =
            client->complete(Stage::LeakMap, kLeakMapPrompt,
                             prompts->render(kLeakMapPrompt,
                                             {{"record", describe_record(record)},
                                              {"taxonomy", taxonomy_id_list(vocab)}}));
        if (auto by_llm = parse_llm_leak(exchange.response, vocab, provenance))
            return *by_llm;
        diag.warn(provenance.to_string(),
                  "model classification was malformed or out of vocabulary; "
                  "falling back to rule tables");
    }

    if (by_rules)
        return *by_rules;
    return Unclassifiable{"no source method maps to a known data type"};
}

std::size_t LeakExtraction::parsed_files() const {
    return static_cast<std::size_t>(
        std::count_if(files.begin(), files.end(),
                      [](const FileSummary& f) { return !f.parse_failed; }));
}

LeakExtraction extract_leak_kg(const std::vector<std::filesystem::path>& paths,
                               const RuleTables& rules, const Vocab& vocab, LlmClient* client,
                               const PromptCatalog* prompts, Diagnostics& diag,
                               int parallelism) {
    if (paths.empty())
        throw PreconditionError("extract_leak_kg: no input files");

    struct FileResult {
        FileSummary summary;
        std::vector<FlowClass> classes;
        std::vector<Provenance> provenances;
    };

    int workers = client ? client->parallelism() : std::max(1, parallelism);
    std::vector<FileResult> results =
        parallel_map(paths, workers, [&](const std::filesystem::path& path) {
            FileResult fr;
            fr.summary.file = path.filename().string();
            FlowParseResult parsed;
            try {
                parsed = parse_flowdroid_xml(path);
            } catch (const ParseError& e) {
                fr.summary.parse_failed = true;
                fr.summary.error = e.what();
                return fr;
            } catch (const ConfigError& e) {
                fr.summary.parse_failed = true;
                fr.summary.error = e.what();
                return fr;
            }
            fr.summary.records = parsed.records.size();
            fr.summary.issues = parsed.issues.size();
            for (const RecordIssue& issue : parsed.issues)
                diag.warn(fr.summary.file + "#" + std::to_string(issue.result_index),
                          issue.message);
            for (const FlowRecord& record : parsed.records) {
                fr.provenances.push_back(Provenance::flow(record.source_file, record.id));
                fr.classes.push_back(
                    classify_flow(record, rules, vocab, client, prompts, diag));
            }
            return fr;
        });

    LeakExtraction out;
    for (FileResult& fr : results) {
        if (fr.summary.parse_failed) {
            diag.warn(fr.summary.file, "skipped: " + fr.summary.error);
            out.files.push_back(std::move(fr.summary));
            continue;
        }
        for (std::size_t i = 0; i < fr.classes.size(); ++i) {
            if (auto* triple = std::get_if<Triple>(&fr.classes[i])) {
                out.kg.insert(*triple);
                ++fr.summary.classified;
            } else {
                diag.warn(fr.provenances[i].to_string(),
                          "unclassifiable: " + std::get<Unclassifiable>(fr.classes[i]).reason);
            }
        }
        out.files.push_back(std::move(fr.summary));
    }
    return out;
}

} // namespace polcheck
