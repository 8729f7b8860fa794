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
#include <variant>
#include <vector>

#include "polcheck/diagnostics.hpp"
#include "polcheck/knowledge_graph.hpp"
#include "polcheck/llm_client.hpp"
#include "polcheck/prompt_catalog.hpp"
#include "polcheck/triple.hpp"
#include "polcheck/vocab.hpp"

namespace polcheck {

struct FlowSource {
    std::string statement;
    std::string method;
};

/// One sink with the source statements that reach it, as reported by the
/// static-analysis result file.
struct FlowRecord {
    std::size_t id = 0; // position among result elements, 0-based
    std::string sink_statement;
    std::string sink_method;
    std::vector<FlowSource> sources;
    std::string source_file; // basename of the result file
};

/// A per-result problem that did not abort the parse.
struct RecordIssue {
    std::size_t result_index = 0;
    std::string message;
};

struct FlowParseResult {
    std::vector<FlowRecord> records;
    std::vector<RecordIssue> issues;
    std::string format_version; // FileFormatVersion attribute, if present
};

/// Parses one analysis-result XML file: a results root with result
/// elements, each holding a sink (statement/method attributes) and one or
/// more sources. Malformed XML throws ParseError with line/column; a result
/// missing its sink or sources becomes a RecordIssue and parsing continues;
/// zero results is an empty list, not an error.
FlowParseResult parse_flowdroid_xml(const std::filesystem::path& path);
FlowParseResult parse_flowdroid_xml_text(std::string_view xml, std::string_view file_label);

/// Editable classification tables: source method -> data type id, sink
/// class prefix -> share/collect, SDK package prefix -> third-party name.
class RuleTables {
public:
    static RuleTables load(const std::filesystem::path& data_dir);

    /// Data type for a source method signature: exact signature match,
    /// then class#method fallback.
    std::optional<std::string> source_data_id(std::string_view method_sig) const;

    /// Share for egress sink classes (longest matching prefix), collect
    /// otherwise.
    Action::Verb sink_action(std::string_view method_sig) const;

    /// Third-party SDK name when the sink method's class matches a known
    /// package prefix.
    std::optional<std::string> sdk_name(std::string_view method_sig) const;

private:
    std::vector<std::pair<std::string, std::string>> source_methods_;   // signature -> data id
    std::vector<std::pair<std::string, std::string>> source_by_member_; // class#method -> data id
    std::vector<std::pair<std::string, Action::Verb>> sink_prefixes_;
    std::vector<std::pair<std::string, std::string>> sdk_prefixes_;
};

/// Class name inside a JVM-style method signature
/// "<com.example.Foo: void bar(int)>"; empty when the shape is unexpected.
std::string signature_class(std::string_view method_sig);
/// Method name inside the signature, e.g. "bar".
std::string signature_method(std::string_view method_sig);
/// The "<...>" signature of the API invoked inside a statement string
/// ("$r1 = virtualinvoke $r0.<android...: ... getDeviceId()>()"); empty when
/// the statement embeds none. Statements are parsed no further than this.
std::string invoked_signature(std::string_view statement);

struct Unclassifiable {
    std::string reason;
};

using FlowClass = std::variant<Triple, Unclassifiable>;

/// Maps one flow record onto a leak triple. Actor: third party when the
/// enclosing sink method sits in a known SDK package, else first party.
/// Action: share when the API invoked by the sink statement is an egress
/// class, collect otherwise. Data: the first source whose invoked API has a
/// known mapping. When a client is supplied, the model may override the
/// rule tables, but its answer must still validate against the vocabularies
/// (and leak actions are never negated); otherwise the rule result stands.
FlowClass classify_flow(const FlowRecord& record, const RuleTables& rules, const Vocab& vocab,
                        LlmClient* client, const PromptCatalog* prompts, Diagnostics& diag);

struct FileSummary {
    std::string file;
    bool parse_failed = false;
    std::string error;
    std::size_t records = 0;
    std::size_t classified = 0;
    std::size_t issues = 0;
};

struct LeakExtraction {
    KnowledgeGraph kg{KgKind::Leak};
    std::vector<FileSummary> files;

    std::size_t parsed_files() const;
};

/// Parses and classifies a batch of result files (parallel per file) and
/// merges the triples in (file order, record order) with deduplication.
/// A file that fails to parse is reported in its summary; the batch
/// continues. Unclassifiable records are dropped with a warning.
LeakExtraction extract_leak_kg(const std::vector<std::filesystem::path>& paths,
                               const RuleTables& rules, const Vocab& vocab, LlmClient* client,
                               const PromptCatalog* prompts, Diagnostics& diag,
                               int parallelism = 4);

} // namespace polcheck
