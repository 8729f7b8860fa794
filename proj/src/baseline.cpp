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

#include "polcheck/baseline.hpp"

#include <json.hpp>

#include "polcheck/errors.hpp"
#include "polcheck/leak_extractor.hpp"
#include "polcheck/parallel.hpp"
#include "polcheck/text.hpp"

namespace polcheck {

namespace {

constexpr const char* kFlowsPrompt = "baseline_flows.v1";
constexpr const char* kMethodsPrompt = "baseline_methods.v1";
constexpr const char* kSimilarityPrompt = "baseline_similarity.v1";
constexpr const char* kReformatSuffix = "reformat_suffix.v1";

} // namespace

std::vector<std::string> chunk_text_at_lines(const std::string& content,
                                             std::size_t chunk_chars) {
    std::vector<std::string> chunks;
    std::string current;
    for (const std::string& line : split_lines(content)) {
        if (!current.empty() && current.size() + line.size() + 1 > chunk_chars) {
            chunks.push_back(current);
            current.clear();
        }
        if (!current.empty())
            current += "\n";
        current += line;
        while (current.size() > chunk_chars) { // a single oversized line: hard split
            chunks.push_back(current.substr(0, chunk_chars));
            current = current.substr(chunk_chars);
        }
    }
    if (!trim(current).empty())
        chunks.push_back(current);
    if (chunks.empty())
        chunks.push_back(content);
    return chunks;
}

std::string baseline_stage1(const std::vector<std::filesystem::path>& xml_paths,
                            LlmClient& client, const PromptCatalog& prompts,
                            std::size_t chunk_chars, Diagnostics& diag) {
    if (xml_paths.empty())
        throw PreconditionError("baseline_stage1: no input files");
    (void)diag;
    std::string summary;
    for (const auto& path : xml_paths) {
        const std::string content = read_file(path);
        const std::vector<std::string> chunks = chunk_text_at_lines(content, chunk_chars);
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            ChatExchange exchange = client.complete(
                Stage::BaselineStage1, kFlowsPrompt,
                prompts.render(kFlowsPrompt, {{"file", path.filename().string()},
                                              {"part", std::to_string(i + 1)},
                                              {"parts", std::to_string(chunks.size())},
                                              {"xml", chunks[i]}}));
            if (!summary.empty())
                summary += "\n";
            summary += trim(exchange.response);
        }
    }
    return summary;
}

namespace {

struct MethodList {
    std::vector<std::string> methods;
    bool well_formed = false;
};

MethodList parse_method_lines(const std::string& response) {
    MethodList out;
    for (const std::string& raw : split_lines(response)) {
        std::string line = trim(raw);
        if (line.empty())
            continue;
        if (to_lower(line) == "none") {
            out.well_formed = true;
            continue;
        }
        static constexpr std::string_view kPrefix = "method:";
        if (to_lower(line).rfind(kPrefix, 0) != 0)
            continue;
        std::string method = trim(line.substr(kPrefix.size()));
        if (!method.empty()) {
            out.methods.push_back(std::move(method));
            out.well_formed = true;
        }
    }
    return out;
}

} // namespace

std::vector<std::string> baseline_stage2(const std::string& summary, LlmClient& client,
                                         const PromptCatalog& prompts, Diagnostics& diag) {
    const std::string prompt = prompts.render(kMethodsPrompt, {{"summary", summary}});
    MethodList parsed =
        parse_method_lines(client.complete(Stage::BaselineStage2, kMethodsPrompt, prompt).response);
    if (!parsed.well_formed) {
        const std::string retry = prompt + "\n\n" + prompts.raw(kReformatSuffix);
        parsed = parse_method_lines(
            client.complete(Stage::BaselineStage2, kMethodsPrompt, retry).response);
        if (!parsed.well_formed) {
            diag.warn("baseline_stage2",
                      "model reply was malformed twice; no methods selected");
            return {};
        }
    }
    return parsed.methods;
}

namespace {

std::optional<bool> parse_answer_token(const std::string& response, std::string* rationale) {
    std::optional<bool> consistent;
    std::string rest;
    for (const std::string& raw : split_lines(response)) {
        std::string line = trim(raw);
        static constexpr std::string_view kPrefix = "answer:";
        if (!consistent && to_lower(line).rfind(kPrefix, 0) == 0) {
            std::string value = normalize_ws(line.substr(kPrefix.size()));
            if (value == "consistent")
                consistent = true;
            else if (value == "violation")
                consistent = false;
            continue;
        }
        if (!line.empty()) {
            if (!rest.empty())
                rest += " ";
            rest += line;
        }
    }
    if (rationale)
        *rationale = rest;
    return consistent;
}

} // namespace

std::vector<SimilarityJudgment> baseline_stage3(const std::vector<std::string>& methods,
                                                const std::string& policy_text,
                                                LlmClient& client, const PromptCatalog& prompts,
                                                Diagnostics& diag) {
    auto judge = [&](const std::string& method) -> std::optional<SimilarityJudgment> {
        const std::string prompt = prompts.render(
            kSimilarityPrompt, {{"policy", policy_text}, {"method", method}});
        std::string rationale;
        std::optional<bool> consistent = parse_answer_token(
            client.complete(Stage::BaselineStage3, kSimilarityPrompt, prompt).response,
            &rationale);
        if (!consistent) {
            const std::string retry = prompt + "\n\n" + prompts.raw(kReformatSuffix);
            consistent = parse_answer_token(
                client.complete(Stage::BaselineStage3, kSimilarityPrompt, retry).response,
                &rationale);
        }
        if (!consistent) {
            diag.warn("baseline_stage3", "no usable answer token for method: " + method);
            return std::nullopt;
        }
        return SimilarityJudgment{method, *consistent, rationale};
    };

    std::vector<std::optional<SimilarityJudgment>> raw =
        parallel_map(methods, client.parallelism(), judge);
    std::vector<SimilarityJudgment> out;
    for (auto& j : raw)
        if (j)
            out.push_back(std::move(*j));
    return out;
}

std::vector<BaselineEntry> run_baseline(const std::vector<std::filesystem::path>& xml_paths,
                                        const std::string& policy_text, LlmClient& client,
                                        const PromptCatalog& prompts, Diagnostics& diag,
                                        std::size_t chunk_chars) {
    if (trim(policy_text).empty())
        throw PreconditionError("run_baseline: empty policy text");

    const std::string summary =
        baseline_stage1(xml_paths, client, prompts, chunk_chars, diag);
    const std::vector<std::string> methods =
        baseline_stage2(summary, client, prompts, diag);
    const std::vector<SimilarityJudgment> judgments =
        baseline_stage3(methods, policy_text, client, prompts, diag);

    std::vector<BaselineEntry> entries;
    for (const auto& path : xml_paths) {
        FlowParseResult parsed;
        try {
            parsed = parse_flowdroid_xml(path);
        } catch (const ParseError& e) {
            diag.warn(path.filename().string(), std::string("skipped: ") + e.what());
            continue;
        }
        for (const FlowRecord& record : parsed.records) {
            BaselineEntry entry;
            entry.provenance = Provenance::flow(record.source_file, record.id).to_string();
            for (const SimilarityJudgment& j : judgments) {
                // a judged method covers a record when it is mentioned in
                // its sink/source methods or statements
                bool covers = record.sink_method.find(j.method) != std::string::npos ||
                              record.sink_statement.find(j.method) != std::string::npos;
                for (const FlowSource& s : record.sources)
                    covers = covers || s.method.find(j.method) != std::string::npos ||
                             s.statement.find(j.method) != std::string::npos;
                if (covers) {
                    entry.judged_methods.push_back(j.method);
                    if (!j.consistent)
                        entry.violation = true;
                }
            }
            entries.push_back(std::move(entry));
        }
    }
    return entries;
}

void save_baseline_verdicts(const std::filesystem::path& path,
                            const std::vector<BaselineEntry>& entries) {
    nlohmann::json out = nlohmann::json::array();
    for (const BaselineEntry& e : entries) {
        out.push_back({{"provenance", e.provenance},
                       {"outcome", e.violation ? "violation" : "consistent"},
                       {"judged_methods", e.judged_methods}});
    }
    nlohmann::json doc = {{"schema", "polcheck-verdicts"}, {"version", 1}, {"entries", out}};
    write_file(path, doc.dump(2) + "\n");
}

} // namespace polcheck
