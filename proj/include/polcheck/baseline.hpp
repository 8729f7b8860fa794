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
#include <vector>

#include "polcheck/diagnostics.hpp"
#include "polcheck/llm_client.hpp"
#include "polcheck/prompt_catalog.hpp"

namespace polcheck {

/// The pure-model comparison pipeline: (1) summarize raw analysis XML into
/// events and data flows, (2) pick the privacy-relevant methods, (3) judge
/// each method against the policy text. It shares the client (and so the
/// usage ledger) with the hybrid pipeline and writes the same verdict file
/// schema, keyed by the same flow provenances.

struct SimilarityJudgment {
    std::string method;
    bool consistent = false;
    std::string rationale;
};

/// Splits text into chunks of at most chunk_chars, cutting at line
/// boundaries (an oversized single line is hard-split).
std::vector<std::string> chunk_text_at_lines(const std::string& content,
                                             std::size_t chunk_chars);

/// Stage 1: prompts the model with raw XML, chunked at line boundaries to
/// at most chunk_chars per exchange; returns the concatenated summaries.
std::string baseline_stage1(const std::vector<std::filesystem::path>& xml_paths,
                            LlmClient& client, const PromptCatalog& prompts,
                            std::size_t chunk_chars, Diagnostics& diag);

/// Stage 2: extracts the model's "method:" list from the flow summary.
/// A malformed reply is re-asked once, then yields an empty list and a
/// warning.
std::vector<std::string> baseline_stage2(const std::string& summary, LlmClient& client,
                                         const PromptCatalog& prompts, Diagnostics& diag);

/// Stage 3: one exchange per method (policy text in the prompt); the
/// verdict comes from a mandated "answer:" token. Parallel under the
/// client's bound.
std::vector<SimilarityJudgment> baseline_stage3(const std::vector<std::string>& methods,
                                                const std::string& policy_text,
                                                LlmClient& client, const PromptCatalog& prompts,
                                                Diagnostics& diag);

/// Per-flow binary verdict produced by mapping judged methods back onto the
/// flow records that contain them. A record covered by at least one
/// violation-judged method is a violation; a record not covered by any
/// judged method was never flagged and counts as consistent.
struct BaselineEntry {
    std::string provenance; // flow:<file>#<record>
    bool violation = false;
    std::vector<std::string> judged_methods;
};

std::vector<BaselineEntry> run_baseline(const std::vector<std::filesystem::path>& xml_paths,
                                        const std::string& policy_text, LlmClient& client,
                                        const PromptCatalog& prompts, Diagnostics& diag,
                                        std::size_t chunk_chars = 6000);

/// Same file schema as the hybrid verdicts (outcome "violation" or
/// "consistent"), so the evaluation harness is pipeline-agnostic.
void save_baseline_verdicts(const std::filesystem::path& path,
                            const std::vector<BaselineEntry>& entries);

} // namespace polcheck
