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

#include <string>
#include <string_view>
#include <vector>

#include "polcheck/diagnostics.hpp"
#include "polcheck/knowledge_graph.hpp"
#include "polcheck/llm_client.hpp"
#include "polcheck/prompt_catalog.hpp"
#include "polcheck/vocab.hpp"

namespace polcheck {

/// A sentence (or unterminated clause) of the policy document, with its
/// character span in the source text. Spans are ordered, non-overlapping,
/// and jointly cover every non-whitespace character.
struct PolicySegment {
    std::size_t index = 0;
    std::string text;
    std::size_t begin = 0; // [begin, end) into the document
    std::size_t end = 0;
};

/// Deterministic sentence-level segmentation: boundaries at terminal
/// punctuation followed by whitespace, at blank lines, and at end of input.
/// Empty or whitespace-only documents are a precondition error.
std::vector<PolicySegment> segment_policy(std::string_view doc);

/// One raw (actor, action, data) mention as returned by the model, before
/// vocabulary normalization.
struct RawCandidate {
    std::string actor_text;
    std::string action_text;
    std::string data_text;
};

/// Asks the model for the data practices declared in one segment. The
/// prompt mandates "practice: <actor> | <action> | <data>" lines (or
/// "none"); a malformed reply triggers one reformat retry, after which the
/// segment yields no candidates and a warning.
std::vector<RawCandidate> extract_candidates(const PolicySegment& segment, LlmClient& client,
                                             const PromptCatalog& prompts, Diagnostics& diag);

/// Full policy-to-graph conversion: segmentation, per-segment extraction
/// (parallel under the client's bound, merged in segment order), negation
/// re-ask, vocabulary normalization, and deduplication. Candidates with an
/// unmapped data type (or unknown actor/action wording) are dropped with a
/// warning.
KnowledgeGraph read_policy(std::string_view doc, LlmClient& client, const PromptCatalog& prompts,
                           const Vocab& vocab, Diagnostics& diag);

} // namespace polcheck
