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
#include <vector>

#include <json.hpp>

#include "polcheck/diagnostics.hpp"
#include "polcheck/knowledge_graph.hpp"
#include "polcheck/llm_client.hpp"
#include "polcheck/prompt_catalog.hpp"
#include "polcheck/triple.hpp"

namespace polcheck {

enum class Outcome { Consistent, Contradicted, Undeclared };

std::string_view outcome_name(Outcome outcome);

/// Per-leak result of the deterministic check. Consistent and Contradicted
/// carry the policy triple that decided them; Undeclared carries none.
/// For binary evaluation, Consistent is the negative class and both
/// Contradicted and Undeclared count as violations.
struct Verdict {
    Triple leak;
    Outcome outcome;
    std::optional<Triple> matched_policy;

    bool is_violation() const { return outcome != Outcome::Consistent; }
};

/// Checks one observed (non-negated) leak triple against the policy graph:
/// policy triples are scanned in document order; the first one whose actor
/// covers the leak's actor and whose data matches decides the verdict when
/// its action equals the leak action (Consistent) or its negation
/// (Contradicted); a matching actor+data triple with the other verb does
/// not decide, and the scan continues. No deciding triple: Undeclared.
Verdict check_leak(const Triple& leak, const KnowledgeGraph& policy);

/// One verdict per leak triple, in leak-graph order. Emits a warning per
/// (actor, data) pair for which the policy declares both an action and its
/// negation (document order then decides, which is worth surfacing).
/// Every returned verdict is re-validated against the actor/data/action
/// relations above.
std::vector<Verdict> check_all(const KnowledgeGraph& leaks, const KnowledgeGraph& policy,
                               Diagnostics* diag = nullptr);

/// Rendered violation description: always the deterministic template, plus
/// the model-polished rewrite when a client is supplied (failures degrade
/// to template-only with a warning). Calling this for a Consistent verdict
/// is a precondition error.
struct ReportText {
    std::string plain;
    std::optional<std::string> polished;
};

ReportText render_report(const Verdict& verdict, LlmClient* client = nullptr,
                         const PromptCatalog* prompts = nullptr, Diagnostics* diag = nullptr);

/// Verdict-file records shared by every pipeline (schema polcheck-verdicts
/// v1): a leak provenance, a machine-readable outcome, and optional triple
/// detail. The evaluation harness consumes only provenance and outcome, so
/// pipelines that produce bare binary judgments write the same files.
struct VerdictRecord {
    std::string provenance;
    std::string outcome; // consistent | contradicted | undeclared | violation
};

nlohmann::json verdicts_to_json(const std::vector<Verdict>& verdicts);
void save_verdicts(const std::filesystem::path& path, const std::vector<Verdict>& verdicts);
std::vector<VerdictRecord> load_verdict_records(const std::filesystem::path& path);

} // namespace polcheck
