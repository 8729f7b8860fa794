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

#include "polcheck/consistency_checker.hpp"

#include "polcheck/errors.hpp"
#include "polcheck/text.hpp"

namespace polcheck {

std::string_view outcome_name(Outcome outcome) {
    switch (outcome) {
    case Outcome::Consistent: return "consistent";
    case Outcome::Contradicted: return "contradicted";
    case Outcome::Undeclared: return "undeclared";
    }
    return "unknown";
}

Verdict check_leak(const Triple& leak, const KnowledgeGraph& policy) {
    if (leak.action.negated)
        throw PreconditionError("check_leak: leak triples carry observed acts and are never "
                                "negated: " + leak.to_string());
    if (policy.kind() != KgKind::Policy)
        throw PreconditionError("check_leak: expected a policy graph");

    for (const Triple& declared : policy.triples()) {
        if (!actor_covers(declared.actor, leak.actor) || declared.data != leak.data)
            continue;
        if (declared.action == leak.action)
            return Verdict{leak, Outcome::Consistent, declared};
        if (declared.action == negate_action(leak.action))
            return Verdict{leak, Outcome::Contradicted, declared};
        // same actor and data but the other verb: not a decision, keep scanning
    }
    return Verdict{leak, Outcome::Undeclared, std::nullopt};
}

namespace {

void validate_verdict(const Verdict& v) {
    switch (v.outcome) {
    case Outcome::Consistent:
        if (!v.matched_policy || v.matched_policy->action != v.leak.action ||
            !actor_covers(v.matched_policy->actor, v.leak.actor) ||
            v.matched_policy->data != v.leak.data)
            throw Error("verdict soundness violated (consistent): " + v.leak.to_string());
        break;
    case Outcome::Contradicted:
        if (!v.matched_policy || v.matched_policy->action != negate_action(v.leak.action) ||
            !actor_covers(v.matched_policy->actor, v.leak.actor) ||
            v.matched_policy->data != v.leak.data)
            throw Error("verdict soundness violated (contradicted): " + v.leak.to_string());
        break;
    case Outcome::Undeclared:
        if (v.matched_policy)
            throw Error("verdict soundness violated (undeclared): " + v.leak.to_string());
        break;
    }
}

void warn_policy_self_conflicts(const KnowledgeGraph& policy, Diagnostics& diag) {
    const auto& triples = policy.triples();
    for (std::size_t i = 0; i < triples.size(); ++i) {
        for (std::size_t j = i + 1; j < triples.size(); ++j) {
            if (triples[i].actor == triples[j].actor && triples[i].data == triples[j].data &&
                triples[i].action == negate_action(triples[j].action)) {
                diag.warn("policy",
                          "policy declares both " + triples[i].to_string() + " (" +
                              triples[i].provenance.to_string() + ") and " +
                              triples[j].to_string() + " (" + triples[j].provenance.to_string() +
                              "); document order decides");
            }
        }
    }
}

} // namespace

std::vector<Verdict> check_all(const KnowledgeGraph& leaks, const KnowledgeGraph& policy,
                               Diagnostics* diag) {
    if (leaks.kind() != KgKind::Leak)
        throw PreconditionError("check_all: expected a leak graph");
    if (policy.kind() != KgKind::Policy)
        throw PreconditionError("check_all: expected a policy graph");

    if (diag)
        warn_policy_self_conflicts(policy, *diag);

    std::vector<Verdict> verdicts;
    verdicts.reserve(leaks.size());
    for (const Triple& leak : leaks.triples()) {
        Verdict v = check_leak(leak, policy);
        validate_verdict(v);
        verdicts.push_back(std::move(v));
    }
    return verdicts;
}

namespace {

constexpr const char* kPolishPrompt = "report_polish.v1";

std::string describe_actor(const Actor& actor) {
    if (actor.is_first_party())
        return "the app (first party)";
    if (actor.name().empty())
        return "a third party";
    return "third party \"" + actor.name() + "\"";
}

} // namespace

ReportText render_report(const Verdict& verdict, LlmClient* client,
                         const PromptCatalog* prompts, Diagnostics* diag) {
    if (verdict.outcome == Outcome::Consistent)
        throw PreconditionError("render_report: reports are only rendered for violations");

    std::string text;
    text += "Finding: " + std::string(outcome_name(verdict.outcome)) + "\n";
    text += "Observed flow: " + verdict.leak.to_string() + " at " +
            verdict.leak.provenance.to_string() + "\n";
    if (verdict.outcome == Outcome::Contradicted) {
        const Triple& p = *verdict.matched_policy;
        text += "Policy statement: " + p.to_string() + " at " + p.provenance.to_string() + "\n";
        text += "Explanation: " + describe_actor(verdict.leak.actor) + " was observed to " +
                verdict.leak.action.to_string() + " " + verdict.leak.data.id() +
                ", but the policy declares " + p.action.to_string() + " for " + p.data.id() +
                ".\n";
    } else {
        text += "Policy statement: none; no policy statement covers this actor and data type.\n";
        text += "Explanation: " + describe_actor(verdict.leak.actor) + " was observed to " +
                verdict.leak.action.to_string() + " " + verdict.leak.data.id() +
                ", and the policy does not declare this practice.\n";
    }

    ReportText report{text, std::nullopt};
    if (client && prompts) {
        try {
            ChatExchange exchange = client->complete(
                Stage::Report, kPolishPrompt, prompts->render(kPolishPrompt, {{"report", text}}));
            if (!trim(exchange.response).empty())
                report.polished = exchange.response;
        } catch (const Error& e) {
            if (diag)
                diag->warn(verdict.leak.provenance.to_string(),
                           std::string("report polishing failed, keeping the template text: ") +
                               e.what());
        }
    }
    return report;
}

nlohmann::json verdicts_to_json(const std::vector<Verdict>& verdicts) {
    nlohmann::json entries = nlohmann::json::array();
    for (const Verdict& v : verdicts) {
        nlohmann::json triple = {{"actor", v.leak.actor.to_string()},
                                 {"action", v.leak.action.to_string()},
                                 {"data", v.leak.data.id()}};
        nlohmann::json entry = {{"provenance", v.leak.provenance.to_string()},
                                {"outcome", std::string(outcome_name(v.outcome))},
                                {"leak", triple}};
        if (v.matched_policy) {
            entry["matched_policy"] = {{"actor", v.matched_policy->actor.to_string()},
                                       {"action", v.matched_policy->action.to_string()},
                                       {"data", v.matched_policy->data.id()},
                                       {"provenance", v.matched_policy->provenance.to_string()}};
        }
        entries.push_back(std::move(entry));
    }
    return {{"schema", "polcheck-verdicts"}, {"version", 1}, {"entries", entries}};
}

void save_verdicts(const std::filesystem::path& path, const std::vector<Verdict>& verdicts) {
    write_file(path, verdicts_to_json(verdicts).dump(2) + "\n");
}

std::vector<VerdictRecord> load_verdict_records(const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || j.value("schema", "") != "polcheck-verdicts" ||
        j.value("version", 0) != 1)
        throw ParseError("not a polcheck-verdicts v1 file: " + path.string());
    std::vector<VerdictRecord> records;
    for (const auto& e : j.at("entries")) {
        VerdictRecord r;
        r.provenance = e.at("provenance").get<std::string>();
        r.outcome = e.at("outcome").get<std::string>();
        if (r.outcome != "consistent" && r.outcome != "contradicted" &&
            r.outcome != "undeclared" && r.outcome != "violation")
            throw ParseError("unknown outcome '" + r.outcome + "' in " + path.string());
        records.push_back(std::move(r));
    }
    return records;
}

} // namespace polcheck
