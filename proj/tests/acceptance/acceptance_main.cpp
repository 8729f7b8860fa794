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

// Acceptance suite: runs every release criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code is the number of
// failed criteria.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "polcheck/baseline.hpp"
#include "polcheck/consistency_checker.hpp"
#include "polcheck/digest.hpp"
#include "polcheck/errors.hpp"
#include "polcheck/eval_harness.hpp"
#include "polcheck/knowledge_graph.hpp"
#include "polcheck/leak_extractor.hpp"
#include "polcheck/llm_client.hpp"
#include "polcheck/text.hpp"
#include "polcheck/triple.hpp"
#include "polcheck/vocab.hpp"

namespace fs = std::filesystem;
using namespace polcheck;

namespace {

int g_criterion_failures = 0;

#define EXPECT(cond, msg)                                                                      \
    do {                                                                                       \
        if (!(cond)) {                                                                         \
            std::cout << "       expect failed at " << __FILE__ << ":" << __LINE__ << ": "     \
                      << msg << "\n";                                                          \
            ++g_criterion_failures;                                                            \
        }                                                                                      \
    } while (0)

fs::path repo_root() {
#ifdef POLCHECK_SOURCE_DIR
    return fs::path(POLCHECK_SOURCE_DIR);
#else
    return fs::current_path();
#endif
}

std::string cli_path() {
#ifdef POLCHECK_CLI_PATH
    return POLCHECK_CLI_PATH;
#else
    return "polcheck";
#endif
}

fs::path fixtures() { return repo_root() / "tests/fixtures"; }

const Vocab& vocab() {
    static Vocab v = Vocab::load(repo_root() / "data");
    return v;
}

int sh(const std::string& cmd) {
    int status = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

struct Criterion {
    const char* name;
    void (*run)();
};

// ---------------------------------------------------------------------------
// shared corpus layout: five policies, seventeen result files
// ---------------------------------------------------------------------------

struct Group {
    std::string policy;
    std::vector<std::string> xml;
};

const std::vector<Group>& groups() {
    static std::vector<Group> g = {
        {"policy01.txt", {"app01.xml", "app02.xml", "app03.xml", "app04.xml"}},
        {"policy02.txt", {"app05.xml", "app06.xml", "app07.xml", "app08.xml"}},
        {"policy03.txt", {"app09.xml", "app10.xml", "app11.xml"}},
        {"policy04.txt", {"app12.xml", "app13.xml", "app14.xml"}},
        {"policy05.txt", {"app15.xml", "app16.xml", "app17.xml"}},
    };
    return g;
}

std::string common_flags() {
    return " --data-dir " + q(repo_root() / "data") + " --prompts-dir " +
           q(repo_root() / "prompts");
}

// Runs the whole hybrid + baseline pipeline into out_dir and returns a
// digest per produced file. with_baseline also drives the pure-model runs.
std::map<std::string, std::string> run_pipeline(const fs::path& out_dir, bool with_baseline) {
    fs::create_directories(out_dir);
    std::string hybrid_verdicts, baseline_verdicts;
    for (std::size_t i = 0; i < groups().size(); ++i) {
        const Group& g = groups()[i];
        const std::string tag = std::to_string(i + 1);
        std::string xmls;
        for (const std::string& x : g.xml)
            xmls += " " + q(fixtures() / "xml" / x);

        EXPECT(sh(cli_path() + " read-policy " + q(fixtures() / "policies" / g.policy) +
                  " --out " + q(out_dir / ("policy" + tag + ".json")) + common_flags() +
                  " --backend replay --replay " + q(fixtures() / "replay/policy_read.json")) ==
                   0,
               "read-policy failed for " << g.policy);
        EXPECT(sh(cli_path() + " extract-leaks" + xmls + " --out " +
                  q(out_dir / ("leaks" + tag + ".json")) + common_flags()) == 0,
               "extract-leaks failed for group " << tag);
        const int check_rc =
            sh(cli_path() + " check --policy " + q(out_dir / ("policy" + tag + ".json")) +
               " --leaks " + q(out_dir / ("leaks" + tag + ".json")) + " --out " +
               q(out_dir / ("verdicts" + tag + ".json")) + common_flags());
        EXPECT(check_rc == 0 || check_rc == 1, "check crashed for group " << tag);

        if (with_baseline) {
            const int rc =
                sh(cli_path() + " baseline --policy " + q(fixtures() / "policies" / g.policy) +
                   xmls + " --out " + q(out_dir / ("baseline" + tag + ".json")) +
                   common_flags() + " --backend replay --replay " +
                   q(fixtures() / "replay/baseline.json"));
            EXPECT(rc == 0 || rc == 1, "baseline crashed for group " << tag);
            baseline_verdicts += (baseline_verdicts.empty() ? "" : ",") +
                                 (out_dir / ("baseline" + tag + ".json")).string();
        }
        hybrid_verdicts += (hybrid_verdicts.empty() ? "" : ",") +
                           (out_dir / ("verdicts" + tag + ".json")).string();
    }

    std::string eval_cmd = cli_path() + " evaluate --truth " +
                           q(fixtures() / "truth/ground_truth.txt") + " --verdicts hybrid=" +
                           hybrid_verdicts;
    if (with_baseline)
        eval_cmd += " --verdicts baseline=" + baseline_verdicts;
    eval_cmd += " --csv " + q(out_dir / "eval.csv");
    EXPECT(sh(eval_cmd) == 0, "evaluate failed");

    std::map<std::string, std::string> digests;
    for (const auto& entry : fs::directory_iterator(out_dir))
        if (entry.is_regular_file())
            digests[entry.path().filename().string()] = sha256_hex(read_file(entry.path()));
    return digests;
}

// ---------------------------------------------------------------------------
// criterion 1: checker verdicts match a brute-force first-match oracle
// ---------------------------------------------------------------------------

struct OracleResult {
    Outcome outcome;
    std::optional<std::size_t> index;
};

OracleResult brute_force_first_match(const Triple& leak, const std::vector<Triple>& policy) {
    for (std::size_t i = 0; i < policy.size(); ++i) {
        const Triple& p = policy[i];
        bool actors_match = p.actor.kind() == leak.actor.kind();
        if (actors_match && p.actor.kind() == Actor::Kind::ThirdParty)
            actors_match = p.actor.name().empty() || p.actor.name() == leak.actor.name();
        if (!actors_match || !(p.data == leak.data))
            continue;
        if (p.action == leak.action)
            return {Outcome::Consistent, i};
        if (p.action == negate_action(leak.action))
            return {Outcome::Contradicted, i};
    }
    return {Outcome::Undeclared, std::nullopt};
}

void criterion_oracle_equivalence() {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937 rng(424242);
    const char* actors[] = {"first_party", "third_party"};
    const char* actions[] = {"collect", "share", "not-collect", "not-share"};
    const char* data[] = {"location", "device_id", "contact"};

    std::size_t checked = 0;
    for (int instance = 0; instance < 10000; ++instance) {
        KnowledgeGraph policy(KgKind::Policy);
        const std::size_t np = rng() % 9;
        for (std::size_t i = 0; i < np; ++i)
            policy.insert(Triple{Actor::parse(actors[rng() % 2]),
                                 Action::parse(actions[rng() % 4]),
                                 vocab().taxonomy().make(data[rng() % 3]),
                                 Provenance::segment(i)});
        KnowledgeGraph leaks(KgKind::Leak);
        const std::size_t nl = rng() % 9;
        for (std::size_t i = 0; i < nl; ++i)
            leaks.insert(Triple{Actor::parse(actors[rng() % 2]),
                                Action::parse(actions[rng() % 2]),
                                vocab().taxonomy().make(data[rng() % 3]),
                                Provenance::flow("r.xml", i)});

        std::vector<Verdict> verdicts = check_all(leaks, policy);
        EXPECT(verdicts.size() == leaks.size(), "verdict count mismatch");
        for (std::size_t i = 0; i < leaks.size(); ++i) {
            OracleResult oracle =
                brute_force_first_match(leaks.triples()[i], policy.triples());
            EXPECT(verdicts[i].outcome == oracle.outcome,
                   "outcome mismatch in instance " << instance << " leak " << i);
            if (oracle.index) {
                EXPECT(verdicts[i].matched_policy &&
                           verdicts[i].matched_policy->provenance ==
                               policy.triples()[*oracle.index].provenance,
                       "matched policy triple mismatch in instance " << instance);
            } else {
                EXPECT(!verdicts[i].matched_policy, "unexpected match in instance " << instance);
            }
            ++checked;
        }
    }
    const double seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
    EXPECT(seconds < 10.0, "10k-instance oracle run took " << seconds << "s");
    EXPECT(checked > 10000, "suspiciously few leaks checked: " << checked);
    std::cout << "       10000 instances, " << checked << " leaks, " << seconds << "s\n";
}

// ---------------------------------------------------------------------------
// criterion 2: published metric arithmetic reproduces to tolerance
// ---------------------------------------------------------------------------

void criterion_metric_arithmetic() {
    auto close = [](std::optional<double> v, double want, double tol) {
        return v && std::abs(*v - want) <= tol + 1e-12;
    };

    MetricSet base = metrics(ConfusionCounts{25, 34, 0, 6});
    EXPECT(close(base.precision, 42.37, 0.01), "baseline precision " << *base.precision);
    EXPECT(close(base.recall, 80.65, 0.01), "baseline recall " << *base.recall);
    EXPECT(close(base.f1, 55.56, 0.01), "baseline f1 " << *base.f1);

    MetricSet hybrid = metrics(ConfusionCounts{24, 6, 0, 7});
    EXPECT(close(hybrid.precision, 80.00, 0.01), "hybrid precision " << *hybrid.precision);
    EXPECT(close(hybrid.recall, 77.42, 0.01), "hybrid recall " << *hybrid.recall);
    EXPECT(close(hybrid.f1, 78.69, 0.01), "hybrid f1 " << *hybrid.f1);

    CostTable costs =
        compare_costs({{"baseline", CostSummary{381134, 2674, 1625000, 1625000}},
                       {"hybrid", CostSummary{23668, 1432, 207000, 207000}}});
    EXPECT(close(costs.reductions[1].total_tokens, 93.5, 0.1),
           "token reduction " << *costs.reductions[1].total_tokens);
    EXPECT(close(costs.reductions[1].wall_clock, 87.3, 0.1),
           "time reduction " << *costs.reductions[1].wall_clock);
}

// ---------------------------------------------------------------------------
// criterion 3: replayed pipeline is bit-identical across three runs
// ---------------------------------------------------------------------------

void criterion_pipeline_determinism() {
    fs::path base = fs::temp_directory_path() /
                    ("polcheck_accept_det_" + std::to_string(std::random_device{}()));
    auto run1 = run_pipeline(base / "run1", /*with_baseline=*/true);
    auto run2 = run_pipeline(base / "run2", /*with_baseline=*/true);
    auto run3 = run_pipeline(base / "run3", /*with_baseline=*/true);

    EXPECT(!run1.empty(), "pipeline produced no files");
    EXPECT(run1.size() == run2.size() && run2.size() == run3.size(),
           "runs produced different file sets");
    std::size_t kg_files = 0, verdict_files = 0, ledger_files = 0;
    for (const auto& [name, digest] : run1) {
        auto it2 = run2.find(name);
        auto it3 = run3.find(name);
        EXPECT(it2 != run2.end() && it2->second == digest,
               "file differs between run1 and run2: " << name);
        EXPECT(it3 != run3.end() && it3->second == digest,
               "file differs between run1 and run3: " << name);
        if (name.rfind("policy", 0) == 0 || name.rfind("leaks", 0) == 0)
            kg_files += name.find(".ledger.") == std::string::npos ? 1 : 0;
        if (name.rfind("verdicts", 0) == 0 || name.rfind("baseline", 0) == 0)
            verdict_files += name.find(".ledger.") == std::string::npos ? 1 : 0;
        if (name.find(".ledger.") != std::string::npos)
            ++ledger_files;
    }
    EXPECT(kg_files == 10, "expected 10 knowledge-graph files, saw " << kg_files);
    EXPECT(verdict_files == 10, "expected 10 verdict files, saw " << verdict_files);
    EXPECT(ledger_files == 10, "expected 10 ledger sidecars, saw " << ledger_files);
    std::cout << "       3 runs x " << run1.size() << " files compared byte-for-byte\n";
    fs::remove_all(base);
}

// ---------------------------------------------------------------------------
// criterion 4: result-file ingestion hits every documented error path
// ---------------------------------------------------------------------------

void criterion_flowdroid_ingestion() {
    // single flow
    FlowParseResult single = parse_flowdroid_xml(fixtures() / "xml/app01.xml");
    EXPECT(single.records.size() == 1 && single.issues.empty(), "single-flow fixture");
    EXPECT(single.records[0].sources.size() == 1, "single-flow source count");
    EXPECT(single.format_version == "102", "format version is read, not enforced");

    // multi-source
    FlowParseResult multi_source = parse_flowdroid_xml(fixtures() / "xml/app02.xml");
    EXPECT(multi_source.records.size() == 1 && multi_source.records[0].sources.size() == 2,
           "multi-source fixture");

    // multi-result
    FlowParseResult multi_result = parse_flowdroid_xml(fixtures() / "xml/app03.xml");
    EXPECT(multi_result.records.size() == 2 && multi_result.records[0].id == 0 &&
               multi_result.records[1].id == 1,
           "multi-result fixture");

    // empty results: a list, not an error
    FlowParseResult empty = parse_flowdroid_xml(fixtures() / "xml/empty_results.xml");
    EXPECT(empty.records.empty() && empty.issues.empty(), "empty-results fixture");

    // malformed XML: parse error carrying a position
    bool threw = false;
    try {
        parse_flowdroid_xml(fixtures() / "xml/err_malformed.xml");
    } catch (const ParseError& e) {
        threw = true;
        EXPECT(std::string(e.what()).find("line") != std::string::npos,
               "malformed error lacks a line reference: " << e.what());
    }
    EXPECT(threw, "malformed fixture did not raise ParseError");

    // missing sink: record-level error, parsing continues
    FlowParseResult partial = parse_flowdroid_xml(fixtures() / "xml/err_missing_sink.xml");
    EXPECT(partial.records.size() == 2, "missing-sink fixture record count");
    EXPECT(partial.issues.size() == 1 && partial.issues[0].result_index == 1,
           "missing-sink fixture issue");
    EXPECT(partial.records[1].id == 2, "document-order ids preserved around the bad record");
}

// ---------------------------------------------------------------------------
// criterion 5: invariant suites
// ---------------------------------------------------------------------------

void criterion_invariants() {
    // action negation is an involution, exhaustively
    for (Action a : all_actions()) {
        EXPECT(negate_action(negate_action(a)) == a, "involution broken for " << a.to_string());
        EXPECT(negate_action(a).verb == a.verb, "negation changed the verb");
        EXPECT(negate_action(a).negated != a.negated, "negation did not flip");
    }

    // knowledge graphs: dedupe + stable insertion order
    std::mt19937 rng(31337);
    const char* actions[] = {"collect", "share", "not-collect", "not-share"};
    const char* data[] = {"location", "sms", "imei"};
    for (int round = 0; round < 500; ++round) {
        KnowledgeGraph kg(KgKind::Policy);
        std::vector<std::string> first_seen;
        for (int i = 0; i < 25; ++i) {
            Triple t{rng() % 2 ? Actor::first_party() : Actor::third_party(),
                     Action::parse(actions[rng() % 4]), vocab().taxonomy().make(data[rng() % 3]),
                     Provenance::segment(static_cast<std::size_t>(i))};
            const std::string key = t.practice_key();
            bool inserted = kg.insert(t);
            bool was_new =
                std::find(first_seen.begin(), first_seen.end(), key) == first_seen.end();
            EXPECT(inserted == was_new, "dedupe mismatch");
            if (was_new)
                first_seen.push_back(key);
        }
        EXPECT(kg.size() == first_seen.size(), "size mismatch after dedupe");
        for (std::size_t i = 0; i < kg.size(); ++i)
            EXPECT(kg.triples()[i].practice_key() == first_seen[i],
                   "insertion order not preserved");
    }

    // verdict soundness on all outputs of randomized checks
    for (int round = 0; round < 2000; ++round) {
        KnowledgeGraph policy(KgKind::Policy);
        for (std::size_t i = 0; i < rng() % 6; ++i)
            policy.insert(Triple{rng() % 2 ? Actor::first_party() : Actor::third_party(),
                                 Action::parse(actions[rng() % 4]),
                                 vocab().taxonomy().make(data[rng() % 3]),
                                 Provenance::segment(i)});
        Triple leak{rng() % 2 ? Actor::first_party() : Actor::third_party("adnet"),
                    Action::parse(actions[rng() % 2]), vocab().taxonomy().make(data[rng() % 3]),
                    Provenance::flow("r.xml", 0)};
        Verdict v = check_leak(leak, policy);
        switch (v.outcome) {
        case Outcome::Consistent:
            EXPECT(v.matched_policy && v.matched_policy->action == v.leak.action,
                   "consistent verdict without equal action");
            break;
        case Outcome::Contradicted:
            EXPECT(v.matched_policy &&
                       v.matched_policy->action == negate_action(v.leak.action) &&
                       actor_covers(v.matched_policy->actor, v.leak.actor) &&
                       v.matched_policy->data == v.leak.data,
                   "contradicted verdict without the negation relation");
            break;
        case Outcome::Undeclared:
            EXPECT(!v.matched_policy, "undeclared verdict carries a match");
            break;
        }
    }

    // ledger totals against brute-force sums, 1000 random ledgers
    for (int round = 0; round < 1000; ++round) {
        UsageLedger ledger;
        std::uint64_t prompt = 0, completion = 0;
        for (std::size_t i = 0; i < rng() % 10; ++i) {
            ChatExchange e;
            e.stage = static_cast<Stage>(rng() % 6);
            e.prompt_tokens = rng() % 10000;
            e.completion_tokens = rng() % 4000;
            prompt += e.prompt_tokens;
            completion += e.completion_tokens;
            ledger.append(e);
        }
        CostReport report = ledger_totals(ledger);
        EXPECT(report.overall.prompt_tokens == prompt &&
                   report.overall.completion_tokens == completion,
               "ledger totals differ from brute-force sums");
    }

    // metric scale invariance
    for (int round = 0; round < 500; ++round) {
        ConfusionCounts c{rng() % 40 + 1, rng() % 40, rng() % 40, rng() % 40};
        const std::uint64_t k = rng() % 10 + 1;
        MetricSet m1 = metrics(c);
        MetricSet m2 = metrics(ConfusionCounts{c.tp * k, c.fp * k, c.tn * k, c.fn * k});
        EXPECT(std::abs(*m1.precision - *m2.precision) < 1e-9 &&
                   std::abs(*m1.recall - *m2.recall) < 1e-9 &&
                   std::abs(*m1.f1 - *m2.f1) < 1e-9,
               "metrics changed under count scaling");
    }
}

// ---------------------------------------------------------------------------
// criterion 6: verdict semantics fixtures
// ---------------------------------------------------------------------------

void criterion_verdict_semantics() {
    auto dt = [&](const char* id) { return vocab().taxonomy().make(id); };
    auto policy_with = [&](std::vector<Triple> triples) {
        KnowledgeGraph kg(KgKind::Policy);
        for (Triple& t : triples)
            kg.insert(std::move(t));
        return kg;
    };
    Triple leak{Actor::first_party(), Action::parse("collect"), dt("location"),
                Provenance::flow("r.xml", 0)};

    // exact match
    KnowledgeGraph exact = policy_with({Triple{Actor::first_party(), Action::parse("collect"),
                                               dt("location"), Provenance::segment(0)}});
    EXPECT(check_leak(leak, exact).outcome == Outcome::Consistent, "exact match");

    // negated match
    KnowledgeGraph negated = policy_with({Triple{
        Actor::first_party(), Action::parse("not-collect"), dt("location"),
        Provenance::segment(0)}});
    EXPECT(check_leak(leak, negated).outcome == Outcome::Contradicted, "negated match");

    // no match
    KnowledgeGraph empty(KgKind::Policy);
    EXPECT(check_leak(leak, empty).outcome == Outcome::Undeclared, "no match");

    // third-party wildcard, cross-checked against the wildcard-aware oracle
    Triple sdk_leak{Actor::third_party("adnet"), Action::parse("share"), dt("device_id"),
                    Provenance::flow("r.xml", 1)};
    KnowledgeGraph wildcard = policy_with({Triple{
        Actor::third_party(), Action::parse("share"), dt("device_id"), Provenance::segment(0)}});
    Verdict v = check_leak(sdk_leak, wildcard);
    OracleResult oracle = brute_force_first_match(sdk_leak, wildcard.triples());
    EXPECT(v.outcome == Outcome::Consistent, "wildcard verdict");
    EXPECT(oracle.outcome == v.outcome && oracle.index == 0, "wildcard oracle agreement");
}

// ---------------------------------------------------------------------------
// criterion 7: baseline plumbing
// ---------------------------------------------------------------------------

void criterion_baseline_plumbing() {
    fs::path out = fs::temp_directory_path() /
                   ("polcheck_accept_base_" + std::to_string(std::random_device{}()));
    fs::create_directories(out);

    std::string verdict_paths;
    std::vector<fs::path> ledgers;
    for (std::size_t i = 0; i < groups().size(); ++i) {
        const Group& g = groups()[i];
        const std::string tag = std::to_string(i + 1);
        std::string xmls;
        for (const std::string& x : g.xml)
            xmls += " " + q(fixtures() / "xml" / x);
        const int rc =
            sh(cli_path() + " baseline --policy " + q(fixtures() / "policies" / g.policy) +
               xmls + " --out " + q(out / ("baseline" + tag + ".json")) + common_flags() +
               " --backend replay --replay " + q(fixtures() / "replay/baseline.json"));
        EXPECT(rc == 0 || rc == 1, "baseline run crashed for group " << tag);
        verdict_paths += (verdict_paths.empty() ? "" : ",") +
                         (out / ("baseline" + tag + ".json")).string();
        ledgers.push_back(out / ("baseline" + tag + ".ledger.json"));
    }

    // the verdict files are accepted unchanged by the evaluation command
    EXPECT(sh(cli_path() + " evaluate --truth " + q(fixtures() / "truth/ground_truth.txt") +
              " --verdicts baseline=" + verdict_paths) == 0,
           "evaluate rejected the baseline verdict files");

    // ledger stage totals partition the grand total exactly
    for (const fs::path& path : ledgers) {
        EXPECT(fs::exists(path), "missing ledger sidecar " << path.filename().string());
        nlohmann::json j = nlohmann::json::parse(read_file(path));
        std::uint64_t stage_total = 0;
        std::uint64_t overall =
            j.at("totals").at("overall").at("total_tokens").get<std::uint64_t>();
        for (const auto& [name, row] : j.at("totals").at("stages").items()) {
            EXPECT(name.rfind("baseline_stage", 0) == 0,
                   "non-baseline stage in the baseline ledger: " << name);
            stage_total += row.at("total_tokens").get<std::uint64_t>();
        }
        EXPECT(stage_total == overall, "stage totals " << stage_total
                                                       << " != overall " << overall);
        EXPECT(overall > 0, "baseline ledger recorded no tokens");
    }
    fs::remove_all(out);
}

} // namespace

int main() {
    const Criterion criteria[] = {
        {"algorithm-oracle-equivalence", criterion_oracle_equivalence},
        {"metric-arithmetic-reproduction", criterion_metric_arithmetic},
        {"pipeline-determinism", criterion_pipeline_determinism},
        {"flowdroid-ingestion", criterion_flowdroid_ingestion},
        {"invariant-suites", criterion_invariants},
        {"verdict-semantics", criterion_verdict_semantics},
        {"baseline-plumbing", criterion_baseline_plumbing},
    };

    int failed = 0;
    for (const Criterion& c : criteria) {
        g_criterion_failures = 0;
        try {
            c.run();
        } catch (const std::exception& e) {
            std::cout << "       exception: " << e.what() << "\n";
            ++g_criterion_failures;
        }
        const bool ok = g_criterion_failures == 0;
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.name << "\n";
        failed += ok ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all criteria passed\n"
                              : std::to_string(failed) + " criteria failed\n");
    return failed;
}
