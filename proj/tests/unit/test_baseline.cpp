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

#include <doctest.h>

#include "polcheck/baseline.hpp"
#include "polcheck/errors.hpp"
#include "polcheck/text.hpp"
#include "test_support.hpp"

using namespace polcheck;

namespace {

std::filesystem::path xml_fixture(const std::string& name) {
    return test::fixtures_dir() / "xml" / name;
}

std::vector<std::filesystem::path> group1_files() {
    return {xml_fixture("app01.xml"), xml_fixture("app02.xml"), xml_fixture("app03.xml"),
            xml_fixture("app04.xml")};
}

} // namespace

TEST_CASE("chunk_text_at_lines splits at line boundaries under the budget") {
    CHECK(chunk_text_at_lines("abc\ndef\n", 100).size() == 1);
    auto chunks = chunk_text_at_lines("aaaa\nbbbb\ncccc\ndddd\n", 10);
    CHECK(chunks.size() == 2);
    CHECK(chunks[0] == "aaaa\nbbbb");
    CHECK(chunks[1] == "cccc\ndddd");
    // an oversized single line is hard-split rather than dropped
    auto hard = chunk_text_at_lines(std::string(25, 'x'), 10);
    CHECK(hard.size() == 3);
}

TEST_CASE("stage 1: empty results file summarizes as no flows") {
    LlmClient client = test::replay_client({"baseline.json"});
    Diagnostics diag;
    std::string summary =
        baseline_stage1({xml_fixture("empty_results.xml")}, client, test::prompts(), 6000, diag);
    CHECK(summary.find("No data flows") != std::string::npos);
    CHECK(client.ledger().size() == 1);
}

TEST_CASE("stage 1: oversized XML is chunked into multiple exchanges and concatenated") {
    LlmClient client = test::replay_client({"baseline.json"});
    Diagnostics diag;
    std::string summary =
        baseline_stage1({xml_fixture("app03.xml")}, client, test::prompts(), 400, diag);
    CHECK(client.ledger().size() > 1);
    CHECK(summary.find("part 1 summarized") != std::string::npos);
    CHECK(summary.find("part " + std::to_string(client.ledger().size()) + " summarized") !=
          std::string::npos);
    for (const ChatExchange& e : client.ledger().snapshot())
        CHECK(e.stage == Stage::BaselineStage1);
}

TEST_CASE("stage 2: methods parsed from the mandated list format") {
    LlmClient client = test::replay_client({"baseline.json"});
    Diagnostics diag;
    std::string summary =
        baseline_stage1(group1_files(), client, test::prompts(), 6000, diag);
    auto methods = baseline_stage2(summary, client, test::prompts(), diag);
    REQUIRE(methods.size() == 5);
    CHECK(methods[0] == "getLastKnownLocation");
    CHECK(methods[1] == "getDeviceId");
    CHECK(diag.empty());
}

TEST_CASE("stage 2: malformed reply twice yields an empty list and a warning") {
    LlmClient client = test::replay_client({"baseline.json"});
    Diagnostics diag;
    CHECK(baseline_stage2("EDGE-MALFORMED-SUMMARY", client, test::prompts(), diag).empty());
    CHECK(diag.contains("malformed twice"));
    CHECK(client.ledger().size() == 2);
}

TEST_CASE("stage 2: an explicit none reply is a valid empty list") {
    LlmClient client = test::replay_client({"baseline.json"});
    Diagnostics diag;
    CHECK(baseline_stage2("Nothing privacy-relevant happens in this app.", client,
                          test::prompts(), diag)
              .empty());
    CHECK(diag.empty());
    CHECK(client.ledger().size() == 1);
}

TEST_CASE("stage 3: the answer token decides the judgment") {
    LlmClient client = test::replay_client({"baseline.json"});
    Diagnostics diag;
    auto consistent = baseline_stage3({"getLastKnownLocation"}, "We collect your location.",
                                      client, test::prompts(), diag);
    REQUIRE(consistent.size() == 1);
    CHECK(consistent[0].consistent);
    CHECK(!consistent[0].rationale.empty());

    auto violating = baseline_stage3({"getLastKnownLocation"}, "We never collect your location.",
                                     client, test::prompts(), diag);
    REQUIRE(violating.size() == 1);
    CHECK_FALSE(violating[0].consistent);
}

TEST_CASE("stage 3: a method with no usable answer token is skipped with a warning") {
    LlmClient client = test::replay_client({"baseline.json"});
    Diagnostics diag;
    auto judged = baseline_stage3({"getEdgeCaseMethod"}, "We collect your location.", client,
                                  test::prompts(), diag);
    CHECK(judged.empty());
    CHECK(diag.contains("no usable answer token"));
}

TEST_CASE("run_baseline: per-record verdicts in record order, same provenances as the hybrid") {
    LlmClient client = test::replay_client({"baseline.json"});
    Diagnostics diag;
    const std::string policy =
        read_file(test::fixtures_dir() / "policies/policy01.txt");
    auto entries = run_baseline(group1_files(), policy, client, test::prompts(), diag);
    REQUIRE(entries.size() == 6);
    CHECK(entries[0].provenance == "flow:app01.xml#0");
    CHECK(entries[5].provenance == "flow:app04.xml#1");
    // group 1 judges every selected method a violation, so every covered
    // record is flagged
    for (const auto& e : entries) {
        CHECK(e.violation);
        CHECK(!e.judged_methods.empty());
    }
}

TEST_CASE("run_baseline is deterministic and its ledger stages partition the total") {
    const std::string policy =
        read_file(test::fixtures_dir() / "policies/policy02.txt");
    std::vector<std::filesystem::path> files = {xml_fixture("app05.xml"),
                                                xml_fixture("app06.xml"),
                                                xml_fixture("app07.xml"),
                                                xml_fixture("app08.xml")};
    auto run = [&](nlohmann::json* ledger_out) {
        LlmClient client = test::replay_client({"baseline.json"});
        Diagnostics diag;
        auto entries = run_baseline(files, policy, client, test::prompts(), diag);
        if (ledger_out)
            *ledger_out = ledger_to_json(client.ledger(), client.backend(),
                                         client.ledger().totals().overall.elapsed_ms);

        CostReport report = client.ledger().totals();
        std::uint64_t stage_sum = 0;
        for (const auto& [name, row] : report.per_stage) {
            CHECK(name.rfind("baseline_", 0) == 0); // only baseline stages are present
            stage_sum += row.total_tokens();
        }
        CHECK(stage_sum == report.overall.total_tokens());
        CHECK(report.per_stage.size() == 3);
        return entries;
    };
    nlohmann::json ledger1, ledger2;
    auto a = run(&ledger1);
    auto b = run(&ledger2);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].provenance == b[i].provenance);
        CHECK(a[i].violation == b[i].violation);
    }
    CHECK(ledger1.dump() == ledger2.dump());

    // the designed confusion for group 2: sms, call log and phone number
    // flagged, the rest covered
    REQUIRE(a.size() == 7);
    CHECK_FALSE(a[0].violation); // app05#0 location
    CHECK(a[1].violation);       // app05#1 sms
    CHECK_FALSE(a[2].violation); // app06#0 device id via flurry
    CHECK(a[3].violation);       // app06#1 call log
    CHECK(a[4].violation);       // app07#0 phone number
    CHECK_FALSE(a[5].violation); // app08#0 email
    CHECK_FALSE(a[6].violation); // app08#1 network info judged consistent
}

TEST_CASE("run_baseline rejects an empty policy text") {
    LlmClient client = test::replay_client({"baseline.json"});
    Diagnostics diag;
    CHECK_THROWS_AS(run_baseline(group1_files(), "  ", client, test::prompts(), diag),
                    PreconditionError);
}
