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

// Regenerates the frozen replay fixtures for the test corpus from the
// scripted model replies under tests/fixtures/scripts/. Run from the repo
// root (or pass --root) after changing prompts, policies, or scripts:
//
//   polcheck-make-fixtures --root .
//
// Token counts and latencies are synthesized deterministically from the
// content so reruns are byte-identical.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "polcheck/baseline.hpp"
#include "polcheck/consistency_checker.hpp"
#include "polcheck/digest.hpp"
#include "polcheck/errors.hpp"
#include "polcheck/leak_extractor.hpp"
#include "polcheck/policy_reader.hpp"
#include "polcheck/prompt_catalog.hpp"
#include "polcheck/text.hpp"
#include "polcheck/vocab.hpp"

namespace fs = std::filesystem;
using namespace polcheck;
using nlohmann::json;

namespace {

std::uint64_t synth_elapsed(const std::string& digest) {
    auto hexval = [](char c) -> std::uint64_t {
        return c <= '9' ? static_cast<std::uint64_t>(c - '0')
                        : static_cast<std::uint64_t>(c - 'a' + 10);
    };
    std::uint64_t seed = 0;
    for (int i = 0; i < 4; ++i)
        seed = seed * 16 + hexval(digest[static_cast<std::size_t>(i)]);
    return 150 + seed % 1650;
}

void add_entry(ReplayStore& store, const std::string& prompt, const std::string& response) {
    const std::string digest = sha256_hex(prompt);
    ReplayEntry entry;
    entry.response = response;
    entry.prompt_tokens = prompt.size() / 4 + 1;
    entry.completion_tokens = response.size() / 4 + 1;
    entry.elapsed_ms = synth_elapsed(digest);
    entry.prompt = prompt;
    store.put(digest, std::move(entry));
}

struct Paths {
    fs::path root;
    fs::path prompts() const { return root / "prompts"; }
    fs::path data() const { return root / "data"; }
    fs::path scripts() const { return root / "tests/fixtures/scripts"; }
    fs::path policies() const { return root / "tests/fixtures/policies"; }
    fs::path xml() const { return root / "tests/fixtures/xml"; }
    fs::path replay() const { return root / "tests/fixtures/replay"; }
};

json load_json(const fs::path& path) {
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded())
        throw ConfigError("invalid JSON: " + path.string());
    return j;
}

// ---- policy-reader fixture -------------------------------------------------

void build_policy_fixture(const Paths& paths, const PromptCatalog& prompts) {
    json script = load_json(paths.scripts() / "policy_responses.json");
    const json& segments = script.at("segments");

    // guard against drift: every corpus policy segment must be scripted
    for (const auto& entry : fs::directory_iterator(paths.policies())) {
        if (entry.path().extension() != ".txt")
            continue;
        for (const PolicySegment& seg : segment_policy(read_file(entry.path()))) {
            if (!segments.contains(seg.text))
                throw ConfigError("no scripted reply for segment of " +
                                  entry.path().filename().string() + ": \"" + seg.text + "\"");
        }
    }

    ReplayStore store;
    for (const auto& [segment_text, value] : segments.items()) {
        std::string response;
        std::string retry_response;
        std::string negation_response;
        if (value.is_string()) {
            response = value.get<std::string>();
        } else {
            response = value.at("response").get<std::string>();
            retry_response = value.value("retry_response", "");
            negation_response = value.value("negation_response", "");
        }
        const std::string prompt =
            prompts.render("policy_extract.v1", {{"segment", segment_text}});
        add_entry(store, prompt, response);
        if (!retry_response.empty())
            add_entry(store, prompt + "\n\n" + prompts.raw("reformat_suffix.v1"),
                      retry_response);
        if (!negation_response.empty())
            add_entry(store,
                      prompts.render("policy_negation.v1", {{"segment", segment_text}}),
                      negation_response);
    }
    store.save(paths.replay() / "policy_read.json");
    std::cout << "policy_read.json: " << store.size() << " entries\n";
}

// ---- baseline fixture --------------------------------------------------private

std::string flow_summary_for(const fs::path& xml_path) {
    FlowParseResult parsed = parse_flowdroid_xml(xml_path);
    const std::string file = xml_path.filename().string();
    if (parsed.records.empty())
        return "No data flows are present in this result file.";
    std::string out;
    for (const FlowRecord& r : parsed.records) {
        std::string src_api = invoked_signature(r.sources.front().statement);
        if (src_api.empty())
            src_api = r.sources.front().method;
        std::string sink_api = invoked_signature(r.sink_statement);
        if (sink_api.empty())
            sink_api = r.sink_method;
        if (!out.empty())
            out += "\n";
        out += "- " + file + "#" + std::to_string(r.id) + ": " + signature_method(src_api) +
               "() in " + signature_class(r.sources.front().method) + " flows to " +
               signature_method(sink_api) + "() of " + signature_class(sink_api) + " in " +
               signature_class(r.sink_method);
    }
    return out;
}

void build_baseline_fixture(const Paths& paths, const PromptCatalog& prompts) {
    json script = load_json(paths.scripts() / "baseline_script.json");
    ReplayStore store;

    auto stage1_prompt = [&](const fs::path& xml_path, std::size_t part, std::size_t parts,
                             const std::string& chunk) {
        return prompts.render("baseline_flows.v1",
                              {{"file", xml_path.filename().string()},
                               {"part", std::to_string(part)},
                               {"parts", std::to_string(parts)},
                               {"xml", chunk}});
    };

    for (const json& group : script.at("groups")) {
        std::vector<std::string> responses;
        for (const auto& xml_name : group.at("xml")) {
            const fs::path xml_path = paths.xml() / xml_name.get<std::string>();
            const std::string summary = flow_summary_for(xml_path);
            const auto chunks = chunk_text_at_lines(read_file(xml_path), 6000);
            for (std::size_t i = 0; i < chunks.size(); ++i) {
                // tiny corpus files fit one chunk; keep the shape general
                std::string response =
                    chunks.size() == 1
                        ? summary
                        : summary + "\n(continued in part " + std::to_string(i + 1) + ")";
                add_entry(store, stage1_prompt(xml_path, i + 1, chunks.size(), chunks[i]),
                          response);
                responses.push_back(trim(response));
            }
        }
        std::string concat;
        for (const std::string& r : responses) {
            if (!concat.empty())
                concat += "\n";
            concat += r;
        }

        std::string methods_response;
        for (const auto& method : group.at("methods"))
            methods_response += "method: " + method.get<std::string>() + "\n";
        add_entry(store, prompts.render("baseline_methods.v1", {{"summary", concat}}),
                  methods_response);

        const std::string policy_text =
            read_file(paths.policies() / group.at("policy").get<std::string>());
        for (const auto& method : group.at("methods")) {
            const std::string verdict =
                group.at("judgments").at(method.get<std::string>()).get<std::string>();
            const std::string response =
                "answer: " + verdict + "\n" +
                (verdict == "consistent" ? "The policy declares this practice."
                                         : "The policy does not cover this practice.");
            add_entry(store,
                      prompts.render("baseline_similarity.v1",
                                     {{"policy", policy_text},
                                      {"method", method.get<std::string>()}}),
                      response);
        }
    }

    // edge entries used by the unit tests
    const json& edge = script.at("edge");
    {
        const fs::path empty = paths.xml() / edge.at("empty_file").get<std::string>();
        const auto chunks = chunk_text_at_lines(read_file(empty), 6000);
        add_entry(store, stage1_prompt(empty, 1, chunks.size(), chunks[0]),
                  edge.at("empty_summary").get<std::string>());
    }
    {
        const fs::path chunked = paths.xml() / edge.at("chunked_file").get<std::string>();
        const std::size_t chunk_chars = edge.at("chunk_chars").get<std::size_t>();
        const auto chunks = chunk_text_at_lines(read_file(chunked), chunk_chars);
        if (chunks.size() < 2)
            throw ConfigError("chunked edge fixture expected to split into multiple parts");
        for (std::size_t i = 0; i < chunks.size(); ++i)
            add_entry(store, stage1_prompt(chunked, i + 1, chunks.size(), chunks[i]),
                      chunked.filename().string() + " part " + std::to_string(i + 1) +
                          " summarized.");
    }
    {
        const json& c = edge.at("stage2_malformed");
        const std::string prompt = prompts.render(
            "baseline_methods.v1", {{"summary", c.at("summary").get<std::string>()}});
        add_entry(store, prompt, c.at("response").get<std::string>());
        add_entry(store, prompt + "\n\n" + prompts.raw("reformat_suffix.v1"),
                  c.at("retry_response").get<std::string>());
    }
    {
        const json& c = edge.at("stage2_none");
        add_entry(store,
                  prompts.render("baseline_methods.v1",
                                 {{"summary", c.at("summary").get<std::string>()}}),
                  c.at("response").get<std::string>());
    }
    for (const json& c : edge.at("stage3_cases")) {
        const std::string prompt =
            prompts.render("baseline_similarity.v1",
                           {{"policy", c.at("policy").get<std::string>()},
                            {"method", c.at("method").get<std::string>()}});
        add_entry(store, prompt, c.at("response").get<std::string>());
        if (c.contains("retry_response"))
            add_entry(store, prompt + "\n\n" + prompts.raw("reformat_suffix.v1"),
                      c.at("retry_response").get<std::string>());
    }

    store.save(paths.replay() / "baseline.json");
    std::cout << "baseline.json: " << store.size() << " entries\n";
}

// ---- flow-classification override and report-polish fixtures ---------------

void build_misc_fixture(const Paths& paths, const PromptCatalog& prompts, const Vocab& vocab) {
    json script = load_json(paths.scripts() / "misc_responses.json");

    ReplayStore leak_store;
    for (const auto& [key, response] : script.at("leak_map").items()) {
        const std::size_t hash = key.rfind('#');
        const std::string file = key.substr(0, hash);
        const std::size_t record_id = std::stoul(key.substr(hash + 1));
        FlowParseResult parsed = parse_flowdroid_xml(paths.xml() / file);
        const FlowRecord* record = nullptr;
        for (const FlowRecord& r : parsed.records)
            if (r.id == record_id)
                record = &r;
        if (!record)
            throw ConfigError("leak_map script references unknown record " + key);

        std::string description = "sink method: " + record->sink_method + "\n" +
                                  "sink statement: " + record->sink_statement + "\n";
        for (const FlowSource& s : record->sources) {
            description += "source method: " + s.method + "\n";
            description += "source statement: " + s.statement + "\n";
        }
        std::string taxonomy_ids;
        for (const auto& entry : vocab.taxonomy().entries()) {
            if (!taxonomy_ids.empty())
                taxonomy_ids += ", ";
            taxonomy_ids += entry.id;
        }
        add_entry(leak_store,
                  prompts.render("leak_map.v1",
                                 {{"record", description}, {"taxonomy", taxonomy_ids}}),
                  response.get<std::string>());
    }
    leak_store.save(paths.replay() / "leak_map.json");
    std::cout << "leak_map.json: " << leak_store.size() << " entries\n";

    // the canonical contradicted verdict the report tests polish
    ReplayStore report_store;
    Verdict verdict{
        Triple{Actor::first_party(), Action{Action::Verb::Share, false},
               vocab.taxonomy().make("device_id"), Provenance::flow("app02.xml", 0)},
        Outcome::Contradicted,
        Triple{Actor::first_party(), Action{Action::Verb::Share, true},
               vocab.taxonomy().make("device_id"), Provenance::segment(1)}};
    ReportText plain = render_report(verdict);
    add_entry(report_store, prompts.render("report_polish.v1", {{"report", plain.plain}}),
              script.at("report_polish").at("demo").get<std::string>());
    report_store.save(paths.replay() / "reports.json");
    std::cout << "reports.json: " << report_store.size() << " entries\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"regenerate the frozen replay fixtures for the test corpus"};
    std::string root = ".";
    app.add_option("--root", root, "repository root");
    CLI11_PARSE(app, argc, argv);

    try {
        Paths paths{fs::path(root)};
        fs::create_directories(paths.replay());
        PromptCatalog prompts = PromptCatalog::load(paths.prompts());
        Vocab vocab = Vocab::load(paths.data());
        build_policy_fixture(paths, prompts);
        build_baseline_fixture(paths, prompts);
        build_misc_fixture(paths, prompts, vocab);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
