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

#include "polcheck/llm_client.hpp"

#include <algorithm>
#include <chrono>
#include <thread>

#include "polcheck/digest.hpp"
#include "polcheck/errors.hpp"
#include "polcheck/text.hpp"

namespace polcheck {

namespace {

constexpr int kReplayVersion = 1;
constexpr int kLedgerVersion = 1;

} // namespace

std::string_view stage_name(Stage stage) {
    switch (stage) {
    case Stage::PolicyRead: return "policy_read";
    case Stage::LeakMap: return "leak_map";
    case Stage::Report: return "report";
    case Stage::BaselineStage1: return "baseline_stage1";
    case Stage::BaselineStage2: return "baseline_stage2";
    case Stage::BaselineStage3: return "baseline_stage3";
    }
    return "unknown";
}

Stage stage_from_name(std::string_view name) {
    for (Stage s : {Stage::PolicyRead, Stage::LeakMap, Stage::Report, Stage::BaselineStage1,
                    Stage::BaselineStage2, Stage::BaselineStage3}) {
        if (stage_name(s) == name)
            return s;
    }
    throw ParseError("unknown stage: " + std::string(name));
}

std::string_view backend_name(Backend backend) {
    switch (backend) {
    case Backend::Live: return "live";
    case Backend::Replay: return "replay";
    case Backend::Record: return "record";
    }
    return "unknown";
}

Backend backend_from_name(std::string_view name) {
    std::string n = trim(name);
    if (n == "live")
        return Backend::Live;
    if (n == "replay")
        return Backend::Replay;
    if (n == "record")
        return Backend::Record;
    throw ConfigError("unknown backend: " + n + " (expected live|replay|record)");
}

void UsageLedger::append(ChatExchange exchange) {
    std::lock_guard<std::mutex> lock(mu_);
    exchanges_.push_back(std::move(exchange));
}

std::vector<ChatExchange> UsageLedger::snapshot() const {
    std::lock_guard<std::mutex> lock(mu_);
    return exchanges_;
}

std::size_t UsageLedger::size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return exchanges_.size();
}

CostReport UsageLedger::totals() const {
    CostReport report;
    for (const ChatExchange& e : snapshot()) {
        CostRow& row = report.per_stage[std::string(stage_name(e.stage))];
        row.prompt_tokens += e.prompt_tokens;
        row.completion_tokens += e.completion_tokens;
        row.elapsed_ms += e.elapsed_ms;
        report.overall.prompt_tokens += e.prompt_tokens;
        report.overall.completion_tokens += e.completion_tokens;
        report.overall.elapsed_ms += e.elapsed_ms;
    }
    return report;
}

CostReport ledger_totals(const UsageLedger& ledger) {
    return ledger.totals();
}

ReplayStore ReplayStore::load(const std::vector<std::filesystem::path>& paths) {
    ReplayStore store;
    std::vector<std::filesystem::path> files;
    for (const auto& p : paths) {
        if (std::filesystem::is_directory(p)) {
            for (const auto& entry : std::filesystem::directory_iterator(p))
                if (entry.is_regular_file() && entry.path().extension() == ".json")
                    files.push_back(entry.path());
        } else if (std::filesystem::is_regular_file(p)) {
            files.push_back(p);
        } else {
            throw ConfigError("replay fixture not found: " + p.string());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
        nlohmann::json j = nlohmann::json::parse(read_file(file), nullptr, false);
        if (j.is_discarded() || j.value("schema", "") != "polcheck-replay" ||
            j.value("version", 0) != kReplayVersion)
            throw ParseError("not a polcheck-replay v1 file: " + file.string());
        for (const auto& [digest, e] : j.at("entries").items()) {
            ReplayEntry entry;
            entry.response = e.at("response").get<std::string>();
            entry.prompt_tokens = e.value("prompt_tokens", 0ULL);
            entry.completion_tokens = e.value("completion_tokens", 0ULL);
            entry.elapsed_ms = e.value("elapsed_ms", 0ULL);
            entry.prompt = e.value("prompt", std::string{});
            store.entries_[digest] = std::move(entry);
        }
    }
    return store;
}

const ReplayEntry* ReplayStore::find(const std::string& digest) const {
    auto it = entries_.find(digest);
    return it == entries_.end() ? nullptr : &it->second;
}

void ReplayStore::put(const std::string& digest, ReplayEntry entry) {
    entries_[digest] = std::move(entry);
}

void ReplayStore::save(const std::filesystem::path& path) const {
    nlohmann::json entries = nlohmann::json::object();
    for (const auto& [digest, e] : entries_) {
        nlohmann::json je = {{"response", e.response},
                             {"prompt_tokens", e.prompt_tokens},
                             {"completion_tokens", e.completion_tokens},
                             {"elapsed_ms", e.elapsed_ms}};
        if (!e.prompt.empty())
            je["prompt"] = e.prompt;
        entries[digest] = std::move(je);
    }
    nlohmann::json doc = {
        {"schema", "polcheck-replay"}, {"version", kReplayVersion}, {"entries", entries}};
    write_file(path, doc.dump(2) + "\n");
}

Transport default_transport() {
    // Implemented in http_transport.cpp to keep the httplib include local.
    extern Transport make_httplib_transport();
    return make_httplib_transport();
}

LlmClient::LlmClient(ClientConfig cfg, Transport transport)
    : cfg_(std::move(cfg)), transport_(std::move(transport)) {
    if (cfg_.backend == Backend::Replay) {
        if (cfg_.replay_paths.empty())
            throw ConfigError("replay backend requires at least one replay fixture path");
        replay_ = ReplayStore::load(cfg_.replay_paths);
    } else {
        if (cfg_.api_key.empty())
            throw ConfigError("live/record backend requires an API key");
        if (!transport_)
            transport_ = default_transport();
        if (cfg_.backend == Backend::Record) {
            if (cfg_.record_path.empty())
                throw ConfigError("record backend requires a record fixture path");
            if (std::filesystem::exists(cfg_.record_path))
                replay_ = ReplayStore::load({cfg_.record_path});
        }
    }
}

int LlmClient::parallelism() const {
    if (cfg_.backend == Backend::Replay)
        return 1; // local lookups; sequential keeps ledgers reproducible
    return std::max(1, cfg_.parallelism);
}

ChatExchange LlmClient::complete(Stage stage, const std::string& prompt_name,
                                 const std::string& prompt) {
    if (trim(prompt).empty())
        throw PreconditionError("complete: empty prompt (stage " +
                                std::string(stage_name(stage)) + ")");
    const std::string digest = sha256_hex(prompt);

    if (cfg_.backend == Backend::Replay) {
        const ReplayEntry* entry = replay_.find(digest);
        if (!entry)
            throw ReplayMissError(std::string(stage_name(stage)), digest);
        ChatExchange e;
        e.stage = stage;
        e.prompt_name = prompt_name;
        e.prompt_digest = digest;
        e.response = entry->response;
        e.prompt_tokens = entry->prompt_tokens;
        e.completion_tokens = entry->completion_tokens;
        e.elapsed_ms = entry->elapsed_ms;
        ledger_.append(e);
        return e;
    }

    ChatExchange e = complete_over_http(stage, prompt_name, prompt, digest);
    if (cfg_.backend == Backend::Record) {
        std::lock_guard<std::mutex> lock(record_mu_);
        ReplayEntry entry;
        entry.response = e.response;
        entry.prompt_tokens = e.prompt_tokens;
        entry.completion_tokens = e.completion_tokens;
        entry.elapsed_ms = e.elapsed_ms;
        entry.prompt = prompt;
        replay_.put(digest, std::move(entry));
        record_dirty_ = true;
    }
    ledger_.append(e);
    return e;
}

ChatExchange LlmClient::complete_over_http(Stage stage, const std::string& prompt_name,
                                           const std::string& prompt,
                                           const std::string& digest) {
    nlohmann::json body = {{"model", cfg_.model},
                           {"temperature", cfg_.temperature},
                           {"messages", nlohmann::json::array({nlohmann::json{
                                            {"role", "user"}, {"content", prompt}}})}};
    const std::string body_str = body.dump();

    const auto start = std::chrono::steady_clock::now();
    std::string last_error;
    for (int attempt = 0; attempt <= cfg_.max_retries; ++attempt) {
        if (attempt > 0 && cfg_.retry_backoff_ms > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg_.retry_backoff_ms * attempt));
        HttpResponse resp;
        try {
            resp = transport_(cfg_, body_str);
        } catch (const std::exception& ex) {
            last_error = ex.what();
            continue;
        }
        if (resp.status == 429 || resp.status >= 500) {
            last_error = "HTTP " + std::to_string(resp.status);
            continue;
        }
        if (resp.status != 200)
            throw TransportError(std::string(stage_name(stage)),
                                 "HTTP " + std::to_string(resp.status) + ": " + resp.body);

        nlohmann::json j = nlohmann::json::parse(resp.body, nullptr, false);
        if (j.is_discarded() || !j.contains("choices") || j["choices"].empty()) {
            last_error = "malformed completion response";
            continue;
        }
        const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - start)
                                 .count();
        ChatExchange e;
        e.stage = stage;
        e.prompt_name = prompt_name;
        e.prompt_digest = digest;
        e.response = j["choices"][0].value("message", nlohmann::json::object())
                         .value("content", std::string{});
        e.prompt_tokens = j.value("usage", nlohmann::json::object()).value("prompt_tokens", 0ULL);
        e.completion_tokens =
            j.value("usage", nlohmann::json::object()).value("completion_tokens", 0ULL);
        e.elapsed_ms = static_cast<std::uint64_t>(elapsed);
        return e;
    }
    throw TransportError(std::string(stage_name(stage)),
                         last_error.empty() ? "request failed" : last_error);
}

void LlmClient::flush_record() {
    std::lock_guard<std::mutex> lock(record_mu_);
    if (cfg_.backend == Backend::Record && record_dirty_) {
        replay_.save(cfg_.record_path);
        record_dirty_ = false;
    }
}

nlohmann::json ledger_to_json(const UsageLedger& ledger, Backend backend,
                              std::uint64_t wall_clock_ms) {
    nlohmann::json exchanges = nlohmann::json::array();
    for (const ChatExchange& e : ledger.snapshot()) {
        exchanges.push_back({{"stage", std::string(stage_name(e.stage))},
                             {"prompt_name", e.prompt_name},
                             {"prompt_digest", e.prompt_digest},
                             {"prompt_tokens", e.prompt_tokens},
                             {"completion_tokens", e.completion_tokens},
                             {"elapsed_ms", e.elapsed_ms}});
    }
    CostReport report = ledger.totals();
    auto row_json = [](const CostRow& row) {
        return nlohmann::json{{"prompt_tokens", row.prompt_tokens},
                              {"completion_tokens", row.completion_tokens},
                              {"total_tokens", row.total_tokens()},
                              {"elapsed_ms", row.elapsed_ms}};
    };
    nlohmann::json stages = nlohmann::json::object();
    for (const auto& [name, row] : report.per_stage)
        stages[name] = row_json(row);
    return {{"schema", "polcheck-ledger"},
            {"version", kLedgerVersion},
            {"backend", std::string(backend_name(backend))},
            {"exchanges", exchanges},
            {"totals", {{"overall", row_json(report.overall)}, {"stages", stages}}},
            {"pipeline_elapsed_ms", report.overall.elapsed_ms},
            {"wall_clock_ms", wall_clock_ms}};
}

void write_ledger_file(const std::filesystem::path& path, const UsageLedger& ledger,
                       Backend backend, std::uint64_t wall_clock_ms) {
    write_file(path, ledger_to_json(ledger, backend, wall_clock_ms).dump(2) + "\n");
}

CostSummary& CostSummary::operator+=(const CostSummary& o) {
    prompt_tokens += o.prompt_tokens;
    completion_tokens += o.completion_tokens;
    pipeline_elapsed_ms += o.pipeline_elapsed_ms;
    wall_clock_ms += o.wall_clock_ms;
    return *this;
}

CostSummary read_ledger_summary(const std::filesystem::path& path) {
    nlohmann::json j = nlohmann::json::parse(read_file(path), nullptr, false);
    if (j.is_discarded() || j.value("schema", "") != "polcheck-ledger")
        throw ParseError("not a polcheck-ledger file: " + path.string());
    CostSummary s;
    for (const auto& e : j.value("exchanges", nlohmann::json::array())) {
        s.prompt_tokens += e.value("prompt_tokens", 0ULL);
        s.completion_tokens += e.value("completion_tokens", 0ULL);
        s.pipeline_elapsed_ms += e.value("elapsed_ms", 0ULL);
    }
    s.wall_clock_ms = j.value("wall_clock_ms", 0ULL);
    return s;
}

} // namespace polcheck
