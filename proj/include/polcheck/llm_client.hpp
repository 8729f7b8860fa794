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

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace polcheck {

/// Pipeline stages, used to tag every model exchange for cost accounting.
enum class Stage {
    PolicyRead,
    LeakMap,
    Report,
    BaselineStage1,
    BaselineStage2,
    BaselineStage3,
};

std::string_view stage_name(Stage stage);
Stage stage_from_name(std::string_view name);

/// One prompt/response round trip.
struct ChatExchange {
    Stage stage = Stage::PolicyRead;
    std::string prompt_name;   // prompt template name+version, e.g. "policy_extract.v1"
    std::string prompt_digest; // sha256 of the prompt text
    std::string response;
    std::uint64_t prompt_tokens = 0;
    std::uint64_t completion_tokens = 0;
    std::uint64_t elapsed_ms = 0;
};

struct CostRow {
    std::uint64_t prompt_tokens = 0;
    std::uint64_t completion_tokens = 0;
    std::uint64_t elapsed_ms = 0;

    std::uint64_t total_tokens() const { return prompt_tokens + completion_tokens; }
};

/// Per-stage and overall sums over a ledger.
struct CostReport {
    std::map<std::string, CostRow> per_stage;
    CostRow overall;
};

/// Ordered record of all model exchanges. Appends are atomic; totals are
/// order-independent sums.
class UsageLedger {
public:
    void append(ChatExchange exchange);
    std::vector<ChatExchange> snapshot() const;
    std::size_t size() const;
    CostReport totals() const;

private:
    mutable std::mutex mu_;
    std::vector<ChatExchange> exchanges_;
};

/// Pure aggregation over the ledger's exchanges.
CostReport ledger_totals(const UsageLedger& ledger);

enum class Backend { Live, Replay, Record };

std::string_view backend_name(Backend backend);
Backend backend_from_name(std::string_view name);

struct ReplayEntry {
    std::string response;
    std::uint64_t prompt_tokens = 0;
    std::uint64_t completion_tokens = 0;
    std::uint64_t elapsed_ms = 0;
    std::string prompt; // optional, kept for fixture auditing
};

/// Frozen transcripts keyed by prompt digest. A path may be a single JSON
/// file or a directory of them (merged in name order, later files win).
class ReplayStore {
public:
    static ReplayStore load(const std::vector<std::filesystem::path>& paths);

    const ReplayEntry* find(const std::string& digest) const;
    void put(const std::string& digest, ReplayEntry entry);
    void save(const std::filesystem::path& path) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, ReplayEntry> entries_;
};

struct ClientConfig {
    Backend backend = Backend::Replay;
    std::string base_url = "https://api.deepseek.com";
    std::string model = "deepseek-chat";
    std::string api_key;
    double temperature = 0.0;
    int max_retries = 2;
    int parallelism = 4;
    int retry_backoff_ms = 250;
    std::vector<std::filesystem::path> replay_paths;
    std::filesystem::path record_path;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Posts an OpenAI-style chat-completions request body and returns the raw
/// response. Injected in tests; the default uses HTTPS against
/// cfg.base_url + "/chat/completions".
using Transport = std::function<HttpResponse(const ClientConfig& cfg, const std::string& body)>;

Transport default_transport();

/// The single boundary for model calls. Thread-safe; callers may issue
/// bounded-parallel requests. Under the replay backend no network is ever
/// touched and execution is forced sequential so reruns are bit-identical.
class LlmClient {
public:
    explicit LlmClient(ClientConfig cfg, Transport transport = {});

    /// Sends one prompt, appends the exchange to the ledger, and returns it.
    /// Empty prompts are a precondition error. Live transport failures after
    /// the retry budget raise TransportError; unknown prompts under replay
    /// raise ReplayMissError.
    ChatExchange complete(Stage stage, const std::string& prompt_name, const std::string& prompt);

    UsageLedger& ledger() { return ledger_; }
    const UsageLedger& ledger() const { return ledger_; }

    Backend backend() const { return cfg_.backend; }
    const ClientConfig& config() const { return cfg_; }

    /// Worker bound for callers that fan out; 1 under replay.
    int parallelism() const;

    /// Record backend: persist the accumulated fixture. No-op otherwise.
    void flush_record();

private:
    ChatExchange complete_over_http(Stage stage, const std::string& prompt_name,
                                    const std::string& prompt, const std::string& digest);

    ClientConfig cfg_;
    Transport transport_;
    UsageLedger ledger_;
    ReplayStore replay_;
    std::mutex record_mu_;
    bool record_dirty_ = false;
};

/// Ledger sidecar file (schema polcheck-ledger v1). Under the replay backend
/// the wall clock of the original recorded run is what matters, so callers
/// pass the fixture-summed elapsed as wall_clock_ms there.
nlohmann::json ledger_to_json(const UsageLedger& ledger, Backend backend,
                              std::uint64_t wall_clock_ms);
void write_ledger_file(const std::filesystem::path& path, const UsageLedger& ledger,
                       Backend backend, std::uint64_t wall_clock_ms);

/// Token/time totals of one pipeline, as consumed by cost comparison.
struct CostSummary {
    std::uint64_t prompt_tokens = 0;
    std::uint64_t completion_tokens = 0;
    std::uint64_t pipeline_elapsed_ms = 0;
    std::uint64_t wall_clock_ms = 0;

    std::uint64_t total_tokens() const { return prompt_tokens + completion_tokens; }

    CostSummary& operator+=(const CostSummary& o);
};

CostSummary read_ledger_summary(const std::filesystem::path& path);

} // namespace polcheck
