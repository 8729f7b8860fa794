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
#include <random>
#include <string>

#include "polcheck/llm_client.hpp"
#include "polcheck/prompt_catalog.hpp"
#include "polcheck/vocab.hpp"

namespace polcheck::test {

inline std::filesystem::path repo_root() {
#ifdef POLCHECK_SOURCE_DIR
    return std::filesystem::path(POLCHECK_SOURCE_DIR);
#else
    return std::filesystem::current_path();
#endif
}

inline std::filesystem::path data_dir() { return repo_root() / "data"; }
inline std::filesystem::path prompts_dir() { return repo_root() / "prompts"; }
inline std::filesystem::path fixtures_dir() { return repo_root() / "tests/fixtures"; }

inline const Vocab& vocab() {
    static Vocab v = Vocab::load(data_dir());
    return v;
}

inline const Taxonomy& taxonomy() { return vocab().taxonomy(); }

inline const PromptCatalog& prompts() {
    static PromptCatalog p = PromptCatalog::load(prompts_dir());
    return p;
}

/// Replay client over one or more fixture files under tests/fixtures/replay.
inline LlmClient replay_client(const std::vector<std::string>& fixture_names) {
    ClientConfig cfg;
    cfg.backend = Backend::Replay;
    for (const std::string& name : fixture_names)
        cfg.replay_paths.push_back(fixtures_dir() / "replay" / name);
    return LlmClient(std::move(cfg));
}

/// A transport that must never be reached; used to prove that the replay
/// backend performs no network access.
inline Transport panicking_transport() {
    return [](const ClientConfig&, const std::string&) -> HttpResponse {
        std::abort();
    };
}

/// Fresh scratch directory under the build tree's temp space.
class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag) {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() /
                ("polcheck_" + tag + "_" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace polcheck::test
