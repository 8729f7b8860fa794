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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polcheck/consistency_checker.hpp"
#include "polcheck/llm_client.hpp"

namespace polcheck {

/// Annotated labels, one per leak provenance; true marks a real violation.
/// Loaded from a "# polcheck-truth v1" header file with
/// "<provenance>\t<violation|ok>" rows. Duplicate provenances are rejected.
class GroundTruth {
public:
    static GroundTruth load(const std::filesystem::path& path);

    const std::map<std::string, bool>& entries() const { return entries_; }
    std::optional<bool> label(const std::string& provenance) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::map<std::string, bool> entries_;
};

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
};

/// Scores predictions against the ground truth under the violation-positive
/// convention: any outcome other than "consistent" is a predicted positive.
/// Every verdict provenance must appear in the truth; the error lists any
/// that do not.
ConfusionCounts score(const std::vector<VerdictRecord>& verdicts, const GroundTruth& truth);

/// Precision/recall/F1 as percentages at full precision; rounding happens
/// only at display. A 0/0 ratio is undefined (distinct from 0).
struct MetricSet {
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;

    bool any_undefined() const { return !precision || !recall || !f1; }
};

MetricSet metrics(const ConfusionCounts& counts);

/// "80.00" with the requested decimals, or "undefined".
std::string format_pct(std::optional<double> pct, int decimals = 2);

/// Percentage reduction of value against base, or nullopt when base is zero
/// and value is not (0 -> 0 counts as a 0.0% reduction).
std::optional<double> reduction_pct(std::uint64_t base, std::uint64_t value);

/// Cost comparison across ≥2 named pipelines; the first column is the base
/// the reductions are computed against.
struct CostTable {
    std::vector<std::string> names;
    std::vector<CostSummary> costs;

    struct Reductions {
        std::optional<double> prompt_tokens;
        std::optional<double> completion_tokens;
        std::optional<double> total_tokens;
        std::optional<double> pipeline_elapsed;
        std::optional<double> wall_clock;
    };
    std::vector<Reductions> reductions; // parallel to names; [0] is all-nullopt
};

CostTable compare_costs(const std::vector<std::pair<std::string, CostSummary>>& ledgers);

/// Aligned plain-text and comma-separated renderings of the two tables.
std::string format_metrics_table(const std::vector<std::string>& names,
                                 const std::vector<MetricSet>& sets);
std::string format_metrics_csv(const std::vector<std::string>& names,
                               const std::vector<MetricSet>& sets);
std::string format_cost_table(const CostTable& table);
std::string format_cost_csv(const CostTable& table);

} // namespace polcheck
