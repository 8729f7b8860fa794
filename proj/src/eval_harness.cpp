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

#include "polcheck/eval_harness.hpp"

#include <cstdio>
#include <sstream>

#include "polcheck/errors.hpp"
#include "polcheck/text.hpp"

namespace polcheck {

GroundTruth GroundTruth::load(const std::filesystem::path& path) {
    std::string content = read_file(path);
    std::vector<std::string> lines = split_lines(content);
    if (lines.empty() || trim(lines[0]) != "# polcheck-truth v1")
        throw ParseError("missing '# polcheck-truth v1' header in " + path.string(), 1, 1);

    GroundTruth truth;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty() || line[0] == '#')
            continue;
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError(path.string() + ": expected '<provenance>\\t<violation|ok>'", i + 1,
                             1);
        std::string provenance = trim(line.substr(0, tab));
        std::string label = normalize_ws(line.substr(tab + 1));
        bool violation;
        if (label == "violation")
            violation = true;
        else if (label == "ok")
            violation = false;
        else
            throw ParseError(path.string() + ": label must be 'violation' or 'ok', got '" +
                                 label + "'",
                             i + 1, 1);
        if (!truth.entries_.emplace(provenance, violation).second)
            throw ConfigError("duplicate ground-truth entry for " + provenance + " in " +
                              path.string());
    }
    return truth;
}

std::optional<bool> GroundTruth::label(const std::string& provenance) const {
    auto it = entries_.find(provenance);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

ConfusionCounts score(const std::vector<VerdictRecord>& verdicts, const GroundTruth& truth) {
    std::vector<std::string> missing;
    ConfusionCounts counts;
    for (const VerdictRecord& v : verdicts) {
        auto label = truth.label(v.provenance);
        if (!label) {
            missing.push_back(v.provenance);
            continue;
        }
        const bool predicted = v.outcome != "consistent"; // violation-positive convention
        const bool actual = *label;
        if (predicted && actual)
            ++counts.tp;
        else if (predicted && !actual)
            ++counts.fp;
        else if (!predicted && actual)
            ++counts.fn;
        else
            ++counts.tn;
    }
    if (!missing.empty()) {
        std::string list;
        for (const std::string& p : missing)
            list += (list.empty() ? "" : ", ") + p;
        throw ConfigError("verdict provenance(s) missing from ground truth: " + list);
    }
    return counts;
}

MetricSet metrics(const ConfusionCounts& counts) {
    MetricSet m;
    if (counts.tp + counts.fp > 0)
        m.precision = 100.0 * static_cast<double>(counts.tp) /
                      static_cast<double>(counts.tp + counts.fp);
    if (counts.tp + counts.fn > 0)
        m.recall =
            100.0 * static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
    if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0)
        m.f1 = 2.0 * (*m.precision) * (*m.recall) / (*m.precision + *m.recall);
    return m;
}

std::string format_pct(std::optional<double> pct, int decimals) {
    if (!pct)
        return "undefined";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, *pct);
    return buf;
}

std::optional<double> reduction_pct(std::uint64_t base, std::uint64_t value) {
    if (base == 0)
        return value == 0 ? std::optional<double>(0.0) : std::nullopt;
    return 100.0 * (static_cast<double>(base) - static_cast<double>(value)) /
           static_cast<double>(base);
}

CostTable compare_costs(const std::vector<std::pair<std::string, CostSummary>>& ledgers) {
    if (ledgers.size() < 2)
        throw PreconditionError("compare_costs: need at least two ledgers");
    CostTable table;
    const CostSummary& base = ledgers.front().second;
    for (const auto& [name, cost] : ledgers) {
        table.names.push_back(name);
        table.costs.push_back(cost);
        CostTable::Reductions r;
        if (table.costs.size() > 1) {
            r.prompt_tokens = reduction_pct(base.prompt_tokens, cost.prompt_tokens);
            r.completion_tokens = reduction_pct(base.completion_tokens, cost.completion_tokens);
            r.total_tokens = reduction_pct(base.total_tokens(), cost.total_tokens());
            r.pipeline_elapsed = reduction_pct(base.pipeline_elapsed_ms, cost.pipeline_elapsed_ms);
            r.wall_clock = reduction_pct(base.wall_clock_ms, cost.wall_clock_ms);
        }
        table.reductions.push_back(r);
    }
    return table;
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

std::vector<std::string> metric_row_names() {
    return {"precision_pct", "recall_pct", "f1_pct"};
}

std::vector<std::vector<std::string>> metric_cells(const std::vector<MetricSet>& sets) {
    std::vector<std::vector<std::string>> rows(3);
    for (const MetricSet& m : sets) {
        rows[0].push_back(format_pct(m.precision));
        rows[1].push_back(format_pct(m.recall));
        rows[2].push_back(format_pct(m.f1));
    }
    return rows;
}

std::string render_table(const std::string& corner, const std::vector<std::string>& columns,
                         const std::vector<std::string>& row_names,
                         const std::vector<std::vector<std::string>>& cells, char sep) {
    if (sep == ',') {
        std::string out = corner;
        for (const std::string& c : columns)
            out += "," + c;
        out += "\n";
        for (std::size_t r = 0; r < row_names.size(); ++r) {
            out += row_names[r];
            for (const std::string& cell : cells[r])
                out += "," + cell;
            out += "\n";
        }
        return out;
    }
    std::vector<std::size_t> widths;
    widths.push_back(corner.size());
    for (const std::string& r : row_names)
        widths[0] = std::max(widths[0], r.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        std::size_t w = columns[c].size();
        for (const auto& row : cells)
            if (c < row.size())
                w = std::max(w, row[c].size());
        widths.push_back(w);
    }
    std::string out = pad(corner, widths[0]);
    for (std::size_t c = 0; c < columns.size(); ++c)
        out += "  " + pad(columns[c], widths[c + 1]);
    out += "\n";
    for (std::size_t r = 0; r < row_names.size(); ++r) {
        out += pad(row_names[r], widths[0]);
        for (std::size_t c = 0; c < cells[r].size(); ++c)
            out += "  " + pad(cells[r][c], widths[c + 1]);
        out += "\n";
    }
    return out;
}

std::vector<std::string> cost_row_names() {
    return {"prompt_tokens", "completion_tokens", "total_tokens", "pipeline_elapsed_s",
            "wall_clock_s"};
}

std::string seconds(std::uint64_t ms) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.1f", static_cast<double>(ms) / 1000.0);
    return buf;
}

std::vector<std::vector<std::string>> cost_cells(const CostTable& table, bool with_reductions) {
    std::vector<std::vector<std::string>> rows(5);
    for (std::size_t i = 0; i < table.costs.size(); ++i) {
        const CostSummary& c = table.costs[i];
        rows[0].push_back(std::to_string(c.prompt_tokens));
        rows[1].push_back(std::to_string(c.completion_tokens));
        rows[2].push_back(std::to_string(c.total_tokens()));
        rows[3].push_back(seconds(c.pipeline_elapsed_ms));
        rows[4].push_back(seconds(c.wall_clock_ms));
        if (with_reductions && i > 0) {
            const CostTable::Reductions& r = table.reductions[i];
            auto fmt = [](std::optional<double> v) {
                return v ? "-" + format_pct(v, 1) + "%" : std::string("n/a");
            };
            rows[0].back() += " (" + fmt(r.prompt_tokens) + ")";
            rows[1].back() += " (" + fmt(r.completion_tokens) + ")";
            rows[2].back() += " (" + fmt(r.total_tokens) + ")";
            rows[3].back() += " (" + fmt(r.pipeline_elapsed) + ")";
            rows[4].back() += " (" + fmt(r.wall_clock) + ")";
        }
    }
    return rows;
}

} // namespace

std::string format_metrics_table(const std::vector<std::string>& names,
                                 const std::vector<MetricSet>& sets) {
    return render_table("metric", names, metric_row_names(), metric_cells(sets), ' ');
}

std::string format_metrics_csv(const std::vector<std::string>& names,
                               const std::vector<MetricSet>& sets) {
    return render_table("metric", names, metric_row_names(), metric_cells(sets), ',');
}

std::string format_cost_table(const CostTable& table) {
    return render_table("cost", table.names, cost_row_names(), cost_cells(table, true), ' ');
}

std::string format_cost_csv(const CostTable& table) {
    // reductions as separate columns so the file stays machine-friendly
    std::vector<std::string> columns = table.names;
    for (std::size_t i = 1; i < table.names.size(); ++i)
        columns.push_back(table.names[i] + "_reduction_pct");
    auto rows = cost_cells(table, false);
    auto fmt = [](std::optional<double> v) { return v ? format_pct(v, 1) : std::string("n/a"); };
    for (std::size_t i = 1; i < table.reductions.size(); ++i) {
        const CostTable::Reductions& r = table.reductions[i];
        rows[0].push_back(fmt(r.prompt_tokens));
        rows[1].push_back(fmt(r.completion_tokens));
        rows[2].push_back(fmt(r.total_tokens));
        rows[3].push_back(fmt(r.pipeline_elapsed));
        rows[4].push_back(fmt(r.wall_clock));
    }
    return render_table("cost", columns, cost_row_names(), rows, ',');
}

} // namespace polcheck
