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

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polcheck/baseline.hpp"
#include "polcheck/consistency_checker.hpp"
#include "polcheck/diagnostics.hpp"
#include "polcheck/errors.hpp"
#include "polcheck/eval_harness.hpp"
#include "polcheck/knowledge_graph.hpp"
#include "polcheck/leak_extractor.hpp"
#include "polcheck/llm_client.hpp"
#include "polcheck/policy_reader.hpp"
#include "polcheck/prompt_catalog.hpp"
#include "polcheck/text.hpp"
#include "polcheck/vocab.hpp"

namespace fs = std::filesystem;
using namespace polcheck;

namespace {

// Exit codes are a stable contract: 0 success / no violations, 1 violations
// found or all inputs failed, 2 usage or configuration errors.
constexpr int kExitOk = 0;
constexpr int kExitViolations = 1;
constexpr int kExitUsage = 2;

std::map<std::string, std::string> parse_config_file(const fs::path& path) {
    std::map<std::string, std::string> values;
    for (const std::string& raw : split_lines(read_file(path))) {
        std::string line = trim(raw);
        if (line.empty() || line[0] == '#')
            continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config file line is not key=value: " + line);
        values[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return values;
}

/// Model/backend options shared by every subcommand that can touch the
/// model. Flags win over the config file, which wins over defaults.
struct CommonOpts {
    std::string config_file;
    std::string backend;
    std::string base_url;
    std::string model;
    double temperature = 0.0;
    int max_retries = 2;
    int parallelism = 4;
    std::vector<std::string> replay;
    std::string record;
    std::string data_dir;
    std::string prompts_dir;

    CLI::Option* o_backend = nullptr;
    CLI::Option* o_base_url = nullptr;
    CLI::Option* o_model = nullptr;
    CLI::Option* o_temperature = nullptr;
    CLI::Option* o_max_retries = nullptr;
    CLI::Option* o_parallelism = nullptr;
    CLI::Option* o_replay = nullptr;
    CLI::Option* o_record = nullptr;
    CLI::Option* o_data_dir = nullptr;
    CLI::Option* o_prompts_dir = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_file, "key=value config file (flags win)");
        o_backend = cmd->add_option("--backend", backend, "model backend: live|replay|record");
        o_base_url = cmd->add_option("--base-url", base_url, "chat-completions base URL");
        o_model = cmd->add_option("--model", model, "model name");
        o_temperature = cmd->add_option("--temperature", temperature, "sampling temperature");
        o_max_retries = cmd->add_option("--max-retries", max_retries, "transport retry budget");
        o_parallelism =
            cmd->add_option("--parallelism", parallelism, "max in-flight model requests");
        o_replay = cmd->add_option("--replay", replay,
                                   "replay fixture file or directory (repeatable)");
        o_record = cmd->add_option("--record", record, "fixture file to record live exchanges");
        o_data_dir = cmd->add_option("--data-dir", data_dir,
                                     "directory with taxonomy and rule tables");
        o_prompts_dir = cmd->add_option("--prompts-dir", prompts_dir,
                                        "directory with prompt templates");
    }

    struct Resolved {
        std::optional<Backend> backend;
        ClientConfig client;
        fs::path data_dir{"data"};
        fs::path prompts_dir{"prompts"};
    };

    Resolved resolve() const {
        std::map<std::string, std::string> file_values;
        if (!config_file.empty())
            file_values = parse_config_file(config_file);

        auto pick = [&](const CLI::Option* opt, const std::string& flag_value,
                        const char* key, const std::string& fallback) -> std::string {
            if (opt && opt->count() > 0)
                return flag_value;
            auto it = file_values.find(key);
            return it != file_values.end() ? it->second : fallback;
        };

        Resolved r;
        std::string backend_value = pick(o_backend, backend, "backend", "");
        if (!backend_value.empty())
            r.backend = backend_from_name(backend_value);

        r.client.base_url = pick(o_base_url, base_url, "base_url", r.client.base_url);
        r.client.model = pick(o_model, model, "model", r.client.model);
        r.client.temperature =
            std::stod(pick(o_temperature, std::to_string(temperature), "temperature",
                           std::to_string(r.client.temperature)));
        r.client.max_retries = std::stoi(pick(o_max_retries, std::to_string(max_retries),
                                              "max_retries",
                                              std::to_string(r.client.max_retries)));
        r.client.parallelism = std::stoi(pick(o_parallelism, std::to_string(parallelism),
                                              "parallelism",
                                              std::to_string(r.client.parallelism)));

        if (o_replay && o_replay->count() > 0) {
            for (const std::string& p : replay)
                r.client.replay_paths.emplace_back(p);
        } else if (file_values.count("replay")) {
            for (const std::string& p : split(file_values.at("replay"), ','))
                if (!trim(p).empty())
                    r.client.replay_paths.emplace_back(trim(p));
        }
        std::string record_value = pick(o_record, record, "record", "");
        if (!record_value.empty())
            r.client.record_path = record_value;

        r.data_dir = pick(o_data_dir, data_dir, "data_dir", "data");
        r.prompts_dir = pick(o_prompts_dir, prompts_dir, "prompts_dir", "prompts");

        if (const char* key = std::getenv("POLCHECK_API_KEY"))
            r.client.api_key = key;
        return r;
    }
};

void require_exists(const fs::path& path, const char* what) {
    if (!fs::exists(path))
        throw ConfigError(std::string(what) + " not found: " + path.string());
}

Vocab load_vocab(const CommonOpts::Resolved& r) {
    require_exists(r.data_dir / "taxonomy.txt", "taxonomy file");
    return Vocab::load(r.data_dir);
}

std::unique_ptr<LlmClient> make_client(const CommonOpts::Resolved& r, const char* why) {
    if (!r.backend)
        throw ConfigError(std::string(why) + " requires --backend live|replay|record");
    ClientConfig cfg = r.client;
    cfg.backend = *r.backend;
    for (const fs::path& p : cfg.replay_paths)
        require_exists(p, "replay fixture");
    return std::make_unique<LlmClient>(std::move(cfg));
}

fs::path ledger_sidecar(fs::path out) {
    out.replace_extension(".ledger.json");
    return out;
}

void print_warnings(const Diagnostics& diag) {
    for (const Diagnostic& d : diag.warnings())
        std::cerr << "warning: " << d.where << ": " << d.message << "\n";
}

std::uint64_t wall_clock_for(const LlmClient& client, std::uint64_t measured_ms) {
    // A replayed run reports the recorded pipeline time, not the time spent
    // replaying lookups.
    if (client.backend() == Backend::Replay)
        return client.ledger().totals().overall.elapsed_ms;
    return measured_ms;
}

// ---- read-policy ----------------------------------------------------------

struct ReadPolicyArgs {
    std::string policy_file;
    std::string out = "policy_kg.json";
    bool strip_html_flag = false;
    CommonOpts common;
};

int cmd_read_policy(const ReadPolicyArgs& args) {
    auto r = args.common.resolve();
    require_exists(args.policy_file, "policy file");
    require_exists(r.prompts_dir, "prompts directory");
    Vocab vocab = load_vocab(r);
    PromptCatalog prompts = PromptCatalog::load(r.prompts_dir);
    std::unique_ptr<LlmClient> client = make_client(r, "read-policy");

    std::string doc = read_file(args.policy_file);
    if (args.strip_html_flag)
        doc = strip_html(doc);

    Diagnostics diag;
    const auto start = std::chrono::steady_clock::now();
    KnowledgeGraph kg = read_policy(doc, *client, prompts, vocab, diag);
    const auto measured = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();

    kg.save(args.out);
    write_ledger_file(ledger_sidecar(args.out), client->ledger(), client->backend(),
                      wall_clock_for(*client, static_cast<std::uint64_t>(measured)));
    client->flush_record();

    print_warnings(diag);
    std::cout << fs::path(args.policy_file).filename().string() << ": "
              << segment_policy(doc).size() << " segment(s), " << kg.size()
              << " policy triple(s) -> " << args.out << "\n";
    return kExitOk;
}

// ---- extract-leaks --------------------------------------------------------

struct ExtractLeaksArgs {
    std::vector<std::string> xml_files;
    std::string out = "leak_kg.json";
    bool llm_map = false;
    CommonOpts common;
};

int cmd_extract_leaks(const ExtractLeaksArgs& args) {
    auto r = args.common.resolve();
    Vocab vocab = load_vocab(r);
    RuleTables rules = RuleTables::load(r.data_dir);

    std::unique_ptr<LlmClient> client;
    std::optional<PromptCatalog> prompts;
    if (args.llm_map) {
        require_exists(r.prompts_dir, "prompts directory");
        prompts = PromptCatalog::load(r.prompts_dir);
        client = make_client(r, "--llm-map");
    }

    std::vector<fs::path> paths(args.xml_files.begin(), args.xml_files.end());
    Diagnostics diag;
    const auto start = std::chrono::steady_clock::now();
    LeakExtraction extraction =
        extract_leak_kg(paths, rules, vocab, client.get(),
                        prompts ? &*prompts : nullptr, diag, r.client.parallelism);
    const auto measured = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();

    extraction.kg.save(args.out);
    if (client) {
        write_ledger_file(ledger_sidecar(args.out), client->ledger(), client->backend(),
                          wall_clock_for(*client, static_cast<std::uint64_t>(measured)));
        client->flush_record();
    }

    print_warnings(diag);
    for (const FileSummary& f : extraction.files) {
        if (f.parse_failed)
            std::cout << f.file << ": parse failed\n";
        else
            std::cout << f.file << ": " << f.records << " record(s), " << f.classified
                      << " classified, " << f.issues << " issue(s)\n";
    }
    std::cout << extraction.kg.size() << " leak triple(s) -> " << args.out << "\n";
    return extraction.parsed_files() > 0 ? kExitOk : kExitViolations;
}

// ---- check ----------------------------------------------------------------

struct CheckArgs {
    std::string policy_kg;
    std::string leak_kg;
    std::string out = "verdicts.json";
    std::string report_path;
    bool single_file = false;
    bool llm_report = false;
    CommonOpts common;
};

std::string sanitize_for_filename(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '.' && c != '-')
            c = '_';
    return s;
}

int cmd_check(const CheckArgs& args) {
    auto r = args.common.resolve();
    require_exists(args.policy_kg, "policy knowledge-graph file");
    require_exists(args.leak_kg, "leak knowledge-graph file");
    Vocab vocab = load_vocab(r);

    KnowledgeGraph policy = KnowledgeGraph::load(args.policy_kg, vocab.taxonomy());
    KnowledgeGraph leaks = KnowledgeGraph::load(args.leak_kg, vocab.taxonomy());
    if (policy.kind() != KgKind::Policy)
        throw ConfigError("--policy file holds a " + std::string(kg_kind_name(policy.kind())) +
                          " graph, expected policy");
    if (leaks.kind() != KgKind::Leak)
        throw ConfigError("--leaks file holds a " + std::string(kg_kind_name(leaks.kind())) +
                          " graph, expected leak");

    std::unique_ptr<LlmClient> client;
    std::optional<PromptCatalog> prompts;
    if (args.llm_report) {
        require_exists(r.prompts_dir, "prompts directory");
        prompts = PromptCatalog::load(r.prompts_dir);
        client = make_client(r, "--llm-report");
    }

    Diagnostics diag;
    const auto start = std::chrono::steady_clock::now();
    std::vector<Verdict> verdicts = check_all(leaks, policy, &diag);
    save_verdicts(args.out, verdicts);

    std::size_t consistent = 0, contradicted = 0, undeclared = 0;
    for (const Verdict& v : verdicts) {
        switch (v.outcome) {
        case Outcome::Consistent: ++consistent; break;
        case Outcome::Contradicted: ++contradicted; break;
        case Outcome::Undeclared: ++undeclared; break;
        }
    }

    if (!args.report_path.empty()) {
        std::string concatenated;
        std::size_t file_index = 0;
        for (const Verdict& v : verdicts) {
            if (!v.is_violation())
                continue;
            ReportText report = render_report(v, client.get(),
                                              prompts ? &*prompts : nullptr, &diag);
            std::string body = report.plain;
            if (report.polished)
                body += "\n---\n" + *report.polished + "\n";
            if (args.single_file) {
                if (!concatenated.empty())
                    concatenated += "\n========\n\n";
                concatenated += body;
            } else {
                fs::path dir(args.report_path);
                fs::create_directories(dir);
                std::string name =
                    "report_" + std::to_string(file_index++) + "_" +
                    sanitize_for_filename(v.leak.provenance.to_string()) + ".txt";
                write_file(dir / name, body);
            }
        }
        if (args.single_file)
            write_file(args.report_path, concatenated);
    }

    const auto measured = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();
    if (client) {
        write_ledger_file(ledger_sidecar(args.out), client->ledger(), client->backend(),
                          wall_clock_for(*client, static_cast<std::uint64_t>(measured)));
        client->flush_record();
    }

    print_warnings(diag);
    std::cout << verdicts.size() << " leak(s) checked: " << consistent << " consistent, "
              << contradicted << " contradicted, " << undeclared << " undeclared -> "
              << args.out << "\n";
    return (contradicted + undeclared) > 0 ? kExitViolations : kExitOk;
}

// ---- baseline -------------------------------------------------------------

struct BaselineArgs {
    std::string policy_file;
    std::vector<std::string> xml_files;
    std::string out = "baseline_verdicts.json";
    std::size_t chunk_chars = 6000;
    CommonOpts common;
};

int cmd_baseline(const BaselineArgs& args) {
    auto r = args.common.resolve();
    require_exists(args.policy_file, "policy file");
    require_exists(r.prompts_dir, "prompts directory");
    for (const std::string& p : args.xml_files)
        require_exists(p, "analysis result file");
    PromptCatalog prompts = PromptCatalog::load(r.prompts_dir);
    std::unique_ptr<LlmClient> client = make_client(r, "baseline");

    std::vector<fs::path> paths(args.xml_files.begin(), args.xml_files.end());
    Diagnostics diag;
    const auto start = std::chrono::steady_clock::now();
    std::vector<BaselineEntry> entries = run_baseline(
        paths, read_file(args.policy_file), *client, prompts, diag, args.chunk_chars);
    const auto measured = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - start)
                              .count();

    save_baseline_verdicts(args.out, entries);
    write_ledger_file(ledger_sidecar(args.out), client->ledger(), client->backend(),
                      wall_clock_for(*client, static_cast<std::uint64_t>(measured)));
    client->flush_record();

    std::size_t violations = 0;
    for (const BaselineEntry& e : entries)
        violations += e.violation ? 1 : 0;
    print_warnings(diag);
    std::cout << entries.size() << " record(s) judged: " << violations << " violation(s) -> "
              << args.out << "\n";
    return violations > 0 ? kExitViolations : kExitOk;
}

// ---- evaluate -------------------------------------------------------------

struct EvaluateArgs {
    std::string truth_file;
    std::vector<std::string> verdicts; // name=path[,path...]
    std::vector<std::string> ledgers;  // name=path[,path...]
    std::string csv_out;
};

std::vector<std::pair<std::string, std::vector<fs::path>>>
parse_named_paths(const std::vector<std::string>& specs, const char* flag) {
    std::vector<std::pair<std::string, std::vector<fs::path>>> out;
    for (const std::string& spec : specs) {
        std::size_t eq = spec.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError(std::string(flag) + " expects name=path[,path...]: " + spec);
        std::string name = trim(spec.substr(0, eq));
        std::vector<fs::path> paths;
        for (const std::string& p : split(spec.substr(eq + 1), ','))
            if (!trim(p).empty())
                paths.emplace_back(trim(p));
        if (paths.empty())
            throw ConfigError(std::string(flag) + " has no paths: " + spec);
        auto existing = std::find_if(out.begin(), out.end(),
                                     [&](const auto& e) { return e.first == name; });
        if (existing != out.end())
            existing->second.insert(existing->second.end(), paths.begin(), paths.end());
        else
            out.emplace_back(std::move(name), std::move(paths));
    }
    return out;
}

int cmd_evaluate(const EvaluateArgs& args) {
    require_exists(args.truth_file, "ground-truth file");
    GroundTruth truth = GroundTruth::load(args.truth_file);

    auto verdict_sets = parse_named_paths(args.verdicts, "--verdicts");
    if (verdict_sets.empty())
        throw ConfigError("evaluate needs at least one --verdicts name=path");

    std::vector<std::string> names;
    std::vector<MetricSet> sets;
    for (const auto& [name, paths] : verdict_sets) {
        std::vector<VerdictRecord> records;
        for (const fs::path& p : paths) {
            require_exists(p, "verdict file");
            std::vector<VerdictRecord> batch = load_verdict_records(p);
            records.insert(records.end(), batch.begin(), batch.end());
        }
        ConfusionCounts counts = score(records, truth);
        names.push_back(name);
        sets.push_back(metrics(counts));
        std::cout << name << ": tp=" << counts.tp << " fp=" << counts.fp << " tn=" << counts.tn
                  << " fn=" << counts.fn << " (n=" << counts.total() << ")\n";
    }
    std::cout << "\n" << format_metrics_table(names, sets);

    std::string csv = format_metrics_csv(names, sets);

    auto ledger_sets = parse_named_paths(args.ledgers, "--ledgers");
    if (!ledger_sets.empty()) {
        if (ledger_sets.size() < 2)
            throw ConfigError("cost comparison needs at least two --ledgers columns");
        std::vector<std::pair<std::string, CostSummary>> summaries;
        for (const auto& [name, paths] : ledger_sets) {
            CostSummary total;
            for (const fs::path& p : paths) {
                require_exists(p, "ledger file");
                total += read_ledger_summary(p);
            }
            summaries.emplace_back(name, total);
        }
        CostTable table = compare_costs(summaries);
        std::cout << "\n" << format_cost_table(table);
        csv += "\n" + format_cost_csv(table);
    }

    if (!args.csv_out.empty())
        write_file(args.csv_out, csv);

    for (const MetricSet& m : sets)
        if (m.any_undefined())
            return kExitViolations; // CI-visible: a metric was 0/0
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"polcheck: privacy policy / app behavior consistency checking"};
    app.require_subcommand(1);

    ReadPolicyArgs read_args;
    CLI::App* read_cmd =
        app.add_subcommand("read-policy", "convert a privacy policy into a policy graph");
    read_cmd->add_option("policy", read_args.policy_file, "policy text file")->required();
    read_cmd->add_option("--out", read_args.out, "output graph file (.json or .tsv)");
    read_cmd->add_flag("--strip-html", read_args.strip_html_flag,
                       "strip HTML markup before segmentation");
    read_args.common.attach(read_cmd);

    ExtractLeaksArgs extract_args;
    CLI::App* extract_cmd = app.add_subcommand(
        "extract-leaks", "convert static-analysis XML results into a leak graph");
    extract_cmd->add_option("xml", extract_args.xml_files, "analysis result XML files")
        ->required();
    extract_cmd->add_option("--out", extract_args.out, "output graph file (.json or .tsv)");
    extract_cmd->add_flag("--llm-map", extract_args.llm_map,
                          "let the model classify flows (rule tables as fallback)");
    extract_args.common.attach(extract_cmd);

    CheckArgs check_args;
    CLI::App* check_cmd =
        app.add_subcommand("check", "check a leak graph against a policy graph");
    check_cmd->add_option("--policy", check_args.policy_kg, "policy graph file")->required();
    check_cmd->add_option("--leaks", check_args.leak_kg, "leak graph file")->required();
    check_cmd->add_option("--out", check_args.out, "output verdict file");
    check_cmd->add_option("--report", check_args.report_path,
                          "write violation reports (directory, or file with --single-file)");
    check_cmd->add_flag("--single-file", check_args.single_file,
                        "concatenate reports into one file");
    check_cmd->add_flag("--llm-report", check_args.llm_report,
                        "polish reports with the model (requires a backend)");
    check_args.common.attach(check_cmd);

    BaselineArgs baseline_args;
    CLI::App* baseline_cmd =
        app.add_subcommand("baseline", "run the pure-model pipeline for comparison");
    baseline_cmd->add_option("--policy", baseline_args.policy_file, "policy text file")
        ->required();
    baseline_cmd->add_option("xml", baseline_args.xml_files, "analysis result XML files")
        ->required();
    baseline_cmd->add_option("--out", baseline_args.out, "output verdict file");
    baseline_cmd->add_option("--chunk-chars", baseline_args.chunk_chars,
                             "max characters of XML per exchange");
    baseline_args.common.attach(baseline_cmd);

    EvaluateArgs eval_args;
    CLI::App* eval_cmd =
        app.add_subcommand("evaluate", "score verdict files and compare cost ledgers");
    eval_cmd->add_option("--truth", eval_args.truth_file, "ground-truth file")->required();
    eval_cmd->add_option("--verdicts", eval_args.verdicts,
                         "name=path[,path...] verdict files (repeatable)")
        ->required();
    eval_cmd->add_option("--ledgers", eval_args.ledgers,
                         "name=path[,path...] ledger sidecars (repeatable)");
    eval_cmd->add_option("--csv", eval_args.csv_out, "also write tables as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (read_cmd->parsed())
            return cmd_read_policy(read_args);
        if (extract_cmd->parsed())
            return cmd_extract_leaks(extract_args);
        if (check_cmd->parsed())
            return cmd_check(check_args);
        if (baseline_cmd->parsed())
            return cmd_baseline(baseline_args);
        if (eval_cmd->parsed())
            return cmd_evaluate(eval_args);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolations;
    }
    return kExitUsage;
}
