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

#include "polcheck/policy_reader.hpp"

#include <cctype>

#include "polcheck/errors.hpp"
#include "polcheck/parallel.hpp"
#include "polcheck/text.hpp"

namespace polcheck {

namespace {

constexpr const char* kExtractPrompt = "policy_extract.v1";
constexpr const char* kNegationPrompt = "policy_negation.v1";
constexpr const char* kReformatSuffix = "reformat_suffix.v1";

bool is_terminal(char c) {
    return c == '.' || c == '!' || c == '?';
}

bool is_closer(char c) {
    return c == '"' || c == '\'' || c == ')' || c == ']';
}

bool is_blank_line(std::string_view line) {
    for (char c : line)
        if (!std::isspace(static_cast<unsigned char>(c)))
            return false;
    return true;
}

} // namespace

std::vector<PolicySegment> segment_policy(std::string_view doc) {
    if (trim(doc).empty())
        throw PreconditionError("segment_policy: empty or whitespace-only document");

    // paragraph ranges: maximal runs of non-blank lines
    std::vector<std::pair<std::size_t, std::size_t>> paragraphs;
    std::size_t line_start = 0;
    std::size_t para_begin = std::string_view::npos;
    std::size_t para_end = 0;
    for (std::size_t i = 0; i <= doc.size(); ++i) {
        if (i == doc.size() || doc[i] == '\n') {
            std::string_view line = doc.substr(line_start, i - line_start);
            if (is_blank_line(line)) {
                if (para_begin != std::string_view::npos) {
                    paragraphs.emplace_back(para_begin, para_end);
                    para_begin = std::string_view::npos;
                }
            } else {
                if (para_begin == std::string_view::npos)
                    para_begin = line_start;
                para_end = i;
            }
            line_start = i + 1;
        }
    }
    if (para_begin != std::string_view::npos)
        paragraphs.emplace_back(para_begin, para_end);

    std::vector<PolicySegment> segments;
    for (auto [pb, pe] : paragraphs) {
        std::size_t pos = pb;
        while (pos < pe) {
            while (pos < pe && std::isspace(static_cast<unsigned char>(doc[pos])))
                ++pos;
            if (pos >= pe)
                break;
            std::size_t begin = pos;
            std::size_t end = pe;
            while (pos < pe) {
                if (is_terminal(doc[pos])) {
                    std::size_t stop = pos;
                    while (stop + 1 < pe && is_terminal(doc[stop + 1]))
                        ++stop;
                    while (stop + 1 < pe && is_closer(doc[stop + 1]))
                        ++stop;
                    if (stop + 1 >= pe ||
                        std::isspace(static_cast<unsigned char>(doc[stop + 1]))) {
                        end = stop + 1;
                        pos = stop + 1;
                        break;
                    }
                    pos = stop + 1;
                    continue;
                }
                ++pos;
            }
            if (end == pe) { // ran to the paragraph end without a boundary
                end = pe;
                while (end > begin && std::isspace(static_cast<unsigned char>(doc[end - 1])))
                    --end;
                pos = pe;
            }
            PolicySegment seg;
            seg.index = segments.size();
            seg.begin = begin;
            seg.end = end;
            seg.text = std::string(doc.substr(begin, end - begin));
            segments.push_back(std::move(seg));
        }
    }
    return segments;
}

namespace {

struct ParsedReply {
    std::vector<RawCandidate> candidates;
    bool well_formed = false; // had at least one practice line or an explicit "none"
    std::size_t bad_lines = 0;
};

ParsedReply parse_practice_lines(const std::string& response) {
    ParsedReply out;
    for (const std::string& raw : split_lines(response)) {
        std::string line = trim(raw);
        if (line.empty())
            continue;
        if (to_lower(line) == "none") {
            out.well_formed = true;
            continue;
        }
        static constexpr std::string_view kPrefix = "practice:";
        if (to_lower(line).rfind(kPrefix, 0) != 0)
            continue;
        std::vector<std::string> parts = split(line.substr(kPrefix.size()), '|');
        if (parts.size() != 3) {
            ++out.bad_lines;
            continue;
        }
        RawCandidate c{trim(parts[0]), trim(parts[1]), trim(parts[2])};
        if (c.actor_text.empty() || c.action_text.empty() || c.data_text.empty()) {
            ++out.bad_lines;
            continue;
        }
        out.candidates.push_back(std::move(c));
        out.well_formed = true;
    }
    return out;
}

std::string segment_tag(const PolicySegment& segment) {
    return "seg:" + std::to_string(segment.index);
}

} // namespace

std::vector<RawCandidate> extract_candidates(const PolicySegment& segment, LlmClient& client,
                                             const PromptCatalog& prompts, Diagnostics& diag) {
    const std::string prompt = prompts.render(kExtractPrompt, {{"segment", segment.text}});
    ParsedReply parsed =
        parse_practice_lines(client.complete(Stage::PolicyRead, kExtractPrompt, prompt).response);

    if (!parsed.well_formed) {
        const std::string retry = prompt + "\n\n" + prompts.raw(kReformatSuffix);
        parsed = parse_practice_lines(
            client.complete(Stage::PolicyRead, kExtractPrompt, retry).response);
        if (!parsed.well_formed) {
            diag.warn(segment_tag(segment),
                      "model reply was malformed twice; segment yields no candidates");
            return {};
        }
    }
    if (parsed.bad_lines > 0)
        diag.warn(segment_tag(segment), std::to_string(parsed.bad_lines) +
                                            " malformed practice line(s) ignored");
    return parsed.candidates;
}

KnowledgeGraph read_policy(std::string_view doc, LlmClient& client, const PromptCatalog& prompts,
                           const Vocab& vocab, Diagnostics& diag) {
    std::vector<PolicySegment> segments = segment_policy(doc);

    auto extract_one = [&](const PolicySegment& segment) -> std::vector<RawCandidate> {
        std::vector<RawCandidate> candidates =
            extract_candidates(segment, client, prompts, diag);

        // A negation cue with only affirmative candidates is the classic
        // misread; re-ask once with the negation-focused prompt.
        if (!candidates.empty() && has_negation_cue(segment.text)) {
            bool any_negated = false;
            for (const RawCandidate& c : candidates) {
                if (auto action = vocab.normalize_action(c.action_text); action && action->negated)
                    any_negated = true;
            }
            if (!any_negated) {
                const std::string reprompt =
                    prompts.render(kNegationPrompt, {{"segment", segment.text}});
                ParsedReply second = parse_practice_lines(
                    client.complete(Stage::PolicyRead, kNegationPrompt, reprompt).response);
                if (second.well_formed && !second.candidates.empty()) {
                    candidates = std::move(second.candidates);
                } else {
                    diag.warn(segment_tag(segment),
                              "negation re-ask returned nothing usable; keeping the "
                              "original candidates");
                }
            }
        }
        return candidates;
    };

    std::vector<std::vector<RawCandidate>> per_segment =
        parallel_map(segments, client.parallelism(), extract_one);

    KnowledgeGraph kg(KgKind::Policy);
    for (std::size_t i = 0; i < segments.size(); ++i) {
        for (const RawCandidate& c : per_segment[i]) {
            auto actor = vocab.normalize_actor(c.actor_text);
            if (!actor) {
                diag.warn(segment_tag(segments[i]), "unknown actor wording: " + c.actor_text);
                continue;
            }
            auto action = vocab.normalize_action(c.action_text);
            if (!action) {
                diag.warn(segment_tag(segments[i]), "unknown action wording: " + c.action_text);
                continue;
            }
            auto data = vocab.normalize_data_type(c.data_text);
            if (!data) {
                diag.warn(segment_tag(segments[i]),
                          "unmapped data type dropped: " + c.data_text);
                continue;
            }
            kg.insert(Triple{*actor, *action, *data, Provenance::segment(segments[i].index)});
        }
    }
    return kg;
}

} // namespace polcheck
