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

#include "polcheck/vocab.hpp"

#include "polcheck/errors.hpp"
#include "polcheck/text.hpp"

namespace polcheck {

Taxonomy Taxonomy::load(const std::filesystem::path& path) {
    Taxonomy tax;
    for (auto& [id, label] : read_table_file(path)) {
        std::string norm_id = normalize_ws(id);
        if (tax.by_id_.count(norm_id))
            throw ConfigError("duplicate taxonomy id: " + norm_id + " in " + path.string());
        tax.by_id_[norm_id] = tax.entries_.size();
        tax.by_label_[normalize_ws(label)] = tax.entries_.size();
        tax.entries_.push_back({std::move(norm_id), label});
    }
    if (tax.entries_.empty())
        throw ConfigError("taxonomy is empty: " + path.string());
    return tax;
}

bool Taxonomy::contains(std::string_view id) const {
    return by_id_.count(normalize_ws(id)) > 0;
}

DataType Taxonomy::make(std::string_view id) const {
    auto found = find_id(id);
    if (!found)
        throw ParseError("data type not in taxonomy: " + std::string(id));
    return *found;
}

std::optional<DataType> Taxonomy::find_id(std::string_view id) const {
    auto it = by_id_.find(normalize_ws(id));
    if (it == by_id_.end())
        return std::nullopt;
    const Entry& e = entries_[it->second];
    return DataType(e.id, e.label);
}

std::optional<DataType> Taxonomy::find_label(std::string_view label) const {
    auto it = by_label_.find(normalize_ws(label));
    if (it == by_label_.end())
        return std::nullopt;
    const Entry& e = entries_[it->second];
    return DataType(e.id, e.label);
}

Vocab Vocab::load(const std::filesystem::path& data_dir) {
    Vocab v;
    v.taxonomy_ = Taxonomy::load(data_dir / "taxonomy.txt");

    for (auto& [phrase, id] : read_table_file(data_dir / "data_synonyms.txt")) {
        std::string target = normalize_ws(id);
        if (!v.taxonomy_.contains(target))
            throw ConfigError("data synonym target not in taxonomy: " + phrase + " -> " + target);
        v.data_synonyms_[normalize_ws(phrase)] = target;
    }

    for (auto& [phrase, verb] : read_table_file(data_dir / "action_synonyms.txt")) {
        std::string target = normalize_ws(verb);
        if (target != "collect" && target != "share")
            throw ConfigError("action synonym target must be collect or share: " + phrase +
                              " -> " + target);
        v.action_synonyms_[normalize_ws(phrase)] =
            target == "collect" ? Action::Verb::Collect : Action::Verb::Share;
    }
    return v;
}

std::optional<DataType> Vocab::normalize_data_type(std::string_view raw) const {
    std::string key = normalize_ws(raw);
    if (key.empty())
        throw PreconditionError("normalize_data_type: empty input");
    if (auto hit = taxonomy_.find_id(key))
        return hit;
    if (auto hit = taxonomy_.find_label(key))
        return hit;
    auto it = data_synonyms_.find(key);
    if (it != data_synonyms_.end())
        return taxonomy_.find_id(it->second);
    return std::nullopt;
}

std::optional<Action> Vocab::normalize_action(std::string_view raw) const {
    std::string key = normalize_ws(raw);
    if (key.empty())
        throw PreconditionError("normalize_action: empty input");

    // canonical forms first
    if (key == "collect")
        return Action{Action::Verb::Collect, false};
    if (key == "share")
        return Action{Action::Verb::Share, false};
    if (key == "not-collect")
        return Action{Action::Verb::Collect, true};
    if (key == "not-share")
        return Action{Action::Verb::Share, true};

    // strip a leading negation phrase, then resolve the verb
    bool negated = false;
    static constexpr std::string_view kNegations[] = {
        "not-", "does not ", "do not ", "will not ", "won't ", "don't ", "doesn't ",
        "never ", "not ", "no ",
    };
    for (std::string_view neg : kNegations) {
        if (key.size() > neg.size() && key.compare(0, neg.size(), neg) == 0) {
            negated = true;
            key = trim(key.substr(neg.size()));
            break;
        }
    }

    auto it = action_synonyms_.find(key);
    if (it == action_synonyms_.end())
        return std::nullopt;
    return Action{it->second, negated};
}

std::optional<Actor> Vocab::normalize_actor(std::string_view raw) const {
    std::string key = normalize_ws(raw);
    if (key.empty())
        throw PreconditionError("normalize_actor: empty input");
    for (char& c : key)
        if (c == '_')
            c = '-';

    if (key == "first-party" || key == "first party" || key == "app" || key == "the app" ||
        key == "we" || key == "developer")
        return Actor::first_party();
    if (key == "third-party" || key == "third party" || key == "third parties" ||
        key == "partners" || key == "sdk")
        return Actor::third_party();

    static constexpr std::string_view kPrefixes[] = {"third-party:", "third party:"};
    for (std::string_view p : kPrefixes) {
        if (key.size() > p.size() && key.compare(0, p.size(), p) == 0)
            return Actor::third_party(trim(key.substr(p.size())));
    }
    return std::nullopt;
}

} // namespace polcheck
