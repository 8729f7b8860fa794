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

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace polcheck {

/// The responsible entity of a data practice: the app itself (first party)
/// or an embedded SDK / external service (third party, optionally named).
class Actor {
public:
    enum class Kind { FirstParty, ThirdParty };

    static Actor first_party() { return Actor(Kind::FirstParty, {}); }
    /// Name is trimmed and lowercased; empty means "some third party".
    static Actor third_party(std::string_view name = {});

    Kind kind() const { return kind_; }
    /// Non-empty only for named third parties.
    const std::string& name() const { return name_; }
    bool is_first_party() const { return kind_ == Kind::FirstParty; }

    std::string to_string() const; // "first_party" | "third_party" | "third_party:<name>"
    static Actor parse(std::string_view text);

    bool operator==(const Actor& o) const { return kind_ == o.kind_ && name_ == o.name_; }
    bool operator!=(const Actor& o) const { return !(*this == o); }

private:
    Actor(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    Kind kind_;
    std::string name_;
};

/// True when a declared (policy-side) actor covers an observed (leak-side)
/// actor. Exact match, except that an unnamed third-party declaration covers
/// every third-party leak actor.
bool actor_covers(const Actor& declared, const Actor& observed);

/// A data operation. The vocabulary is closed: collect, share, and their
/// negations.
struct Action {
    enum class Verb { Collect, Share };

    Verb verb = Verb::Collect;
    bool negated = false;

    std::string to_string() const; // "collect" | "share" | "not-collect" | "not-share"
    static Action parse(std::string_view text);

    bool operator==(const Action& o) const { return verb == o.verb && negated == o.negated; }
    bool operator!=(const Action& o) const { return !(*this == o); }
};

/// Flips the negation bit; an involution.
inline Action negate_action(Action a) {
    a.negated = !a.negated;
    return a;
}

/// All four legal actions, for exhaustive checks.
inline std::array<Action, 4> all_actions() {
    return {Action{Action::Verb::Collect, false}, Action{Action::Verb::Collect, true},
            Action{Action::Verb::Share, false}, Action{Action::Verb::Share, true}};
}

/// A canonical data-type taxonomy entry. Instances are only created through
/// a Taxonomy, which validates membership.
class DataType {
public:
    const std::string& id() const { return id_; }
    const std::string& label() const { return label_; }

    bool operator==(const DataType& o) const { return id_ == o.id_; }
    bool operator!=(const DataType& o) const { return !(*this == o); }

private:
    friend class Taxonomy;
    DataType(std::string id, std::string label) : id_(std::move(id)), label_(std::move(label)) {}

    std::string id_;
    std::string label_;
};

/// Where a triple came from: a policy sentence or a static-analysis flow
/// record. Knowledge graphs reject triples whose provenance style does not
/// match their kind.
class Provenance {
public:
    enum class Kind { PolicySegment, FlowRecord };

    static Provenance segment(std::size_t index) {
        return Provenance(Kind::PolicySegment, index, {}, 0);
    }
    static Provenance flow(std::string file, std::size_t record) {
        return Provenance(Kind::FlowRecord, 0, std::move(file), record);
    }

    Kind kind() const { return kind_; }
    std::size_t segment_index() const { return segment_index_; }
    const std::string& file() const { return file_; }
    std::size_t record_id() const { return record_id_; }

    std::string to_string() const; // "seg:<n>" | "flow:<file>#<n>"
    static Provenance parse(std::string_view text);

    bool operator==(const Provenance& o) const {
        return kind_ == o.kind_ && segment_index_ == o.segment_index_ && file_ == o.file_ &&
               record_id_ == o.record_id_;
    }
    bool operator!=(const Provenance& o) const { return !(*this == o); }

private:
    Provenance(Kind kind, std::size_t segment_index, std::string file, std::size_t record_id)
        : kind_(kind), segment_index_(segment_index), file_(std::move(file)),
          record_id_(record_id) {}

    Kind kind_;
    std::size_t segment_index_;
    std::string file_;
    std::size_t record_id_;
};

/// One declared or observed data practice.
struct Triple {
    Actor actor;
    Action action;
    DataType data;
    Provenance provenance;

    /// Equality on the (actor, action, data) key; provenance excluded.
    bool same_practice(const Triple& o) const {
        return actor == o.actor && action == o.action && data == o.data;
    }

    /// Dedupe/display key, e.g. "third_party:adnet|share|device_id".
    std::string practice_key() const;

    std::string to_string() const; // "<first_party, not-share, email_address>"

    bool operator==(const Triple& o) const {
        return same_practice(o) && provenance == o.provenance;
    }
    bool operator!=(const Triple& o) const { return !(*this == o); }
};

} // namespace polcheck
