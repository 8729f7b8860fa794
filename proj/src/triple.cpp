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

#include "polcheck/triple.hpp"

#include "polcheck/errors.hpp"
#include "polcheck/text.hpp"

namespace polcheck {

Actor Actor::third_party(std::string_view name) {
    return Actor(Kind::ThirdParty, normalize_ws(name));
}

std::string Actor::to_string() const {
    if (kind_ == Kind::FirstParty)
        return "first_party";
    if (name_.empty())
        return "third_party";
    return "third_party:" + name_;
}

Actor Actor::parse(std::string_view text) {
    std::string t = trim(text);
    if (t == "first_party")
        return first_party();
    if (t == "third_party")
        return third_party();
    static constexpr std::string_view prefix = "third_party:";
    if (t.rfind(prefix, 0) == 0) {
        std::string name = normalize_ws(std::string_view(t).substr(prefix.size()));
        if (name.empty())
            throw ParseError("empty third-party name in actor: " + t);
        return third_party(name);
    }
    throw ParseError("unknown actor: " + t);
}

bool actor_covers(const Actor& declared, const Actor& observed) {
    if (declared.kind() != observed.kind())
        return false;
    if (declared.kind() == Actor::Kind::FirstParty)
        return true;
    // Unnamed third-party declarations act as a wildcard over SDK names.
    return declared.name().empty() || declared.name() == observed.name();
}

std::string Action::to_string() const {
    std::string v = verb == Verb::Collect ? "collect" : "share";
    return negated ? "not-" + v : v;
}

Action Action::parse(std::string_view text) {
    std::string t = trim(text);
    if (t == "collect")
        return {Verb::Collect, false};
    if (t == "share")
        return {Verb::Share, false};
    if (t == "not-collect")
        return {Verb::Collect, true};
    if (t == "not-share")
        return {Verb::Share, true};
    throw ParseError("unknown action: " + t);
}

std::string Provenance::to_string() const {
    if (kind_ == Kind::PolicySegment)
        return "seg:" + std::to_string(segment_index_);
    return "flow:" + file_ + "#" + std::to_string(record_id_);
}

namespace {

std::size_t parse_index(std::string_view text, std::string_view what) {
    if (text.empty())
        throw ParseError("missing index in " + std::string(what));
    std::size_t value = 0;
    for (char c : text) {
        if (c < '0' || c > '9')
            throw ParseError("bad index in " + std::string(what) + ": " + std::string(text));
        value = value * 10 + static_cast<std::size_t>(c - '0');
    }
    return value;
}

} // namespace

Provenance Provenance::parse(std::string_view text) {
    std::string t = trim(text);
    static constexpr std::string_view seg = "seg:";
    static constexpr std::string_view flow = "flow:";
    if (t.rfind(seg, 0) == 0)
        return segment(parse_index(std::string_view(t).substr(seg.size()), "segment provenance"));
    if (t.rfind(flow, 0) == 0) {
        std::string_view rest = std::string_view(t).substr(flow.size());
        std::size_t hash = rest.rfind('#');
        if (hash == std::string_view::npos || hash == 0)
            throw ParseError("bad flow provenance: " + t);
        std::string file(rest.substr(0, hash));
        return Provenance::flow(std::move(file),
                                parse_index(rest.substr(hash + 1), "flow provenance"));
    }
    throw ParseError("unknown provenance: " + t);
}

std::string Triple::practice_key() const {
    return actor.to_string() + "|" + action.to_string() + "|" + data.id();
}

std::string Triple::to_string() const {
    return "<" + actor.to_string() + ", " + action.to_string() + ", " + data.id() + ">";
}

} // namespace polcheck
