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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace polcheck {

/// Base class for all polcheck errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad usage, missing files, or invalid configuration. Maps to exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A caller violated a documented precondition (empty input, wrong kind, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Malformed input data. Carries a 1-based line/column when known.
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg, std::size_t line = 0, std::size_t column = 0)
        : Error(format(msg, line, column)), line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    static std::string format(const std::string& msg, std::size_t line, std::size_t column) {
        if (line == 0)
            return msg;
        return msg + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
    }

    std::size_t line_;
    std::size_t column_;
};

/// Network failure after the retry budget was exhausted, tagged with the pipeline stage.
class TransportError : public Error {
public:
    TransportError(const std::string& stage, const std::string& msg)
        : Error("transport error in stage " + stage + ": " + msg), stage_(stage) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

/// A prompt was not found in the replay fixture.
class ReplayMissError : public Error {
public:
    ReplayMissError(const std::string& stage, const std::string& digest)
        : Error("replay miss in stage " + stage + ": no fixture entry for prompt digest " + digest),
          stage_(stage), digest_(digest) {}

    const std::string& stage() const { return stage_; }
    const std::string& digest() const { return digest_; }

private:
    std::string stage_;
    std::string digest_;
};

} // namespace polcheck
