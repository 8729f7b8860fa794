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

#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace polcheck {

struct Diagnostic {
    std::string where;
    std::string message;
};

/// Collects non-fatal warnings emitted during a pipeline run. Hard failures
/// are exceptions; everything here is "kept going, but you should know".
/// Thread-safe: workers append concurrently.
class Diagnostics {
public:
    void warn(std::string where, std::string message) {
        std::lock_guard<std::mutex> lock(mu_);
        items_.push_back({std::move(where), std::move(message)});
    }

    std::vector<Diagnostic> warnings() const {
        std::lock_guard<std::mutex> lock(mu_);
        return items_;
    }

    std::size_t count() const {
        std::lock_guard<std::mutex> lock(mu_);
        return items_.size();
    }

    bool empty() const { return count() == 0; }

    /// True if any warning message contains the needle. Test convenience.
    bool contains(std::string_view needle) const {
        std::lock_guard<std::mutex> lock(mu_);
        for (const auto& it : items_) {
            if (it.message.find(needle) != std::string::npos ||
                it.where.find(needle) != std::string::npos)
                return true;
        }
        return false;
    }

private:
    mutable std::mutex mu_;
    std::vector<Diagnostic> items_;
};

} // namespace polcheck
