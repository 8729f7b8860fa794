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

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <type_traits>
#include <vector>

namespace polcheck {

/// Applies f to every element with up to `workers` threads. Results come
/// back in input order regardless of completion order. The first exception
/// thrown by any worker is rethrown after all workers finish.
template <typename T, typename F>
auto parallel_map(const std::vector<T>& items, int workers, F&& f)
    -> std::vector<std::invoke_result_t<F&, const T&>> {
    using R = std::invoke_result_t<F&, const T&>;
    std::vector<std::optional<R>> slots(items.size());

    if (workers <= 1 || items.size() <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i)
            slots[i].emplace(f(items[i]));
    } else {
        std::atomic<std::size_t> next{0};
        std::mutex err_mu;
        std::exception_ptr first_error;
        auto run = [&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= items.size())
                    return;
                try {
                    slots[i].emplace(f(items[i]));
                } catch (...) {
                    std::lock_guard<std::mutex> lock(err_mu);
                    if (!first_error)
                        first_error = std::current_exception();
                }
            }
        };
        std::size_t n = std::min<std::size_t>(static_cast<std::size_t>(workers), items.size());
        std::vector<std::thread> pool;
        pool.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            pool.emplace_back(run);
        for (auto& t : pool)
            t.join();
        if (first_error)
            std::rethrow_exception(first_error);
    }

    std::vector<R> out;
    out.reserve(items.size());
    for (auto& s : slots)
        out.push_back(std::move(*s));
    return out;
}

} // namespace polcheck
