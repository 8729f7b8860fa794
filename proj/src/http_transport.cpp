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

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "polcheck/errors.hpp"
#include "polcheck/llm_client.hpp"

namespace polcheck {

namespace {

// Splits "https://host[:port]/prefix" into the client origin and path prefix.
std::pair<std::string, std::string> split_base_url(const std::string& base_url) {
    std::size_t scheme = base_url.find("://");
    if (scheme == std::string::npos)
        throw ConfigError("base_url must include a scheme: " + base_url);
    std::size_t path = base_url.find('/', scheme + 3);
    if (path == std::string::npos)
        return {base_url, ""};
    std::string prefix = base_url.substr(path);
    while (!prefix.empty() && prefix.back() == '/')
        prefix.pop_back();
    return {base_url.substr(0, path), prefix};
}

} // namespace

Transport make_httplib_transport();

Transport make_httplib_transport() {
    return [](const ClientConfig& cfg, const std::string& body) -> HttpResponse {
        auto [origin, prefix] = split_base_url(cfg.base_url);
        httplib::Client client(origin);
        client.set_connection_timeout(30);
        client.set_read_timeout(300);
        httplib::Headers headers = {{"Authorization", "Bearer " + cfg.api_key}};
        auto result =
            client.Post(prefix + "/chat/completions", headers, body, "application/json");
        if (!result)
            throw Error("HTTP request failed: " + httplib::to_string(result.error()));
        return HttpResponse{result->status, result->body};
    };
}

} // namespace polcheck
