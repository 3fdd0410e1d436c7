// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "common/http.hpp"

#include "authorrag/error.hpp"

#include <httplib.h>

namespace authorrag::http {

Endpoint parse_endpoint(std::string_view base_url) {
    const auto scheme_end = base_url.find("://");
    if (scheme_end == std::string_view::npos) {
        throw ConfigError("base URL '" + std::string(base_url) + "' has no scheme");
    }
    const auto scheme = base_url.substr(0, scheme_end);
    if (scheme != "http" && scheme != "https") {
        throw ConfigError("unsupported URL scheme '" + std::string(scheme) + "'");
    }
    const auto path_start = base_url.find('/', scheme_end + 3);
    Endpoint e;
    e.origin = std::string(base_url.substr(0, path_start));
    if (path_start != std::string_view::npos) {
        e.prefix = std::string(base_url.substr(path_start));
        while (!e.prefix.empty() && e.prefix.back() == '/') {
            e.prefix.pop_back();
        }
    }
    if (e.origin.size() <= scheme_end + 3) {
        throw ConfigError("base URL '" + std::string(base_url) + "' has no host");
    }
    return e;
}

Result post_json(const Endpoint& endpoint, std::string_view path, const std::string& body, const std::string& api_key,
                 int timeout_seconds) {
    Result result;
    httplib::Client client(endpoint.origin);
    client.set_connection_timeout(timeout_seconds, 0);
    client.set_read_timeout(timeout_seconds, 0);
    client.set_write_timeout(timeout_seconds, 0);
    httplib::Headers headers;
    if (!api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + api_key);
    }
    const auto response = client.Post(endpoint.prefix + std::string(path), headers, body, "application/json");
    if (!response) {
        result.error = httplib::to_string(response.error());
        return result;
    }
    result.transport_ok = true;
    result.status = response->status;
    result.body = response->body;
    return result;
}

bool retryable_status(int status) noexcept { return status == 408 || status == 429 || status >= 500; }

} // namespace authorrag::http
