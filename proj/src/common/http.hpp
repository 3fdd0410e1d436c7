// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include <string>
#include <string_view>

namespace authorrag::http {

struct Endpoint {
    std::string origin; // scheme://host[:port]
    std::string prefix; // path without trailing slash, may be empty
};

/// Throws ConfigError for URLs that are not http(s).
Endpoint parse_endpoint(std::string_view base_url);

struct Result {
    bool transport_ok = false;
    int status = 0;
    std::string body;
    std::string error;
};

/// POSTs a JSON body to origin + prefix + path. Never throws for network failures.
Result post_json(const Endpoint& endpoint, std::string_view path, const std::string& body, const std::string& api_key,
                 int timeout_seconds);

/// 408, 429 and 5xx are worth retrying.
bool retryable_status(int status) noexcept;

} // namespace authorrag::http
