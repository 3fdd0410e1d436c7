// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/error.hpp"
#include "authorrag/generation.hpp"
#include "authorrag/text.hpp"
#include "common/http.hpp"

#include <nlohmann/json.hpp>

namespace authorrag {
namespace {

bool mentions_context_overflow(std::string_view body) {
    const auto lower = text::to_lower_ascii(body);
    return lower.find("context_length_exceeded") != std::string::npos ||
           lower.find("maximum context length") != std::string::npos ||
           lower.find("context length") != std::string::npos || lower.find("too many tokens") != std::string::npos;
}

} // namespace

OpenAiChatBackend::OpenAiChatBackend(Options options) : options_(std::move(options)) {
    http::parse_endpoint(options_.base_url);
}

std::string OpenAiChatBackend::request_body(const std::string& prompt, const GenerationParams& params) {
    const nlohmann::json body = {
        {"model", params.model_tag},
        {"messages", nlohmann::json::array({{{"role", "system"}, {"content", ""}}, {{"role", "user"}, {"content", prompt}}})},
        {"temperature", params.temperature},
        {"max_tokens", params.max_new_tokens},
    };
    return body.dump();
}

std::string OpenAiChatBackend::parse_response(std::string_view body) {
    try {
        const auto j = nlohmann::json::parse(body);
        const auto& message = j.at("choices").at(0).at("message");
        const auto& content = message.at("content");
        return content.is_null() ? std::string() : content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw GenerationError(std::string("malformed chat completion response: ") + e.what());
    }
}

std::string OpenAiChatBackend::complete(const std::string& prompt, const GenerationParams& params) {
    const auto result = http::post_json(http::parse_endpoint(options_.base_url), "/chat/completions",
                                        request_body(prompt, params), options_.api_key, options_.timeout_seconds);
    if (!result.transport_ok) {
        throw TransportError("chat completion request failed: " + result.error);
    }
    if (result.status == 200) {
        return parse_response(result.body);
    }
    const auto detail = "HTTP " + std::to_string(result.status) + ": " + result.body.substr(0, 300);
    if (http::retryable_status(result.status)) {
        throw TransportError("chat completion " + detail);
    }
    if ((result.status == 400 || result.status == 413) && mentions_context_overflow(result.body)) {
        throw ContextOverflowError("prompt exceeds the model context window (" + detail + ")");
    }
    throw GenerationError("chat completion rejected: " + detail);
}

} // namespace authorrag
