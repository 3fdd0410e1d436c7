// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include "authorrag/corpus.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

namespace authorrag {

struct GenerationParams {
    double temperature = 0.7;
    std::size_t max_new_tokens = 128;
    std::string model_tag;

    /// Throws ConfigError.
    void validate() const;
    /// SHA-256 of the canonical JSON of the sampling parameters.
    std::string digest() const;

    bool operator==(const GenerationParams&) const = default;
};

struct GenerationResult {
    std::string text;
    std::string model_tag;
    std::chrono::duration<double> latency{0};
    bool cached = false;
    int attempts = 0;
};

class LlmBackend {
  public:
    virtual ~LlmBackend() = default;
    /// Throws TransportError (retryable), ContextOverflowError or GenerationError.
    virtual std::string complete(const std::string& prompt, const GenerationParams& params) = 0;
    virtual std::string name() const = 0;
};

/// Replies with the first `tokens` whitespace-separated tokens of the prompt,
/// counted after the last occurrence of `anchor` when it is non-empty and present.
class MockEchoBackend final : public LlmBackend {
  public:
    explicit MockEchoBackend(std::size_t tokens = 5, std::string anchor = {});

    std::string complete(const std::string& prompt, const GenerationParams& params) override;
    std::string name() const override { return "mock-echo"; }

  private:
    std::size_t tokens_;
    std::string anchor_;
};

/// OpenAI-compatible POST {base_url}/chat/completions.
class OpenAiChatBackend final : public LlmBackend {
  public:
    struct Options {
        std::string base_url;
        std::string api_key;
        int timeout_seconds = 120;
    };

    explicit OpenAiChatBackend(Options options);

    std::string complete(const std::string& prompt, const GenerationParams& params) override;
    std::string name() const override { return "openai-chat"; }

    static std::string request_body(const std::string& prompt, const GenerationParams& params);
    /// Throws GenerationError for a body without a completion.
    static std::string parse_response(std::string_view body);

  private:
    Options options_;
};

struct CachedResponse {
    std::string text;
    std::string model_tag;
};

/// Append-only JSONL file of (key, model, params, prompt digest, text, timestamp).
class ResponseCache {
  public:
    /// Loads existing records; a torn final line is skipped.
    explicit ResponseCache(std::filesystem::path file);

    static std::string key(std::string_view prompt, const GenerationParams& params);

    std::optional<CachedResponse> get(const std::string& key) const;
    void put(const std::string& key, const std::string& prompt, const GenerationParams& params,
             const std::string& text);
    std::size_t size() const;

  private:
    std::filesystem::path file_;
    mutable std::mutex mu_;
    std::map<std::string, CachedResponse, std::less<>> entries_;
};

class Generator {
  public:
    struct Options {
        int max_attempts = 3;
        std::chrono::milliseconds backoff{200};
        std::size_t max_in_flight = 4;
        std::optional<std::filesystem::path> cache_file;
    };

    Generator(std::shared_ptr<LlmBackend> backend, Options options);

    /// Precondition: prompt non-empty. Identical concurrent requests share one backend call.
    GenerationResult generate(const std::string& prompt, const GenerationParams& params);

    /// complete() invocations, retries included.
    std::size_t backend_calls() const noexcept { return calls_.load(); }
    const ResponseCache* cache() const noexcept { return cache_.get(); }

  private:
    GenerationResult call_backend(const std::string& prompt, const GenerationParams& params);

    std::shared_ptr<LlmBackend> backend_;
    Options options_;
    std::unique_ptr<ResponseCache> cache_;
    std::atomic<std::size_t> calls_{0};

    std::mutex mu_;
    std::map<std::string, std::shared_future<GenerationResult>> in_flight_;
    std::map<std::string, CachedResponse> memory_;

    std::mutex slots_mu_;
    std::condition_variable slots_cv_;
    std::size_t slots_used_ = 0;
};

/// Trims; for title tasks keeps the first non-empty line and strips a leading
/// "Title:"/"Headline:" label and surrounding quotes.
std::string postprocess_output(Task task, std::string_view raw, bool clean_titles = true);

} // namespace authorrag
