// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/generation.hpp"

#include "authorrag/digest.hpp"
#include "authorrag/error.hpp"
#include "authorrag/resources.hpp"
#include "authorrag/text.hpp"

#include <array>
#include <cmath>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>
#include <sstream>
#include <thread>

namespace authorrag {
namespace {

using Clock = std::chrono::steady_clock;

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json params_json(const GenerationParams& p) {
    return {{"model", p.model_tag}, {"temperature", p.temperature}, {"max_new_tokens", p.max_new_tokens}};
}

std::string_view strip_label(std::string_view s) {
    for (const std::string_view label : {"title:", "headline:"}) {
        if (s.size() >= label.size() && text::to_lower_ascii(s.substr(0, label.size())) == label) {
            return text::trim(s.substr(label.size()));
        }
    }
    return s;
}

std::string_view strip_quotes(std::string_view s) {
    static constexpr std::array<std::pair<std::string_view, std::string_view>, 5> kPairs = {{
        {"\"", "\""},
        {"'", "'"},
        {"\xE2\x80\x9C", "\xE2\x80\x9D"},
        {"\xE2\x80\x98", "\xE2\x80\x99"},
        {"**", "**"},
    }};
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [open, close] : kPairs) {
            if (s.size() >= open.size() + close.size() && text::starts_with(s, open) && text::ends_with(s, close)) {
                s = text::trim(s.substr(open.size(), s.size() - open.size() - close.size()));
                changed = true;
            }
        }
    }
    return s;
}

} // namespace

void GenerationParams::validate() const {
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw ConfigError("temperature must be a finite number >= 0");
    }
    if (max_new_tokens < 1) {
        throw ConfigError("max_new_tokens must be at least 1");
    }
}

std::string GenerationParams::digest() const { return sha256_hex(params_json(*this).dump()); }

MockEchoBackend::MockEchoBackend(std::size_t tokens, std::string anchor) : tokens_(tokens), anchor_(std::move(anchor)) {}

std::string MockEchoBackend::complete(const std::string& prompt, const GenerationParams&) {
    std::string_view source = prompt;
    if (!anchor_.empty()) {
        if (const auto at = source.rfind(anchor_); at != std::string_view::npos) {
            source.remove_prefix(at + anchor_.size());
        }
    }
    auto words = text::split_whitespace(source);
    if (words.size() > tokens_) {
        words.resize(tokens_);
    }
    return text::join(words, " ");
}

ResponseCache::ResponseCache(std::filesystem::path file) : file_(std::move(file)) {
    std::error_code ec;
    if (!std::filesystem::exists(file_, ec)) {
        return;
    }
    std::istringstream in(read_file(file_));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        try {
            const auto j = nlohmann::json::parse(line);
            entries_[j.at("key").get<std::string>()] = {j.at("text").get<std::string>(),
                                                        j.at("model").get<std::string>()};
        } catch (const nlohmann::json::exception& e) {
            spdlog::warn("{}:{}: skipping unreadable response record ({})", file_.string(), line_no, e.what());
        }
    }
}

std::string ResponseCache::key(std::string_view prompt, const GenerationParams& params) {
    std::string input = "gen/1";
    input += '\0';
    input += params.model_tag;
    input += '\0';
    input += sha256_hex(prompt);
    input += '\0';
    input += params.digest();
    return sha256_hex(input);
}

std::optional<CachedResponse> ResponseCache::get(const std::string& key) const {
    std::lock_guard lock(mu_);
    const auto it = entries_.find(key);
    if (it == entries_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void ResponseCache::put(const std::string& key, const std::string& prompt, const GenerationParams& params,
                        const std::string& text) {
    const nlohmann::json record = {{"key", key},
                                   {"model", params.model_tag},
                                   {"params", params_json(params)},
                                   {"prompt_sha256", sha256_hex(prompt)},
                                   {"text", text},
                                   {"timestamp", utc_timestamp()}};
    std::lock_guard lock(mu_);
    if (file_.has_parent_path()) {
        std::filesystem::create_directories(file_.parent_path());
    }
    std::ofstream out(file_, std::ios::binary | std::ios::app);
    if (!out) {
        throw Error("cannot append to response cache " + file_.string());
    }
    out << record.dump() << '\n';
    out.flush();
    entries_[key] = {text, params.model_tag};
}

std::size_t ResponseCache::size() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

Generator::Generator(std::shared_ptr<LlmBackend> backend, Options options)
    : backend_(std::move(backend)), options_(std::move(options)) {
    if (!backend_) {
        throw PreconditionError("Generator needs a backend");
    }
    if (options_.max_attempts < 1 || options_.max_in_flight < 1) {
        throw ConfigError("max_attempts and max_in_flight must be at least 1");
    }
    if (options_.cache_file) {
        cache_ = std::make_unique<ResponseCache>(*options_.cache_file);
    }
}

GenerationResult Generator::generate(const std::string& prompt, const GenerationParams& params) {
    if (text::trim(prompt).empty()) {
        throw PreconditionError("cannot generate from an empty prompt");
    }
    params.validate();
    const auto started = Clock::now();
    const auto key = ResponseCache::key(prompt, params);

    std::promise<GenerationResult> promise;
    std::shared_future<GenerationResult> waiting;
    {
        std::lock_guard lock(mu_);
        std::optional<CachedResponse> hit;
        if (cache_) {
            hit = cache_->get(key);
        } else if (const auto it = memory_.find(key); it != memory_.end()) {
            hit = it->second;
        }
        if (hit) {
            GenerationResult r;
            r.text = std::move(hit->text);
            r.model_tag = std::move(hit->model_tag);
            r.cached = true;
            r.latency = Clock::now() - started;
            return r;
        }
        if (const auto it = in_flight_.find(key); it != in_flight_.end()) {
            waiting = it->second;
        } else {
            in_flight_.emplace(key, promise.get_future().share());
        }
    }
    if (waiting.valid()) {
        auto r = waiting.get();
        r.cached = true;
        r.attempts = 0;
        r.latency = Clock::now() - started;
        return r;
    }

    try {
        auto result = call_backend(prompt, params);
        {
            std::lock_guard lock(mu_);
            if (cache_) {
                cache_->put(key, prompt, params, result.text);
            } else {
                memory_[key] = {result.text, result.model_tag};
            }
            in_flight_.erase(key);
        }
        promise.set_value(result);
        result.latency = Clock::now() - started;
        return result;
    } catch (...) {
        {
            std::lock_guard lock(mu_);
            in_flight_.erase(key);
        }
        promise.set_exception(std::current_exception());
        throw;
    }
}

GenerationResult Generator::call_backend(const std::string& prompt, const GenerationParams& params) {
    {
        std::unique_lock lock(slots_mu_);
        slots_cv_.wait(lock, [this] { return slots_used_ < options_.max_in_flight; });
        ++slots_used_;
    }
    struct Release {
        Generator* g;
        ~Release() {
            {
                std::lock_guard lock(g->slots_mu_);
                --g->slots_used_;
            }
            g->slots_cv_.notify_one();
        }
    } release{this};

    GenerationResult result;
    result.model_tag = params.model_tag;
    for (int attempt = 1;; ++attempt) {
        result.attempts = attempt;
        calls_.fetch_add(1);
        try {
            result.text = backend_->complete(prompt, params);
            return result;
        } catch (const ContextOverflowError&) {
            throw;
        } catch (const TransportError& e) {
            if (attempt >= options_.max_attempts) {
                throw GenerationError("generation failed after " + std::to_string(attempt) +
                                      " attempts: " + e.what());
            }
            const auto delay = options_.backoff * (1 << (attempt - 1));
            spdlog::warn("generation attempt {} failed ({}), retrying in {} ms", attempt, e.what(), delay.count());
            std::this_thread::sleep_for(delay);
        }
    }
}

std::string postprocess_output(Task task, std::string_view raw, bool clean_titles) {
    auto s = text::trim(raw);
    if (!is_title_task(task) || !clean_titles) {
        return std::string(s);
    }
    while (!s.empty()) {
        const auto nl = s.find('\n');
        const auto line = text::trim(s.substr(0, nl));
        if (!line.empty() || nl == std::string_view::npos) {
            s = line;
            break;
        }
        s.remove_prefix(nl + 1);
    }
    s = strip_quotes(strip_label(strip_quotes(s)));
    return std::string(s);
}

} // namespace authorrag
