// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/digest.hpp"
#include "authorrag/error.hpp"
#include "authorrag/resources.hpp"
#include "authorrag/retrieval.hpp"
#include "common/http.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstring>
#include <nlohmann/json.hpp>
#include <set>
#include <spdlog/spdlog.h>
#include <thread>

namespace authorrag {
namespace {

constexpr char kMagic[4] = {'A', 'R', 'V', 'E'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kHeaderBytes = 12;
constexpr std::size_t kMemoryLimit = 1u << 18;

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

std::uint32_t get_u32(std::string_view in, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
    }
    return v;
}

std::string model_slug(std::string_view model_tag) {
    std::string slug;
    for (const char c : model_tag) {
        const bool keep = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_';
        slug.push_back(keep ? c : '_');
    }
    return slug + "-" + sha256_hex(model_tag).substr(0, 8);
}

void check_vector(const std::vector<double>& v, std::size_t dim, std::string_view model_tag) {
    if (v.empty()) {
        throw EmbeddingError("backend " + std::string(model_tag) + " returned an empty vector", false);
    }
    if (dim != 0 && v.size() != dim) {
        throw EmbeddingError("backend " + std::string(model_tag) + " returned dimension " + std::to_string(v.size()) +
                                 ", expected " + std::to_string(dim),
                             false);
    }
    for (const double x : v) {
        if (!std::isfinite(x)) {
            throw EmbeddingError("backend " + std::string(model_tag) + " returned a non-finite component", false);
        }
    }
}

} // namespace

StubEmbeddingBackend::StubEmbeddingBackend(std::size_t dimension) : dim_(dimension) {
    if (dimension == 0) {
        throw PreconditionError("stub embedding dimension must be positive");
    }
}

std::string StubEmbeddingBackend::model_tag() const { return "stub-sha256/" + std::to_string(dim_); }

std::vector<double> StubEmbeddingBackend::embed_one(std::string_view text, std::size_t dimension) {
    std::vector<double> out;
    out.reserve(dimension);
    std::string input(text);
    input.resize(text.size() + 4);
    for (std::uint32_t block = 0; out.size() < dimension; ++block) {
        input[text.size() + 0] = static_cast<char>(block >> 24);
        input[text.size() + 1] = static_cast<char>((block >> 16) & 0xFF);
        input[text.size() + 2] = static_cast<char>((block >> 8) & 0xFF);
        input[text.size() + 3] = static_cast<char>(block & 0xFF);
        const auto digest = sha256(input);
        for (std::size_t i = 0; i + 1 < digest.size() && out.size() < dimension; i += 2) {
            const auto u = static_cast<unsigned>(digest[i]) << 8 | digest[i + 1];
            out.push_back(static_cast<double>(u) / 32767.5 - 1.0);
        }
    }
    return out;
}

std::vector<std::vector<double>> StubEmbeddingBackend::embed_batch(const std::vector<std::string>& texts) {
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
        out.push_back(embed_one(t, dim_));
    }
    return out;
}

HttpEmbeddingBackend::HttpEmbeddingBackend(Options options) : options_(std::move(options)), dim_(options_.dimension) {
    if (options_.model.empty()) {
        throw ConfigError("embedding backend needs a model name");
    }
    if (options_.batch_size == 0) {
        throw ConfigError("embedding batch size must be positive");
    }
    http::parse_endpoint(options_.base_url);
}

std::vector<std::vector<double>> HttpEmbeddingBackend::embed_batch(const std::vector<std::string>& texts) {
    const auto endpoint = http::parse_endpoint(options_.base_url);
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    for (std::size_t start = 0; start < texts.size(); start += options_.batch_size) {
        const auto end = std::min(texts.size(), start + options_.batch_size);
        nlohmann::json input = nlohmann::json::array();
        for (std::size_t i = start; i < end; ++i) {
            input.push_back(texts[i]);
        }
        const nlohmann::json request = {{"model", options_.model}, {"input", std::move(input)}};
        const auto result =
            http::post_json(endpoint, "/embeddings", request.dump(), options_.api_key, options_.timeout_seconds);
        if (!result.transport_ok) {
            throw EmbeddingError("embedding request failed: " + result.error, true);
        }
        if (result.status != 200) {
            throw EmbeddingError("embedding request returned HTTP " + std::to_string(result.status) + ": " +
                                     result.body.substr(0, 200),
                                 http::retryable_status(result.status));
        }
        std::vector<std::vector<double>> batch(end - start);
        try {
            const auto body = nlohmann::json::parse(result.body);
            for (const auto& item : body.at("data")) {
                const auto index = item.value("index", std::size_t{0});
                if (index >= batch.size()) {
                    throw EmbeddingError("embedding response index out of range", false);
                }
                batch[index] = item.at("embedding").get<std::vector<double>>();
            }
        } catch (const nlohmann::json::exception& e) {
            throw EmbeddingError(std::string("malformed embedding response: ") + e.what(), false);
        }
        for (auto& v : batch) {
            if (dim_.load() == 0 && !v.empty()) {
                std::size_t expected = 0;
                dim_.compare_exchange_strong(expected, v.size());
            }
            check_vector(v, dim_.load(), options_.model);
            out.push_back(std::move(v));
        }
    }
    return out;
}

EmbeddingCache::EmbeddingCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::filesystem::path EmbeddingCache::path_for(std::string_view model_tag, std::string_view text) const {
    const auto digest = sha256_hex(text);
    return dir_ / model_slug(model_tag) / digest.substr(0, 2) / (digest + ".vec");
}

std::string EmbeddingCache::encode(const std::vector<double>& values) {
    std::string out(kMagic, sizeof kMagic);
    put_u32(out, kFormatVersion);
    put_u32(out, static_cast<std::uint32_t>(values.size()));
    for (const double v : values) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        for (int i = 0; i < 8; ++i) {
            out.push_back(static_cast<char>(bits & 0xFF));
            bits >>= 8;
        }
    }
    return out;
}

std::vector<double> EmbeddingCache::decode(std::string_view bytes) {
    if (bytes.size() < kHeaderBytes || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
        throw EmbeddingError("embedding cache entry has no valid header", false);
    }
    if (get_u32(bytes, 4) != kFormatVersion) {
        throw EmbeddingError("embedding cache entry has unsupported version " + std::to_string(get_u32(bytes, 4)),
                             false);
    }
    const std::size_t dim = get_u32(bytes, 8);
    if (bytes.size() != kHeaderBytes + 8 * dim) {
        throw EmbeddingError("embedding cache entry is truncated", false);
    }
    std::vector<double> out(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        std::uint64_t bits = 0;
        for (int b = 7; b >= 0; --b) {
            bits = bits << 8 | static_cast<unsigned char>(bytes[kHeaderBytes + 8 * i + static_cast<std::size_t>(b)]);
        }
        out[i] = std::bit_cast<double>(bits);
    }
    return out;
}

std::optional<std::vector<double>> EmbeddingCache::get(std::string_view model_tag, std::string_view text) const {
    const auto path = path_for(model_tag, text);
    std::error_code ec;
    if (!std::filesystem::exists(path, ec)) {
        return std::nullopt;
    }
    return decode(read_file(path));
}

void EmbeddingCache::put(std::string_view model_tag, std::string_view text, const std::vector<double>& values) const {
    write_file_atomic(path_for(model_tag, text), encode(values));
}

Embedder::Embedder(std::shared_ptr<EmbeddingBackend> backend, std::optional<std::filesystem::path> cache_dir,
                   int max_attempts)
    : backend_(std::move(backend)), max_attempts_(max_attempts) {
    if (!backend_) {
        throw PreconditionError("Embedder needs a backend");
    }
    if (max_attempts_ < 1) {
        throw PreconditionError("max_attempts must be at least 1");
    }
    if (cache_dir) {
        disk_.emplace(*cache_dir);
    }
}

std::vector<EmbeddingVector> Embedder::embed(const std::vector<std::string>& texts) {
    if (texts.empty()) {
        throw PreconditionError("embed needs at least one text");
    }
    const auto tag = backend_->model_tag();
    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::size_t> pending;
    {
        std::lock_guard lock(mu_);
        for (std::size_t i = 0; i < texts.size(); ++i) {
            if (const auto it = memory_.find(texts[i]); it != memory_.end()) {
                out[i] = {it->second, tag};
            } else {
                pending.push_back(i);
            }
        }
    }
    if (pending.empty()) {
        return out;
    }

    // One fetcher at a time, so a text missed by two callers reaches the backend once.
    std::lock_guard fetch_lock(fetch_mu_);
    std::vector<std::string> missing;
    std::set<std::string_view> seen;
    std::map<std::string, std::vector<double>, std::less<>> found;
    {
        std::lock_guard lock(mu_);
        for (const auto i : pending) {
            if (const auto it = memory_.find(texts[i]); it != memory_.end()) {
                found.emplace(texts[i], it->second);
            }
        }
    }
    for (const auto i : pending) {
        const auto& text = texts[i];
        if (found.count(text) > 0 || !seen.insert(text).second) {
            continue;
        }
        if (disk_) {
            if (auto cached = disk_->get(tag, text)) {
                const auto dim = backend_->dimension();
                if (dim != 0 && cached->size() != dim) {
                    throw EmbeddingError("cached embedding for model " + tag + " has dimension " +
                                             std::to_string(cached->size()) + ", backend declares " +
                                             std::to_string(dim),
                                         false);
                }
                found.emplace(text, std::move(*cached));
                continue;
            }
        }
        missing.push_back(text);
    }

    if (!missing.empty()) {
        std::vector<std::vector<double>> vectors;
        for (int attempt = 1;; ++attempt) {
            try {
                backend_calls_.fetch_add(1);
                backend_texts_.fetch_add(missing.size());
                vectors = backend_->embed_batch(missing);
                break;
            } catch (const EmbeddingError& e) {
                if (!e.retryable() || attempt >= max_attempts_) {
                    throw;
                }
                spdlog::warn("embedding attempt {} failed, retrying: {}", attempt, e.what());
                std::this_thread::sleep_for(std::chrono::milliseconds(50 * attempt));
            }
        }
        if (vectors.size() != missing.size()) {
            throw EmbeddingError("backend returned " + std::to_string(vectors.size()) + " vectors for " +
                                     std::to_string(missing.size()) + " texts",
                                 false);
        }
        const auto dim = vectors.front().size();
        for (std::size_t i = 0; i < missing.size(); ++i) {
            check_vector(vectors[i], dim, tag);
            if (disk_) {
                disk_->put(tag, missing[i], vectors[i]);
            }
            found.emplace(missing[i], std::move(vectors[i]));
        }
    }

    std::lock_guard lock(mu_);
    if (disk_ && memory_.size() + found.size() > kMemoryLimit) {
        memory_.clear();
    }
    for (const auto i : pending) {
        const auto& values = found.at(texts[i]);
        out[i] = {values, tag};
        memory_.emplace(texts[i], values);
    }
    return out;
}

EmbeddingVector Embedder::embed(const std::string& text) { return std::move(embed(std::vector<std::string>{text}).front()); }

} // namespace authorrag
