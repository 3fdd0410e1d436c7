// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include "authorrag/corpus.hpp"

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace authorrag {

struct EmbeddingVector {
    std::vector<double> values;
    std::string model_tag;

    bool operator==(const EmbeddingVector&) const = default;
};

/// Throws PreconditionError on dimension mismatch or a zero vector. Result is clamped to [-1, 1].
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

class EmbeddingBackend {
  public:
    virtual ~EmbeddingBackend() = default;
    /// One vector per text. Throws EmbeddingError (retryable for transport failures).
    virtual std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) = 0;
    virtual std::string model_tag() const = 0;
    virtual std::size_t dimension() const = 0;
};

/// Deterministic vectors expanded from SHA-256(text || be32(block)): each
/// 32-byte block yields 16 components, big-endian uint16 / 32767.5 - 1.
class StubEmbeddingBackend final : public EmbeddingBackend {
  public:
    explicit StubEmbeddingBackend(std::size_t dimension = 64);

    std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) override;
    std::string model_tag() const override;
    std::size_t dimension() const override { return dim_; }

    static std::vector<double> embed_one(std::string_view text, std::size_t dimension);

  private:
    std::size_t dim_;
};

/// OpenAI-compatible POST {base_url}/embeddings.
class HttpEmbeddingBackend final : public EmbeddingBackend {
  public:
    struct Options {
        std::string base_url;
        std::string model;
        std::string api_key;
        std::size_t dimension = 0; // 0: learned from the first response
        std::size_t batch_size = 64;
        int timeout_seconds = 60;
    };

    explicit HttpEmbeddingBackend(Options options);

    std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) override;
    std::string model_tag() const override { return options_.model; }
    std::size_t dimension() const override { return dim_.load(); }

  private:
    Options options_;
    std::atomic<std::size_t> dim_;
};

/// Content-addressed vector store: <dir>/<model slug>/<hh>/<sha256>.vec with a
/// small header (magic, version, dimension) and little-endian float64 payload.
class EmbeddingCache {
  public:
    explicit EmbeddingCache(std::filesystem::path dir);

    std::optional<std::vector<double>> get(std::string_view model_tag, std::string_view text) const;
    void put(std::string_view model_tag, std::string_view text, const std::vector<double>& values) const;
    std::filesystem::path path_for(std::string_view model_tag, std::string_view text) const;

    static std::string encode(const std::vector<double>& values);
    /// Throws EmbeddingError for a corrupt payload.
    static std::vector<double> decode(std::string_view bytes);

  private:
    std::filesystem::path dir_;
};

/// Embedding front end: memory cache, optional disk cache, retries, call accounting.
class Embedder {
  public:
    Embedder(std::shared_ptr<EmbeddingBackend> backend, std::optional<std::filesystem::path> cache_dir,
             int max_attempts = 3);

    /// Precondition: texts non-empty. Each distinct text reaches the backend at most once.
    std::vector<EmbeddingVector> embed(const std::vector<std::string>& texts);
    EmbeddingVector embed(const std::string& text);

    std::string model_tag() const { return backend_->model_tag(); }
    std::size_t backend_calls() const noexcept { return backend_calls_.load(); }
    std::size_t backend_texts() const noexcept { return backend_texts_.load(); }

  private:
    std::shared_ptr<EmbeddingBackend> backend_;
    std::optional<EmbeddingCache> disk_;
    int max_attempts_;
    mutable std::mutex mu_;
    std::mutex fetch_mu_;
    std::map<std::string, std::vector<double>, std::less<>> memory_;
    std::atomic<std::size_t> backend_calls_{0};
    std::atomic<std::size_t> backend_texts_{0};
};

struct RetrievalConfig {
    std::size_t k_profile = 50;
    std::size_t n_contrastive_authors = 0;
    std::size_t samples_per_author = 3;
    std::uint64_t seed = 0;

    /// Throws ConfigError when an invariant is broken.
    void validate() const;
    /// 50/3 for LaMP-4 and LaMP-7, 7/1 for LaMP-5.
    static RetrievalConfig defaults_for(Task task);

    bool operator==(const RetrievalConfig&) const = default;
};

struct RankedDocument {
    ProfileDocument document;
    std::size_t position = 0;
    double score = 0.0;
};

/// Top min(k, |profile|) documents by cosine(query, input_text); ties keep profile order.
std::vector<RankedDocument> rank_profile(Embedder& embedder, std::string_view query, const AuthorProfile& profile,
                                         std::size_t k);
std::vector<ProfileDocument> retrieve_profile(Embedder& embedder, std::string_view query, const AuthorProfile& profile,
                                              std::size_t k);

/// The n pool authors least similar to the target (query inputs compared),
/// ascending similarity, ties by author_id. An author with several pool
/// instances is represented by its first one.
std::vector<std::string> select_contrastive_authors(Embedder& embedder, const TaskInstance& target,
                                                    const std::vector<const TaskInstance*>& pool, std::size_t n);

struct ContrastiveEntry {
    std::string author_id;
    ProfileDocument document;

    bool operator==(const ContrastiveEntry&) const = default;
};

struct ContrastiveSet {
    std::vector<ContrastiveEntry> entries;
    std::size_t n_authors = 0;
    std::size_t per_author = 0;
    std::uint64_t seed = 0;

    bool operator==(const ContrastiveSet&) const = default;
};

using ProfileLookup = std::function<const AuthorProfile*(const std::string& author_id)>;

/// Draws per_author documents without replacement from each author's profile
/// (the whole profile when smaller), emitted in profile order.
ContrastiveSet sample_contrastive(const std::vector<std::string>& authors, const ProfileLookup& profiles,
                                  std::size_t per_author, std::uint64_t seed);

/// Portable generator for (seed, author_id): mt19937_64 seeded from SHA-256.
std::uint64_t author_seed(std::uint64_t seed, std::string_view author_id);
/// Indices of k distinct elements of [0, n), ascending.
std::vector<std::size_t> sample_indices(std::uint64_t seed_value, std::size_t n, std::size_t k);

} // namespace authorrag
