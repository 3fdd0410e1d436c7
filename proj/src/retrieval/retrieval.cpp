// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/digest.hpp"
#include "authorrag/error.hpp"
#include "authorrag/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace authorrag {

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.values.size() != b.values.size()) {
        throw PreconditionError("cosine of vectors with dimensions " + std::to_string(a.values.size()) + " and " +
                                std::to_string(b.values.size()));
    }
    double dot = 0.0;
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) {
        throw PreconditionError("cosine of a zero vector");
    }
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

void RetrievalConfig::validate() const {
    if (k_profile < 1) {
        throw ConfigError("k_profile must be at least 1");
    }
    if (n_contrastive_authors > 0 && samples_per_author < 1) {
        throw ConfigError("samples_per_author must be at least 1 when contrastive authors are used");
    }
}

RetrievalConfig RetrievalConfig::defaults_for(Task task) {
    RetrievalConfig c;
    if (task == Task::LaMP5) {
        c.k_profile = 7;
        c.samples_per_author = 1;
    }
    return c;
}

std::vector<RankedDocument> rank_profile(Embedder& embedder, std::string_view query, const AuthorProfile& profile,
                                         std::size_t k) {
    if (profile.documents.empty()) {
        throw PreconditionError("cannot retrieve from the empty profile of author " + profile.author_id);
    }
    if (k == 0) {
        throw PreconditionError("retrieval needs k >= 1");
    }
    std::vector<std::string> texts;
    texts.reserve(profile.documents.size() + 1);
    texts.emplace_back(query);
    for (const auto& d : profile.documents) {
        texts.push_back(d.input_text);
    }
    const auto vectors = embedder.embed(texts);
    std::vector<RankedDocument> ranked;
    ranked.reserve(profile.documents.size());
    for (std::size_t i = 0; i < profile.documents.size(); ++i) {
        ranked.push_back({profile.documents[i], i, cosine(vectors.front(), vectors[i + 1])});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedDocument& a, const RankedDocument& b) { return a.score > b.score; });
    ranked.resize(std::min(k, ranked.size()));
    return ranked;
}

std::vector<ProfileDocument> retrieve_profile(Embedder& embedder, std::string_view query, const AuthorProfile& profile,
                                              std::size_t k) {
    std::vector<ProfileDocument> out;
    for (auto& r : rank_profile(embedder, query, profile, k)) {
        out.push_back(std::move(r.document));
    }
    return out;
}

std::vector<std::string> select_contrastive_authors(Embedder& embedder, const TaskInstance& target,
                                                    const std::vector<const TaskInstance*>& pool, std::size_t n) {
    std::vector<const TaskInstance*> representatives;
    std::set<std::string_view> seen;
    for (const auto* inst : pool) {
        if (inst->profile.author_id == target.profile.author_id) {
            throw PreconditionError("contrastive pool contains the target author " + target.profile.author_id);
        }
        if (seen.insert(inst->profile.author_id).second) {
            representatives.push_back(inst);
        }
    }
    if (n > representatives.size()) {
        throw PreconditionError("requested " + std::to_string(n) + " contrastive authors but the pool has " +
                                std::to_string(representatives.size()));
    }
    if (n == 0) {
        return {};
    }
    std::vector<std::string> texts;
    texts.reserve(representatives.size() + 1);
    texts.push_back(target.query_input);
    for (const auto* inst : representatives) {
        texts.push_back(inst->query_input);
    }
    const auto vectors = embedder.embed(texts);
    std::vector<std::pair<double, std::string_view>> scored;
    scored.reserve(representatives.size());
    for (std::size_t i = 0; i < representatives.size(); ++i) {
        scored.emplace_back(cosine(vectors.front(), vectors[i + 1]), representatives[i]->profile.author_id);
    }
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end());
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.emplace_back(scored[i].second);
    }
    return out;
}

std::uint64_t author_seed(std::uint64_t seed, std::string_view author_id) {
    std::string input;
    for (int shift = 56; shift >= 0; shift -= 8) {
        input.push_back(static_cast<char>((seed >> shift) & 0xFF));
    }
    input.push_back('\0');
    input.append(author_id);
    const auto digest = sha256(input);
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        value = value << 8 | digest[i];
    }
    return value;
}

std::vector<std::size_t> sample_indices(std::uint64_t seed_value, std::size_t n, std::size_t k) {
    if (k > n) {
        throw PreconditionError("cannot sample " + std::to_string(k) + " of " + std::to_string(n) + " items");
    }
    std::mt19937_64 gen(seed_value);
    auto below = [&gen](std::uint64_t range) {
        const std::uint64_t threshold = (0 - range) % range;
        for (;;) {
            const auto x = gen();
            if (x >= threshold) {
                return x % range;
            }
        }
    };
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(below(n - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

ContrastiveSet sample_contrastive(const std::vector<std::string>& authors, const ProfileLookup& profiles,
                                  std::size_t per_author, std::uint64_t seed) {
    ContrastiveSet set;
    set.n_authors = authors.size();
    set.per_author = per_author;
    set.seed = seed;
    if (!authors.empty() && per_author == 0) {
        throw PreconditionError("samples per author must be at least 1");
    }
    for (const auto& author : authors) {
        const auto* profile = profiles(author);
        if (profile == nullptr) {
            throw PreconditionError("no profile for contrastive author " + author);
        }
        const auto& docs = profile->documents;
        if (docs.size() <= per_author) {
            for (const auto& d : docs) {
                set.entries.push_back({author, d});
            }
            continue;
        }
        for (const auto i : sample_indices(author_seed(seed, author), docs.size(), per_author)) {
            set.entries.push_back({author, docs[i]});
        }
    }
    return set;
}

} // namespace authorrag
