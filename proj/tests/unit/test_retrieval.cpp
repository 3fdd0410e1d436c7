// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/error.hpp"
#include "authorrag/retrieval.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <thread>

using namespace authorrag;
using Catch::Matchers::WithinAbs;

namespace {

Embedder stub_embedder(std::size_t dim = 64) {
    return Embedder(std::make_shared<StubEmbeddingBackend>(dim), std::nullopt);
}

// Fails the first `failures` calls with the given retryability.
class FlakyBackend final : public EmbeddingBackend {
  public:
    FlakyBackend(int failures, bool retryable) : failures_(failures), retryable_(retryable) {}

    std::vector<std::vector<double>> embed_batch(const std::vector<std::string>& texts) override {
        ++calls;
        if (failures_-- > 0) {
            throw EmbeddingError("boom", retryable_);
        }
        std::vector<std::vector<double>> out;
        for (const auto& t : texts) {
            out.push_back(StubEmbeddingBackend::embed_one(t, 8));
        }
        return out;
    }
    std::string model_tag() const override { return "flaky"; }
    std::size_t dimension() const override { return 8; }

    int calls = 0;

  private:
    int failures_;
    bool retryable_;
};

} // namespace

TEST_CASE("stub embeddings match an independent SHA-256 expansion", "[retrieval]") {
    const auto v = StubEmbeddingBackend::embed_one("hello world", 20);
    REQUIRE(v.size() == 20);
    // Frozen from a Python hashlib implementation of the same expansion.
    CHECK(v[0] == -0.995574883649958);
    CHECK(v[1] == 0.40233463035019446);
    CHECK(v[15] == -0.5408865491721981);
    CHECK(v[16] == -0.5409475852597849);
    CHECK(v[19] == 0.6262760357061112);

    auto e = stub_embedder();
    const auto a = e.embed(std::string("a cat"));
    const auto b = e.embed(std::string("a dog"));
    CHECK(a.model_tag == "stub-sha256/64");
    CHECK_THAT(cosine(a, b), WithinAbs(-0.18405475003524907, 1e-15));
    CHECK_THROWS_AS(StubEmbeddingBackend(0), PreconditionError);
}

TEST_CASE("cosine is bounded, symmetric and checks its inputs", "[retrieval]") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
        const EmbeddingVector a{StubEmbeddingBackend::embed_one(testing::random_sentence(rng, 1, 6), 32), "m"};
        const EmbeddingVector b{StubEmbeddingBackend::embed_one(testing::random_sentence(rng, 1, 6), 32), "m"};
        const double c = cosine(a, b);
        CHECK(c >= -1.0);
        CHECK(c <= 1.0);
        CHECK(c == cosine(b, a));
        CHECK_THAT(c, WithinAbs(oracle::cosine(a.values, b.values), 1e-12));
        CHECK_THAT(cosine(a, a), WithinAbs(1.0, 1e-15));
    }
    CHECK_THROWS_AS(cosine({{1, 0}, "m"}, {{1, 0, 0}, "m"}), PreconditionError);
    CHECK_THROWS_AS(cosine({{0, 0}, "m"}, {{1, 0}, "m"}), PreconditionError);
}

TEST_CASE("embedding cache files round-trip and reject corruption", "[retrieval]") {
    const std::vector<double> values = {0.5, -1.25, 3.0e-300, 1.0 / 3.0};
    CHECK(EmbeddingCache::decode(EmbeddingCache::encode(values)) == values);
    auto bytes = EmbeddingCache::encode(values);
    CHECK(bytes.substr(0, 4) == "ARVE");
    CHECK_THROWS_AS(EmbeddingCache::decode(bytes.substr(0, bytes.size() - 1)), EmbeddingError);
    bytes[0] = 'X';
    CHECK_THROWS_AS(EmbeddingCache::decode(bytes), EmbeddingError);

    testing::TempDir dir;
    const EmbeddingCache cache(dir.path());
    CHECK_FALSE(cache.get("model/x", "text"));
    cache.put("model/x", "text", values);
    CHECK(cache.get("model/x", "text") == values);
    CHECK_FALSE(cache.get("model/y", "text"));
    const auto path = cache.path_for("model/x", "text");
    CHECK(std::filesystem::exists(path));
    CHECK(path.extension() == ".vec");
}

TEST_CASE("embedder sends each distinct text to the backend once", "[retrieval]") {
    auto backend = std::make_shared<StubEmbeddingBackend>(16);
    testing::TempDir dir;
    {
        Embedder e(backend, dir.path());
        const auto out = e.embed(std::vector<std::string>{"a", "b", "a", "c", "b"});
        REQUIRE(out.size() == 5);
        CHECK(out[0] == out[2]);
        CHECK(e.backend_texts() == 3);
        CHECK(e.backend_calls() == 1);
        e.embed(std::vector<std::string>{"a", "c"});
        CHECK(e.backend_texts() == 3);
    }
    Embedder again(backend, dir.path());
    again.embed(std::vector<std::string>{"a", "b", "c"});
    CHECK(again.backend_calls() == 0);
    CHECK_THROWS_AS(again.embed(std::vector<std::string>{}), PreconditionError);
}

TEST_CASE("concurrent embedding of overlapping texts stays within distinct-text calls", "[retrieval]") {
    auto backend = std::make_shared<StubEmbeddingBackend>(16);
    Embedder e(backend, std::nullopt);
    std::vector<std::thread> threads;
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&e, t] {
            for (int i = 0; i < 50; ++i) {
                e.embed(std::string("text ") + std::to_string((i * 7 + t) % 30));
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    CHECK(e.backend_texts() == 30);
}

TEST_CASE("retryable embedding failures are retried, others are not", "[retrieval]") {
    auto flaky = std::make_shared<FlakyBackend>(2, true);
    Embedder e(flaky, std::nullopt, 3);
    CHECK(e.embed(std::string("x")).values.size() == 8);
    CHECK(flaky->calls == 3);

    auto broken = std::make_shared<FlakyBackend>(3, true);
    Embedder e2(broken, std::nullopt, 3);
    CHECK_THROWS_AS(e2.embed(std::string("x")), EmbeddingError);

    auto fatal = std::make_shared<FlakyBackend>(1, false);
    Embedder e3(fatal, std::nullopt, 3);
    CHECK_THROWS_AS(e3.embed(std::string("x")), EmbeddingError);
    CHECK(fatal->calls == 1);
}

TEST_CASE("retrieval config defaults and validation", "[retrieval]") {
    CHECK(RetrievalConfig::defaults_for(Task::LaMP4).k_profile == 50);
    CHECK(RetrievalConfig::defaults_for(Task::LaMP4).samples_per_author == 3);
    CHECK(RetrievalConfig::defaults_for(Task::LaMP5).k_profile == 7);
    CHECK(RetrievalConfig::defaults_for(Task::LaMP5).samples_per_author == 1);
    CHECK(RetrievalConfig::defaults_for(Task::LaMP7).k_profile == 50);
    RetrievalConfig bad;
    bad.k_profile = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = RetrievalConfig{};
    bad.samples_per_author = 0;
    CHECK_NOTHROW(bad.validate()); // unused without contrastive authors
    bad.n_contrastive_authors = 3;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("profile ranking equals a brute-force argsort, ties in profile order", "[retrieval][property]") {
    std::mt19937_64 rng(5);
    auto e = stub_embedder(32);
    for (int round = 0; round < 100; ++round) {
        AuthorProfile profile{"u", {}};
        const auto n = 1 + rng() % 40;
        for (std::size_t i = 0; i < n; ++i) {
            // Reuse earlier texts now and then to create exact ties.
            const bool dup = i > 0 && rng() % 5 == 0;
            const auto text = dup ? profile.documents[rng() % i].input_text : testing::random_sentence(rng, 1, 8);
            profile.documents.push_back({std::to_string(i), text, "t"});
        }
        const auto query = testing::random_sentence(rng, 1, 8);
        const auto k = 1 + rng() % 60;
        const auto q = e.embed(query);
        std::vector<double> scores;
        for (const auto& d : profile.documents) {
            scores.push_back(cosine(q, e.embed(d.input_text)));
        }
        const auto expected = oracle::argsort_top_k(scores, k);
        const auto ranked = rank_profile(e, query, profile, k);
        REQUIRE(ranked.size() == expected.size());
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            CHECK(ranked[i].position == expected[i]);
            CHECK(ranked[i].score == scores[expected[i]]);
            CHECK(ranked[i].document == profile.documents[expected[i]]);
        }
        const auto docs = retrieve_profile(e, query, profile, k);
        CHECK(docs.size() == std::min<std::size_t>(k, n));
    }
}

TEST_CASE("contrastive authors are the least similar, ties by author id", "[retrieval][property]") {
    std::mt19937_64 rng(8);
    auto e = stub_embedder(32);
    for (int round = 0; round < 50; ++round) {
        std::vector<TaskInstance> instances;
        const auto n_authors = 2 + rng() % 20;
        for (std::size_t i = 0; i < 2 * n_authors; ++i) {
            const auto author = "a" + std::to_string(rng() % n_authors);
            instances.push_back(testing::instance("q" + std::to_string(i), Task::LaMP7,
                                                  testing::random_sentence(rng, 1, 6), {{"d", "x", "x"}}, std::nullopt,
                                                  author));
        }
        const auto& target = instances.front();
        std::vector<const TaskInstance*> pool;
        std::map<std::string, const TaskInstance*> first;
        for (const auto& inst : instances) {
            if (inst.profile.author_id != target.profile.author_id) {
                pool.push_back(&inst);
                first.emplace(inst.profile.author_id, &inst);
            }
        }
        if (first.empty()) {
            continue;
        }
        std::vector<std::pair<double, std::string>> sims;
        for (const auto& [author, inst] : first) {
            sims.emplace_back(cosine(e.embed(target.query_input), e.embed(inst->query_input)), author);
        }
        const auto n = 1 + rng() % first.size();
        CHECK(select_contrastive_authors(e, target, pool, n) == oracle::argmin_k(sims, n));
        CHECK_THROWS_AS(select_contrastive_authors(e, target, pool, first.size() + 1), PreconditionError);
    }
}

TEST_CASE("the target author may not appear in the contrastive pool", "[retrieval]") {
    auto e = stub_embedder();
    const auto target = testing::instance("1", Task::LaMP4, "query", {{"d", "x", "y"}});
    const auto other = testing::instance("2", Task::LaMP4, "other", {{"d", "x", "y"}});
    CHECK_THROWS_AS(select_contrastive_authors(e, target, {&target, &other}, 1), PreconditionError);
    CHECK(select_contrastive_authors(e, target, {&other}, 1) == std::vector<std::string>{"2"});
    CHECK(select_contrastive_authors(e, target, {&other}, 0).empty());
}

TEST_CASE("author seeds match an independent SHA-256 derivation", "[retrieval]") {
    // Frozen from Python: int.from_bytes(sha256(be64(seed) + b"\0" + id)[:8], "big").
    CHECK(author_seed(0, "author-1") == 8142086850879264489ULL);
    CHECK(author_seed(42, "u7") == 16724812635919057631ULL);
}

TEST_CASE("index sampling draws distinct sorted indices", "[retrieval][property]") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 1 + seed % 37;
        const std::size_t k = seed % (n + 1);
        const auto idx = sample_indices(seed, n, k);
        CHECK(idx.size() == k);
        CHECK(std::is_sorted(idx.begin(), idx.end()));
        CHECK(std::set<std::size_t>(idx.begin(), idx.end()).size() == idx.size());
        for (const auto i : idx) {
            CHECK(i < n);
        }
        CHECK(sample_indices(seed, n, k) == idx);
    }
    CHECK(sample_indices(1, 5, 5) == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK_THROWS_AS(sample_indices(1, 3, 4), PreconditionError);
    // Every index is reachable and the draw is roughly uniform.
    std::vector<int> hits(10, 0);
    for (std::uint64_t seed = 0; seed < 5000; ++seed) {
        for (const auto i : sample_indices(seed, 10, 3)) {
            ++hits[i];
        }
    }
    for (const int h : hits) {
        CHECK(h > 1300);
        CHECK(h < 1700);
    }
}

TEST_CASE("contrastive sampling is seeded, bounded and in profile order", "[retrieval]") {
    std::map<std::string, AuthorProfile> profiles;
    for (const auto& [id, size] : std::vector<std::pair<std::string, int>>{{"a", 10}, {"b", 2}, {"c", 6}}) {
        AuthorProfile p{id, {}};
        for (int i = 0; i < size; ++i) {
            p.documents.push_back({id + std::to_string(i), "text " + std::to_string(i), "t"});
        }
        profiles.emplace(id, p);
    }
    const ProfileLookup lookup = [&](const std::string& id) -> const AuthorProfile* {
        const auto it = profiles.find(id);
        return it == profiles.end() ? nullptr : &it->second;
    };
    const auto set = sample_contrastive({"c", "a", "b"}, lookup, 3, 7);
    CHECK(set.n_authors == 3);
    CHECK(set.per_author == 3);
    CHECK(set.seed == 7);
    REQUIRE(set.entries.size() == 8); // b has only two documents
    CHECK(set.entries[0].author_id == "c");
    CHECK(set.entries[3].author_id == "a");
    CHECK(set.entries[6].author_id == "b");
    for (std::size_t i = 1; i < set.entries.size(); ++i) {
        if (set.entries[i].author_id == set.entries[i - 1].author_id) {
            CHECK(set.entries[i - 1].document.doc_id < set.entries[i].document.doc_id);
        }
    }
    CHECK(sample_contrastive({"c", "a", "b"}, lookup, 3, 7) == set);

    bool differs = false;
    for (std::uint64_t seed = 8; seed < 20 && !differs; ++seed) {
        differs = sample_contrastive({"c", "a", "b"}, lookup, 3, seed).entries != set.entries;
    }
    CHECK(differs);
    CHECK_THROWS_AS(sample_contrastive({"zz"}, lookup, 3, 7), PreconditionError);
}
