// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include "authorrag/annotate.hpp"
#include "authorrag/corpus.hpp"
#include "authorrag/resources.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace authorrag::testing {

inline std::filesystem::path test_data_dir() { return AUTHORRAG_TEST_DATA_DIR; }
inline std::filesystem::path source_dir() { return AUTHORRAG_SOURCE_DIR; }

inline nlohmann::json fixture(const std::string& name) {
    return nlohmann::json::parse(read_file(test_data_dir() / "fixtures" / (name + ".json")));
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("authorrag-test-" + std::to_string(stamp) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

  private:
    std::filesystem::path path_;
};

/// Sets an environment variable for the lifetime of the guard.
class EnvGuard {
  public:
    EnvGuard(std::string name, const std::string& value) : name_(std::move(name)) {
        if (const char* old = std::getenv(name_.c_str())) {
            old_ = old;
        }
        ::setenv(name_.c_str(), value.c_str(), 1);
    }
    ~EnvGuard() {
        if (old_) {
            ::setenv(name_.c_str(), old_->c_str(), 1);
        } else {
            ::unsetenv(name_.c_str());
        }
    }

  private:
    std::string name_;
    std::optional<std::string> old_;
};

inline ProfileDocument doc(std::string id, std::string input, std::string output) {
    return {std::move(id), std::move(input), std::move(output)};
}

inline TaskInstance instance(std::string id, Task task, std::string query, std::vector<ProfileDocument> docs,
                             std::optional<std::string> gold = std::nullopt, std::string author = {}) {
    TaskInstance t;
    t.instance_id = id;
    t.task = task;
    t.query_input = std::move(query);
    t.gold_output = std::move(gold);
    t.profile.author_id = author.empty() ? id : std::move(author);
    t.profile.documents = std::move(docs);
    return t;
}

inline const std::vector<std::string>& small_vocab() {
    static const std::vector<std::string> words = {
        "river", "stone", "quick", "light", "market", "policy", "signal", "garden", "vote",   "model",
        "cloud", "green", "happy", "slowly", "bright", "city",  "paper",  "train",  "winter", "open"};
    return words;
}

inline std::string random_sentence(std::mt19937_64& rng, std::size_t min_words, std::size_t max_words) {
    const auto& vocab = small_vocab();
    std::uniform_int_distribution<std::size_t> len(min_words, max_words);
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::string s;
    for (std::size_t i = 0, n = len(rng); i < n; ++i) {
        s += (i == 0 ? "" : " ") + vocab[pick(rng)];
    }
    return s;
}

/// Structurally valid annotation with random tokens, tags, entities and arcs.
inline AnnotatedDocument random_annotated_document(std::mt19937_64& rng) {
    static const std::vector<Pos> kTags = {Pos::ADJ, Pos::ADV, Pos::PRON, Pos::NOUN, Pos::VERB,
                                           Pos::DET, Pos::PROPN, Pos::ADP, Pos::PUNCT, Pos::NUM};
    static const std::vector<std::string> kRelations = {"nsubj", "dobj", "amod", "det", "advmod", "prep", "punct"};
    static const std::vector<std::pair<std::string, std::string>> kEntities = {
        {"Boston", "GPE"}, {"Maria Lopez", "PERSON"}, {"Apple", "ORG"}, {"Monday", "DATE"}, {"Denver", "GPE"}};
    static const std::vector<std::string> kStopwords = {"the", "a", "of", "and", "to"};
    const auto& vocab = small_vocab();
    auto uniform = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    AnnotatedDocument doc;
    const auto n_sentences = uniform(1, 4);
    for (std::size_t s = 0; s < n_sentences; ++s) {
        const auto begin = doc.tokens.size();
        const auto n_tokens = uniform(1, 12);
        for (std::size_t i = 0; i < n_tokens; ++i) {
            Token t;
            const auto kind = uniform(0, 9);
            if (kind == 0) {
                t.surface = ",";
            } else if (kind == 1) {
                t.surface = kStopwords[uniform(0, kStopwords.size() - 1)];
                t.is_stopword = true;
            } else if (kind == 2) {
                t.surface = std::to_string(uniform(1, 99));
            } else {
                t.surface = vocab[uniform(0, vocab.size() - 1)];
                if (kind == 3) {
                    t.surface[0] = static_cast<char>(t.surface[0] - 'a' + 'A');
                }
            }
            t.is_alpha = std::isalpha(static_cast<unsigned char>(t.surface[0])) != 0;
            t.syllables = t.is_alpha ? static_cast<int>(uniform(1, 5)) : 0;
            t.lemma = t.surface;
            t.pos = t.surface == "," ? Pos::PUNCT : kTags[uniform(0, kTags.size() - 1)];
            doc.tokens.push_back(std::move(t));
        }
        doc.sentences.push_back({begin, doc.tokens.size()});
        for (std::size_t i = begin + 1; i < doc.tokens.size(); ++i) {
            doc.arcs.push_back({i, begin + uniform(0, i - begin - 1), kRelations[uniform(0, kRelations.size() - 1)]});
        }
    }
    for (std::size_t i = 0, n = uniform(0, 3); i < n; ++i) {
        const auto& [surface, label] = kEntities[uniform(0, kEntities.size() - 1)];
        doc.entities.push_back({surface, label});
    }
    doc.polarity = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
    doc.subjectivity = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    return doc;
}

/// Path to a shipped sample dataset file.
inline std::filesystem::path sample_file(Task task, const std::string& name) {
    return source_dir() / "data" / "sample" / std::string(task_name(task)) / name;
}

} // namespace authorrag::testing
