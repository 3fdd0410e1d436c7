// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/error.hpp"
#include "authorrag/features.hpp"
#include "authorrag/text.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace authorrag;
using Catch::Matchers::WithinAbs;

namespace {

Token word(std::string surface, Pos pos, int syllables, bool stop = false) {
    Token t;
    t.surface = surface;
    t.lemma = surface;
    t.pos = pos;
    t.is_alpha = true;
    t.is_stopword = stop;
    t.syllables = syllables;
    return t;
}

Token punct(std::string surface) {
    Token t;
    t.surface = surface;
    t.lemma = surface;
    t.pos = Pos::PUNCT;
    return t;
}

AnnotatedDocument one_sentence(std::vector<Token> tokens) {
    AnnotatedDocument d;
    d.tokens = std::move(tokens);
    d.sentences = {{0, d.tokens.size()}};
    for (std::size_t i = 1; i < d.tokens.size(); ++i) {
        d.arcs.push_back({i, 0, "dep"});
    }
    return d;
}

// Every documented range and ordering property of an AuthorFeatures value.
void check_invariants(const AuthorFeatures& f, std::size_t k) {
    if (f.sp) {
        CHECK(*f.sp >= -1.0);
        CHECK(*f.sp <= 1.0);
    }
    if (f.subj) {
        CHECK(*f.subj >= 0.0);
        CHECK(*f.subj <= 1.0);
    }
    for (const auto& pct : {f.advu, f.adju, f.pu}) {
        if (pct) {
            CHECK(*pct >= 0.0);
            CHECK(*pct <= 100.0);
        }
    }
    for (const auto& list : {f.nef, f.dpf, f.wf}) {
        if (!list) {
            continue;
        }
        CHECK(list->size() <= k);
        for (std::size_t i = 1; i < list->size(); ++i) {
            const auto& a = (*list)[i - 1];
            const auto& b = (*list)[i];
            CHECK((a.second > b.second || (a.second == b.second && a.first < b.first)));
        }
    }
}

} // namespace

TEST_CASE("SMOG follows the closed formula, floor included", "[features]") {
    // one polysyllable in one sentence
    const auto doc = one_sentence({word("The", Pos::DET, 1), word("beautiful", Pos::ADJ, 3), word("cat", Pos::NOUN, 1)});
    CHECK_THAT(smog_of(doc), WithinAbs(3.1291 + 1.0430 * std::sqrt(30.0), 1e-12));
    CHECK(text::format_fixed(smog_of(doc), 3) == "8.842");

    const auto plain = one_sentence({word("A", Pos::DET, 1), word("cat", Pos::NOUN, 1), punct(".")});
    CHECK(smog_of(plain) == 3.1291);

    AnnotatedDocument empty;
    CHECK_THROWS_AS(smog_of(empty), PreconditionError);
}

TEST_CASE("POS usage is a percentage of all tokens", "[features]") {
    const auto doc = one_sentence({word("she", Pos::PRON, 1), word("runs", Pos::VERB, 1), word("very", Pos::ADV, 2),
                                   word("fast", Pos::ADV, 1), punct(".")});
    CHECK(pos_usage(doc, Pos::ADV) == 40.0);
    CHECK(pos_usage(doc, Pos::PRON) == 20.0);
    CHECK(pos_usage(doc, Pos::ADJ) == 0.0);
}

TEST_CASE("top_k orders by count then item and truncates", "[features]") {
    std::map<std::string, std::size_t, std::less<>> counts = {{"b", 3}, {"a", 3}, {"c", 5}, {"d", 1}};
    const FrequencyList expected = {{"c", 5}, {"a", 3}, {"b", 3}};
    CHECK(top_k(counts, 3) == expected);
    CHECK(top_k(counts, 10).size() == 4);
    CHECK(top_k({}, 10).empty());
}

TEST_CASE("frequency lists equal a brute-force counter", "[features]") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 100; ++round) {
        std::vector<AnnotatedDocument> docs;
        for (std::size_t i = 0; i < 1 + rng() % 6; ++i) {
            docs.push_back(testing::random_annotated_document(rng));
        }
        std::vector<const AnnotatedDocument*> ptrs;
        std::vector<std::string> words, entities, patterns;
        for (const auto& d : docs) {
            ptrs.push_back(&d);
            for (const auto& t : d.tokens) {
                if (t.is_alpha && !t.is_stopword) {
                    words.push_back(text::to_lower_ascii(t.surface));
                }
            }
            for (const auto& e : d.entities) {
                entities.push_back(text::to_lower_ascii(e.surface) + " (" + e.label + ")");
            }
            for (const auto& a : d.arcs) {
                patterns.push_back(std::string(pos_name(d.tokens[a.child].pos)) + ":" + a.relation + ":" +
                                   std::string(pos_name(d.tokens[a.head].pos)));
            }
        }
        CHECK(top_words(ptrs) == oracle::frequency_top_k(words, 10));
        CHECK(top_entities(ptrs) == oracle::frequency_top_k(entities, 10));
        CHECK(top_dependency_patterns(ptrs) == oracle::frequency_top_k(patterns, 10));
        CHECK(top_words(ptrs, 3) == oracle::frequency_top_k(words, 3));
    }
}

TEST_CASE("feature values hold their invariants on random profiles", "[features][property]") {
    std::mt19937_64 rng(29);
    const FeatureSet all(kAllFeatures.begin(), kAllFeatures.end());
    for (int round = 0; round < 200; ++round) {
        AuthorProfile profile;
        profile.author_id = "a" + std::to_string(round);
        std::map<std::string, AnnotatedDocument> annotations;
        for (std::size_t i = 0; i < 1 + rng() % 8; ++i) {
            const auto id = std::to_string(i);
            profile.documents.push_back({id, "input " + id, "output " + id});
            annotations.emplace(id, testing::random_annotated_document(rng));
        }
        const auto features = compute_features(
            profile, [&](const ProfileDocument& d) { return &annotations.at(d.doc_id); }, all);
        check_invariants(features, kDefaultTopK);
        for (const auto& [id, doc] : annotations) {
            CHECK(pos_usage(doc, Pos::ADV) + pos_usage(doc, Pos::ADJ) + pos_usage(doc, Pos::PRON) <= 100.0 + 1e-9);
        }
    }
}

TEST_CASE("scalar features are per-document means", "[features]") {
    auto a = one_sentence({word("good", Pos::ADJ, 1), word("day", Pos::NOUN, 1)});
    a.polarity = 0.5;
    a.subjectivity = 0.2;
    auto b = one_sentence({word("bad", Pos::ADJ, 1), word("quickly", Pos::ADV, 2), word("went", Pos::VERB, 1),
                           word("home", Pos::NOUN, 1)});
    b.polarity = -0.25;
    b.subjectivity = 0.6;
    AuthorProfile profile{"u", {{"1", "x", "y"}, {"2", "z", "w"}}};
    const std::map<std::string, const AnnotatedDocument*> lookup = {{"1", &a}, {"2", &b}};
    const auto f = compute_features(
        profile, [&](const ProfileDocument& d) { return lookup.at(d.doc_id); },
        {Feature::SP, Feature::SUBJ, Feature::ADJU, Feature::ADVU});
    CHECK(*f.sp == 0.125);
    CHECK_THAT(*f.subj, WithinAbs(0.4, 1e-15));
    CHECK(*f.adju == (50.0 + 25.0) / 2);
    CHECK(*f.advu == 12.5);
    CHECK_FALSE(f.has(Feature::WF));

    // Order of documents does not change the value.
    AuthorProfile reversed{"u", {{"2", "z", "w"}, {"1", "x", "y"}}};
    const auto g = compute_features(
        reversed, [&](const ProfileDocument& d) { return lookup.at(d.doc_id); },
        {Feature::SP, Feature::SUBJ, Feature::ADJU, Feature::ADVU});
    CHECK(f == g);
}

TEST_CASE("feature sentences are rendered one per line in fixed order", "[features]") {
    AuthorFeatures f;
    f.wf = FrequencyList{{"council", 4}, {"budget", 2}};
    f.sp = 0.125;
    f.advu = 3.14159;
    f.nef = FrequencyList{};
    CHECK(render_feature_sentences(f) ==
          "The average sentiment polarity for the writer is 0.13\n"
          "The average adverb usage percentage for the writer is 3.14%\n"
          "The most frequently used named entities for the writer is none\n"
          "The most frequently used words for the writer is 'council', 'budget'");
    CHECK_THROWS_AS(render_feature_sentences(AuthorFeatures{}), PreconditionError);
}

TEST_CASE("a document without annotation names the author and document", "[features]") {
    AuthorProfile profile{"writer-9", {{"d1", "x", "y"}}};
    try {
        compute_features(profile, [](const ProfileDocument&) { return nullptr; }, {Feature::SP});
        FAIL("expected a FeatureError");
    } catch (const FeatureError& e) {
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("writer-9"));
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("d1"));
    }
    CHECK_THROWS_AS(compute_features(profile, [](const ProfileDocument&) { return nullptr; }, {}), PreconditionError);
}

TEST_CASE("feature names parse case-insensitively", "[features]") {
    CHECK(parse_feature("wf") == Feature::WF);
    CHECK(parse_feature("Smog") == Feature::SMOG);
    CHECK_THROWS_AS(parse_feature("XYZ"), PreconditionError);
    CHECK(feature_set_name({Feature::WF, Feature::DPF}) == "DPF+WF");
    CHECK(feature_set_name({}) == "none");
}

TEST_CASE("feature cache keys separate every input and entries round-trip", "[features]") {
    const auto base = FeatureCache::key("u", {Feature::WF}, "v1", 10);
    CHECK(base != FeatureCache::key("u2", {Feature::WF}, "v1", 10));
    CHECK(base != FeatureCache::key("u", {Feature::WF, Feature::SP}, "v1", 10));
    CHECK(base != FeatureCache::key("u", {Feature::WF}, "v2", 10));
    CHECK(base != FeatureCache::key("u", {Feature::WF}, "v1", 5));

    testing::TempDir dir;
    const FeatureCache cache(dir.path());
    AuthorFeatures f;
    f.smog = 8.5;
    f.dpf = FrequencyList{{"DET:det:NOUN", 7}};
    CHECK_FALSE(cache.get(base));
    cache.put(base, f);
    CHECK(cache.get(base) == f);
    CHECK(author_features_from_json(to_json(f)) == f);
}
