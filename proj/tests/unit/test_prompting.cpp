// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/error.hpp"
#include "authorrag/prompting.hpp"
#include "prompt_fixtures.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace authorrag;

TEST_CASE("prompts match the golden files", "[prompting][golden]") {
    const auto tmpl = PromptTemplate::builtin();
    for (const auto task : {Task::LaMP4, Task::LaMP5, Task::LaMP7}) {
        const auto prompt = build_prompt(tmpl, testing::golden_bundle(task));
        const auto path = testing::golden_path(task);
        if (std::getenv("AUTHORRAG_UPDATE_GOLDEN") != nullptr) {
            write_file_atomic(path, prompt.text);
        }
        INFO(path.string());
        CHECK(prompt.text == read_file(path));
    }
}

TEST_CASE("every kept document appears verbatim and sections keep their order", "[prompting][property]") {
    const auto tmpl = PromptTemplate::builtin();
    std::mt19937_64 rng(13);
    for (int round = 0; round < 200; ++round) {
        const auto task = std::array{Task::LaMP4, Task::LaMP5, Task::LaMP7}[round % 3];
        const auto bundle = testing::random_bundle(task, rng);
        PromptOptions options;
        if (round % 2 == 1) {
            options.budget = 150 + rng() % 400;
        }
        BuiltPrompt prompt;
        try {
            prompt = build_prompt(tmpl, bundle, options);
        } catch (const PromptBudgetError&) {
            continue;
        }
        if (options.budget) {
            CHECK(prompt.tokens <= *options.budget);
        }
        CHECK(prompt.tokens == CharProxyCounter().count(prompt.text));
        for (std::size_t i = 0; i < prompt.profile_kept; ++i) {
            CHECK(prompt.text.find(bundle.profile_examples[i].output_text) != std::string::npos);
        }
        const auto& entries = bundle.contrastive->entries;
        for (std::size_t i = 0; i < prompt.contrastive_kept; ++i) {
            CHECK(prompt.text.find(entries[i].document.output_text) != std::string::npos);
        }
        CHECK(testing::sections_in_order(prompt.text));
        CHECK(prompt.profile_kept >= 1);
        CHECK(prompt.feature_lines == (bundle.feature_text ? 2u : 0u));
    }
}

TEST_CASE("over budget, the lowest-ranked profile documents go first", "[prompting]") {
    const auto tmpl = PromptTemplate::builtin();
    auto bundle = testing::golden_bundle(Task::LaMP4);
    const auto full = build_prompt(tmpl, bundle);
    REQUIRE(full.profile_kept == 3);
    REQUIRE(full.contrastive_kept == 2);

    PromptOptions options;
    options.budget = full.tokens - 1;
    const auto trimmed = build_prompt(tmpl, bundle, options);
    CHECK(trimmed.profile_kept == 2);
    CHECK(trimmed.contrastive_kept == 2);
    CHECK(trimmed.text.find(bundle.profile_examples[2].output_text) == std::string::npos);
    CHECK(trimmed.text.find(bundle.profile_examples[1].output_text) != std::string::npos);

    // Profile down to one document, then the contrastive tail.
    auto one_profile = bundle;
    one_profile.profile_examples.resize(1);
    one_profile.contrastive.reset();
    options.budget = build_prompt(tmpl, one_profile).tokens;
    const auto minimal = build_prompt(tmpl, bundle, options);
    CHECK(minimal.profile_kept == 1);
    CHECK(minimal.contrastive_kept == 0);

    options.policy = DropPolicy::ContrastiveFirst;
    options.budget = full.tokens - 1;
    const auto contrastive_first = build_prompt(tmpl, bundle, options);
    CHECK(contrastive_first.profile_kept == 3);
    CHECK(contrastive_first.contrastive_kept == 1);
}

TEST_CASE("a budget below the mandatory sections is an error with both numbers", "[prompting]") {
    const auto tmpl = PromptTemplate::builtin();
    const auto bundle = testing::golden_bundle(Task::LaMP7);
    PromptOptions options;
    options.budget = 20;
    try {
        build_prompt(tmpl, bundle, options);
        FAIL("expected a PromptBudgetError");
    } catch (const PromptBudgetError& e) {
        CHECK(e.available() == 20);
        CHECK(e.required() > 20);
    }
    auto empty = bundle;
    empty.profile_examples.clear();
    CHECK_THROWS_AS(build_prompt(tmpl, empty), PreconditionError);
}

TEST_CASE("token proxy counts code points", "[prompting]") {
    const CharProxyCounter c;
    CHECK(c.count("") == 0);
    CHECK(c.count("abcd") == 1);
    CHECK(c.count("abcde") == 2);
    CHECK(c.count("\xC3\xA9\xC3\xA9\xC3\xA9\xC3\xA9") == 1); // four e-acutes
}

TEST_CASE("templates reject unknown placeholders and drop empty optional lines", "[prompting]") {
    CHECK_THROWS_AS(PromptTemplate("{role}\n{examples}\n{query}\n{instruction}\n{oops}"), ConfigError);
    CHECK_THROWS_AS(PromptTemplate("{role}\n{examples}\n{instruction}"), ConfigError);

    const PromptTemplate t("{role}\n\n{features}\n\n{examples}\n{query}\n{instruction}");
    PromptTemplate::Values v;
    v.role = "R";
    v.examples = "E";
    v.query = "Q";
    v.instruction = "I";
    CHECK(t.render(v) == "R\n\nE\nQ\nI");
    v.features = "F";
    CHECK(t.render(v) == "R\n\nF\n\nE\nQ\nI");
    CHECK(t.digest() != PromptTemplate("{role}{examples}{query}{instruction}").digest());
}

TEST_CASE("drop policy names round-trip", "[prompting]") {
    CHECK(parse_drop_policy(drop_policy_name(DropPolicy::ContrastiveFirst)) == DropPolicy::ContrastiveFirst);
    CHECK(parse_drop_policy("profile_first") == DropPolicy::ProfileFirst);
    CHECK_THROWS_AS(parse_drop_policy("random"), ConfigError);
}
