// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/error.hpp"
#include "authorrag/evaluation.hpp"
#include "oracles/oracles.hpp"
#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace authorrag;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

ScoredPrediction scored(std::string id, double r1, double rl) { return {std::move(id), "p", "r", r1, rl}; }

} // namespace

TEST_CASE("Porter stems match the frozen reference stems", "[evaluation]") {
    const auto cases = testing::fixture("porter");
    REQUIRE(cases.size() > 400);
    for (const auto& c : cases) {
        const auto word = c.at("word").get<std::string>();
        INFO(word);
        CHECK(porter_stem(word) == c.at("stem").get<std::string>());
    }
}

TEST_CASE("ROUGE scores match the frozen reference scores", "[evaluation]") {
    for (const auto& c : testing::fixture("rouge")) {
        const auto prediction = c.at("prediction").get<std::string>();
        const auto reference = c.at("reference").get<std::string>();
        INFO(prediction << " | " << reference);
        CHECK_THAT(rouge1(prediction, reference), WithinAbs(c.at("rouge1").get<double>(), 1e-12));
        CHECK_THAT(rougeL(prediction, reference), WithinAbs(c.at("rougeL").get<double>(), 1e-12));
    }
}

TEST_CASE("ROUGE tokenizer lowercases, splits and stems long tokens", "[evaluation]") {
    CHECK(rouge_tokenize("The Cats, running!") == std::vector<std::string>{"the", "cat", "run"});
    CHECK(rouge_tokenize("The Cats, running!", false) == std::vector<std::string>{"the", "cats", "running"});
    CHECK(rouge_tokenize("it's 2024-ish") == std::vector<std::string>{"it", "s", "2024", "ish"});
    CHECK(rouge_tokenize("  ").empty());
    CHECK_THROWS_AS(rouge1("x", " "), PreconditionError);
}

TEST_CASE("ROUGE on tokens equals brute-force counting", "[evaluation][property]") {
    std::mt19937_64 rng(41);
    const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
    for (int round = 0; round < 500; ++round) {
        auto draw = [&](std::size_t min) {
            std::vector<std::string> out(min + rng() % (8 - min));
            for (auto& t : out) {
                t = vocab[rng() % vocab.size()];
            }
            return out;
        };
        const auto pred = draw(0);
        const auto ref = draw(1);
        const auto lcs = oracle::lcs_exhaustive(pred, ref);
        CHECK(lcs_length(pred, ref) == lcs);
        CHECK(rouge_lcs_tokens(pred, ref).fmeasure == oracle::f_measure(lcs, pred.size(), ref.size()));
        CHECK(rouge_n_tokens(pred, ref, 1).fmeasure ==
              oracle::f_measure(oracle::unigram_overlap(pred, ref), pred.size(), ref.size()));
        CHECK(lcs_length(pred, ref) == lcs_length(ref, pred));
        CHECK(rouge_lcs_tokens(pred, ref).fmeasure <= rouge_n_tokens(pred, ref, 1).fmeasure);
    }
}

TEST_CASE("paired t-test matches the frozen reference values", "[evaluation]") {
    for (const auto& c : testing::fixture("ttest")) {
        const auto a = c.at("a").get<std::vector<double>>();
        const auto b = c.at("b").get<std::vector<double>>();
        const auto r = paired_t(a, b);
        CHECK_THAT(r.t, WithinAbs(c.at("t").get<double>(), 1e-9 * std::max(1.0, std::fabs(r.t))));
        CHECK_THAT(r.p, WithinAbs(c.at("p").get<double>(), 1e-9));
        CHECK(r.df == c.at("df").get<double>());
        CHECK(paired_t_test(a, b) == r.p);
    }
    const auto first = paired_t({1, 2, 3, 4}, {0, 0, 0, 0});
    CHECK_THAT(first.p, WithinAbs(0.030466291662170977, 1e-12));
    CHECK(first.mean_difference == 2.5);
}

TEST_CASE("Student t tail agrees with the incomplete beta oracle", "[evaluation][property]") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> t_dist(-12.0, 12.0);
    for (int round = 0; round < 500; ++round) {
        const double t = t_dist(rng);
        const double df = 1.0 + static_cast<double>(rng() % 200);
        const double p = student_t_two_sided_p(t, df);
        CHECK_THAT(p, WithinAbs(oracle::student_t_two_sided(t, df), 1e-10));
        CHECK(p >= 0.0);
        CHECK(p <= 1.0);
        CHECK(student_t_two_sided_p(-t, df) == p);
    }
    CHECK(student_t_two_sided_p(0.0, 5.0) == 1.0);
}

TEST_CASE("paired t-test rejects degenerate input", "[evaluation]") {
    CHECK_THROWS_AS(paired_t({1, 2, 3}, {0, 1, 2}), DegenerateTestError);
    CHECK_THROWS_AS(paired_t({1, 1}, {1, 1}), DegenerateTestError);
    CHECK_THROWS_AS(paired_t({1}, {0}), PreconditionError);
    CHECK_THROWS_AS(paired_t({1, 2}, {0}), PreconditionError);
}

TEST_CASE("reports compare each run against the baseline", "[evaluation]") {
    const std::vector<ScoredPrediction> base = {scored("1", 0.2, 0.1), scored("2", 0.4, 0.3), scored("3", 0.5, 0.2)};
    const std::vector<ScoredPrediction> better = {scored("3", 0.6, 0.4), scored("1", 0.3, 0.2), scored("2", 0.4, 0.4)};
    const auto reports = build_report({{"base", base}, {"better", better}}, "base");
    REQUIRE(reports.size() == 2);
    CHECK_FALSE(reports[0].comparison);
    const auto& c = *reports[1].comparison;
    CHECK_THAT(*c.delta_rougeL_pct, WithinAbs(100.0 * (1.0 / 0.6 - 1.0), 1e-9));
    // aligned by id: differences 0.1, 0.1, 0.2 for ROUGE-L
    CHECK_THAT(*c.p_rougeL, WithinAbs(oracle::paired_t({0.2, 0.4, 0.4}, {0.1, 0.3, 0.2}).p, 1e-12));

    const auto table = render_table(reports);
    CHECK_THAT(table, ContainsSubstring("better"));
    CHECK_THAT(table, ContainsSubstring("+66.7%"));
    CHECK_THAT(render_delta_chart(reports), ContainsSubstring("|"));

    const auto back = metrics_report_from_json(to_json(reports[1]));
    CHECK(back.run_name == "better");
    CHECK(back.scores == reports[1].scores);
    CHECK(back.comparison->p_rougeL == c.p_rougeL);
}

TEST_CASE("identical runs get a note instead of a p-value", "[evaluation]") {
    const std::vector<ScoredPrediction> run = {scored("1", 0.2, 0.1), scored("2", 0.4, 0.3)};
    const auto reports = build_report({{"a", run}, {"b", run}}, "a");
    CHECK_FALSE(reports[1].comparison->p_rougeL);
    CHECK(reports[1].comparison->note == "no variance");
    CHECK(*reports[1].comparison->delta_rougeL_pct == 0.0);
    CHECK_THAT(render_table(reports), ContainsSubstring("no variance"));
}

TEST_CASE("misaligned runs and a missing baseline are errors", "[evaluation]") {
    const std::vector<ScoredPrediction> a = {scored("1", 0, 0), scored("2", 0, 0)};
    const std::vector<ScoredPrediction> b = {scored("1", 0, 0), scored("9", 0, 0)};
    try {
        build_report({{"a", a}, {"b", b}}, "a");
        FAIL("expected an AlignmentError");
    } catch (const AlignmentError& e) {
        CHECK_THAT(e.what(), ContainsSubstring("9 (missing from a)"));
        CHECK_THAT(e.what(), ContainsSubstring("2 (missing from b)"));
    }
    CHECK_THROWS_AS(build_report({{"a", a}}, "zzz"), PreconditionError);
    CHECK(relative_delta_pct(1.0, 0.0) == std::nullopt);
}

TEST_CASE("predictions serialize in the submission shape", "[evaluation]") {
    const auto text = predictions_json(Task::LaMP7, {{"7", "hello"}, {"8", "x\"y"}});
    const auto j = nlohmann::json::parse(text);
    CHECK(j["task"] == "LaMP_7");
    CHECK(j["golds"].size() == 2);
    CHECK(j["golds"][1]["output"] == "x\"y");
    CHECK(text.back() == '\n');

    const auto s = score_prediction("1", "The cat sat", "the cat sat");
    CHECK(s.rouge1_f == 1.0);
    CHECK(s.rougeL_f == 1.0);
}
