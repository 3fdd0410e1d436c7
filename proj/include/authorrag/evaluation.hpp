// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include "authorrag/corpus.hpp"

#include <cstddef>
#include <filesystem>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace authorrag {

/// Porter stemmer with the NLTK extensions (irregular forms, "ies"/"ied" on
/// four-letter words, "alli"/"fulli"/"logi"). Input must be lowercase ASCII.
std::string porter_stem(std::string_view word);

/// Lowercase, split on anything outside [a-z0-9], stem tokens longer than 3 chars.
std::vector<std::string> rouge_tokenize(std::string_view text, bool stem = true);

struct RougeScore {
    double precision = 0.0;
    double recall = 0.0;
    double fmeasure = 0.0;
};

RougeScore rouge_n_tokens(const std::vector<std::string>& prediction, const std::vector<std::string>& reference,
                          std::size_t n);
RougeScore rouge_lcs_tokens(const std::vector<std::string>& prediction, const std::vector<std::string>& reference);
std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b);

/// F-measures. Throw PreconditionError for an empty (or blank) reference.
double rouge1(std::string_view prediction, std::string_view reference);
double rougeL(std::string_view prediction, std::string_view reference);

struct ScoredPrediction {
    std::string instance_id;
    std::string prediction;
    std::string reference;
    double rouge1_f = 0.0;
    double rougeL_f = 0.0;

    bool operator==(const ScoredPrediction&) const = default;
};

ScoredPrediction score_prediction(std::string instance_id, std::string prediction, std::string reference);

struct TTestResult {
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;
    double mean_difference = 0.0;
};

/// Two-sided paired t-test on a - b. Throws PreconditionError for fewer than
/// two pairs or unequal lengths, DegenerateTestError when every difference is equal.
TTestResult paired_t(const std::vector<double>& a, const std::vector<double>& b);
double paired_t_test(const std::vector<double>& a, const std::vector<double>& b);

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

struct Comparison {
    std::string baseline;
    std::optional<double> delta_rouge1_pct;
    std::optional<double> delta_rougeL_pct;
    std::optional<double> p_rougeL;
    std::optional<double> p_rouge1;
    /// Set when a p-value could not be computed ("no variance").
    std::string note;
};

struct MetricsReport {
    std::string run_name;
    double mean_rouge1 = 0.0;
    double mean_rougeL = 0.0;
    std::vector<ScoredPrediction> scores;
    std::optional<Comparison> comparison;
};

using NamedRun = std::pair<std::string, std::vector<ScoredPrediction>>;

double mean_of(const std::vector<double>& values);
/// 100 * (run - base) / base; empty when base is zero.
std::optional<double> relative_delta_pct(double run_mean, double base_mean);

/// One report per run in input order; every run except the baseline gets a
/// comparison against it. Throws AlignmentError listing id mismatches.
std::vector<MetricsReport> build_report(const std::vector<NamedRun>& runs, const std::string& baseline);

/// Plain-text table: run, ROUGE-1, ROUGE-L, relative ROUGE-L change, p-value.
std::string render_table(const std::vector<MetricsReport>& reports);
/// Horizontal bars of the relative ROUGE-L change per run.
std::string render_delta_chart(const std::vector<MetricsReport>& reports);

nlohmann::json to_json(const MetricsReport& report, bool include_scores = true);
MetricsReport metrics_report_from_json(const nlohmann::json& j);

/// LaMP submission shape: {"task": ..., "golds": [{"id", "output"}]}.
std::string predictions_json(Task task, const std::vector<std::pair<std::string, std::string>>& predictions);

} // namespace authorrag
