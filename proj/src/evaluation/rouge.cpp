// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/error.hpp"
#include "authorrag/evaluation.hpp"
#include "authorrag/text.hpp"

#include <algorithm>
#include <map>

namespace authorrag {
namespace {

double fmeasure(double precision, double recall) {
    return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

void require_reference(std::string_view reference) {
    if (text::trim(reference).empty()) {
        throw PreconditionError("ROUGE needs a non-empty reference");
    }
}

} // namespace

std::vector<std::string> rouge_tokenize(std::string_view input, bool stem) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(stem && current.size() > 3 ? porter_stem(current) : current);
            current.clear();
        }
    };
    for (std::size_t i = 0; i < input.size();) {
        const auto c = static_cast<unsigned char>(input[i]);
        if (c < 0x80) {
            const auto lower = static_cast<char>(std::tolower(c));
            if ((lower >= 'a' && lower <= 'z') || (lower >= '0' && lower <= '9')) {
                current += lower;
            } else {
                flush();
            }
            ++i;
            continue;
        }
        // The only non-ASCII code points whose lowercase contains ASCII letters:
        // U+0130 -> "i" + U+0307 and U+212A KELVIN SIGN -> "k".
        if (input.substr(i, 2) == "\xC4\xB0") {
            current += 'i';
            flush();
            i += 2;
            continue;
        }
        if (input.substr(i, 3) == "\xE2\x84\xAA") {
            current += 'k';
            i += 3;
            continue;
        }
        flush();
        ++i;
        while (i < input.size() && (static_cast<unsigned char>(input[i]) & 0xC0) == 0x80) {
            ++i;
        }
    }
    flush();
    return tokens;
}

RougeScore rouge_n_tokens(const std::vector<std::string>& prediction, const std::vector<std::string>& reference,
                          std::size_t n) {
    auto ngrams = [n](const std::vector<std::string>& tokens) {
        std::map<std::vector<std::string>, std::size_t> counts;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                              tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
        }
        return counts;
    };
    const auto pred = ngrams(prediction);
    const auto ref = ngrams(reference);
    std::size_t overlap = 0;
    std::size_t pred_total = 0;
    std::size_t ref_total = 0;
    for (const auto& [gram, count] : pred) {
        pred_total += count;
        if (const auto it = ref.find(gram); it != ref.end()) {
            overlap += std::min(count, it->second);
        }
    }
    for (const auto& [gram, count] : ref) {
        ref_total += count;
    }
    RougeScore s;
    s.precision = static_cast<double>(overlap) / static_cast<double>(std::max<std::size_t>(pred_total, 1));
    s.recall = static_cast<double>(overlap) / static_cast<double>(std::max<std::size_t>(ref_total, 1));
    s.fmeasure = fmeasure(s.precision, s.recall);
    return s;
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::size_t> prev(b.size() + 1, 0);
    std::vector<std::size_t> cur(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

RougeScore rouge_lcs_tokens(const std::vector<std::string>& prediction, const std::vector<std::string>& reference) {
    RougeScore s;
    if (prediction.empty() || reference.empty()) {
        return s;
    }
    const auto lcs = static_cast<double>(lcs_length(reference, prediction));
    s.precision = lcs / static_cast<double>(prediction.size());
    s.recall = lcs / static_cast<double>(reference.size());
    s.fmeasure = fmeasure(s.precision, s.recall);
    return s;
}

double rouge1(std::string_view prediction, std::string_view reference) {
    require_reference(reference);
    return rouge_n_tokens(rouge_tokenize(prediction), rouge_tokenize(reference), 1).fmeasure;
}

double rougeL(std::string_view prediction, std::string_view reference) {
    require_reference(reference);
    return rouge_lcs_tokens(rouge_tokenize(prediction), rouge_tokenize(reference)).fmeasure;
}

ScoredPrediction score_prediction(std::string instance_id, std::string prediction, std::string reference) {
    require_reference(reference);
    const auto pred = rouge_tokenize(prediction);
    const auto ref = rouge_tokenize(reference);
    ScoredPrediction s;
    s.instance_id = std::move(instance_id);
    s.rouge1_f = rouge_n_tokens(pred, ref, 1).fmeasure;
    s.rougeL_f = rouge_lcs_tokens(pred, ref).fmeasure;
    s.prediction = std::move(prediction);
    s.reference = std::move(reference);
    return s;
}

} // namespace authorrag
