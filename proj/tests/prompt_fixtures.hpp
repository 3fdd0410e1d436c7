// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include "authorrag/prompting.hpp"
#include "support.hpp"

#include <random>
#include <string>

namespace authorrag::testing {

inline std::filesystem::path golden_path(Task task) {
    return test_data_dir() / "golden" / ("prompt_" + std::string(task_name(task)) + ".txt");
}

/// Fixed bundle behind the golden prompt files.
inline PromptBundle golden_bundle(Task task) {
    auto b = PromptBundle::for_task(task);
    const bool tweets = task == Task::LaMP7;
    auto make = [&](const std::string& id, const std::string& in, const std::string& out) {
        return tweets ? ProfileDocument{id, out, out} : ProfileDocument{id, in, out};
    };
    b.profile_examples = {
        make("p1", "The council approved the new transit budget on Tuesday.", "Council backs transit budget"),
        make("p2", "Heavy rain flooded three subway stations overnight.", "Rain floods subway stations"),
        make("p3", "The library will extend its opening hours in winter.", "Library extends winter hours"),
    };
    b.feature_text = "The average sentiment polarity for the writer is 0.13\n"
                     "The most frequently used words for the writer is 'council', 'budget'";
    ContrastiveSet cs;
    cs.n_authors = 2;
    cs.per_author = 1;
    cs.entries = {
        {"other-a", make("o1", "A striker scored twice in the final.", "Striker double wins final")},
        {"other-b", make("o2", "The startup unveiled a faster chip.", "Startup unveils faster chip")},
    };
    b.contrastive = cs;
    switch (task) {
    case Task::LaMP4:
        b.query_input = "Generate a headline for the following article: The city opened two new parks downtown.";
        break;
    case Task::LaMP5:
        b.query_input = "Generate a title for the following abstract of a paper: We study retrieval for long inputs.";
        break;
    case Task::LaMP7:
        b.query_input = "Paraphrase the following tweet without any explanation before or after it: loving the "
                        "new parks downtown!";
        break;
    }
    return b;
}

inline PromptBundle random_bundle(Task task, std::mt19937_64& rng) {
    auto b = PromptBundle::for_task(task);
    const auto n_profile = 1 + rng() % 12;
    for (std::size_t i = 0; i < n_profile; ++i) {
        const auto out = "profile" + std::to_string(i) + " " + random_sentence(rng, 1, 6);
        b.profile_examples.push_back(
            {std::to_string(i), task == Task::LaMP7 ? out : random_sentence(rng, 5, 30), out});
    }
    if (rng() % 2 == 0) {
        b.feature_text = "The average subjectivity for the writer is 0.50\nThe SMOG readability index for the writer is 9.10";
    }
    ContrastiveSet cs;
    const auto n_contrastive = rng() % 10;
    for (std::size_t i = 0; i < n_contrastive; ++i) {
        const auto out = "contrast" + std::to_string(i) + " " + random_sentence(rng, 1, 6);
        cs.entries.push_back({"author" + std::to_string(i / 3),
                              {"c" + std::to_string(i), task == Task::LaMP7 ? out : random_sentence(rng, 5, 20), out}});
    }
    b.contrastive = cs;
    b.query_input = random_sentence(rng, 3, 20);
    return b;
}

/// Markers that are present appear once each, in the fixed section order.
inline bool sections_in_order(const std::string& text) {
    std::size_t last = 0;
    for (const auto marker : {kProfileMarker, kFeatureMarker, kContrastiveMarker, kQueryMarker}) {
        const auto at = text.find(marker);
        if (at == std::string::npos) {
            if (marker == kProfileMarker || marker == kQueryMarker) {
                return false;
            }
            continue;
        }
        if (at < last || text.find(marker, at + 1) != std::string::npos) {
            return false;
        }
        last = at;
    }
    return text.find(kQueryMarker) > text.find(kProfileMarker);
}

} // namespace authorrag::testing
