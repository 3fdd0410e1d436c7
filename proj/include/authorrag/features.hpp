// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include "authorrag/annotate.hpp"
#include "authorrag/corpus.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace authorrag {

/// Declaration order is the rendering order.
enum class Feature { SP, SUBJ, SMOG, ADVU, ADJU, PU, NEF, DPF, WF };

inline constexpr std::array<Feature, 9> kAllFeatures = {Feature::SP,   Feature::SUBJ, Feature::SMOG,
                                                        Feature::ADVU, Feature::ADJU, Feature::PU,
                                                        Feature::NEF,  Feature::DPF,  Feature::WF};

using FeatureSet = std::set<Feature>;

std::string_view feature_name(Feature f) noexcept;
/// Case-insensitive; throws PreconditionError for unknown names.
Feature parse_feature(std::string_view name);
std::string feature_set_name(const FeatureSet& set);

/// (item, count) pairs sorted by count descending, then item ascending.
using FrequencyList = std::vector<std::pair<std::string, std::size_t>>;

inline constexpr std::size_t kDefaultTopK = 10;

struct AuthorFeatures {
    std::optional<double> sp;
    std::optional<double> subj;
    std::optional<double> smog;
    std::optional<double> advu;
    std::optional<double> adju;
    std::optional<double> pu;
    std::optional<FrequencyList> nef;
    std::optional<FrequencyList> dpf;
    std::optional<FrequencyList> wf;

    bool has(Feature f) const noexcept;
    bool empty() const noexcept;
    bool operator==(const AuthorFeatures&) const = default;
};

/// 3.1291 + 1.0430 * sqrt(30 * polysyllables / sentences). Precondition: >= 1 sentence.
double smog_of(const AnnotatedDocument& doc);

/// Percentage of tokens tagged `pos`. Precondition: >= 1 token.
double pos_usage(const AnnotatedDocument& doc, Pos pos);

FrequencyList top_k(const std::map<std::string, std::size_t, std::less<>>& counts, std::size_t k = kDefaultTopK);

FrequencyList top_entities(const std::vector<const AnnotatedDocument*>& docs, std::size_t k = kDefaultTopK);
FrequencyList top_dependency_patterns(const std::vector<const AnnotatedDocument*>& docs, std::size_t k = kDefaultTopK);
FrequencyList top_words(const std::vector<const AnnotatedDocument*>& docs, std::size_t k = kDefaultTopK);

/// Returns the annotation for a profile document, or nullptr if there is none.
using AnnotationLookup = std::function<const AnnotatedDocument*(const ProfileDocument&)>;

/// Scalars are unweighted per-document means; frequency lists are counted over
/// all documents. Throws FeatureError naming (author_id, doc_id) when a
/// document has no annotation.
AuthorFeatures compute_features(const AuthorProfile& profile, const AnnotationLookup& annotations,
                                const FeatureSet& selected, std::size_t k = kDefaultTopK);

/// "{definition} for the writer is {value}", one line per present feature.
std::string render_feature_sentences(const AuthorFeatures& features);

std::string feature_definition(Feature f);

nlohmann::json to_json(const AuthorFeatures& features);
AuthorFeatures author_features_from_json(const nlohmann::json& j);

/// On-disk cache of AuthorFeatures keyed by (author_id, feature set,
/// annotation backend version, top-k). Safe for concurrent use.
class FeatureCache {
  public:
    explicit FeatureCache(std::filesystem::path dir);

    static std::string key(std::string_view author_id, const FeatureSet& set, std::string_view backend_version,
                           std::size_t k);

    std::optional<AuthorFeatures> get(const std::string& key) const;
    void put(const std::string& key, const AuthorFeatures& features) const;

  private:
    std::filesystem::path path_for(const std::string& key) const;

    std::filesystem::path dir_;
};

} // namespace authorrag
