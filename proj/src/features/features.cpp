// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/features.hpp"
#include "authorrag/digest.hpp"
#include "authorrag/error.hpp"
#include "authorrag/resources.hpp"
#include "authorrag/text.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>

namespace authorrag {
namespace {

constexpr std::array<std::string_view, 9> kNames = {"SP", "SUBJ", "SMOG", "ADVU", "ADJU", "PU", "NEF", "DPF", "WF"};

double mean_of(const std::vector<const AnnotatedDocument*>& docs, const std::function<double(const AnnotatedDocument&)>& f) {
    std::vector<double> values;
    values.reserve(docs.size());
    for (const auto* d : docs) {
        values.push_back(f(*d));
    }
    // Summing in sorted order makes the mean independent of document order.
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

std::string render_list(const FrequencyList& items) {
    if (items.empty()) {
        return "none";
    }
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += '\'';
        out += items[i].first;
        out += '\'';
    }
    return out;
}

nlohmann::json list_to_json(const FrequencyList& items) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& [item, count] : items) {
        out.push_back({item, count});
    }
    return out;
}

FrequencyList list_from_json(const nlohmann::json& j) {
    FrequencyList out;
    for (const auto& e : j) {
        out.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::size_t>());
    }
    return out;
}

} // namespace

std::string_view feature_name(Feature f) noexcept { return kNames[static_cast<std::size_t>(f)]; }

Feature parse_feature(std::string_view name) {
    std::string upper(name);
    for (auto& c : upper) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == upper) {
            return static_cast<Feature>(i);
        }
    }
    throw PreconditionError("unknown feature '" + std::string(name) + "' (expected one of SP, SUBJ, SMOG, ADVU, ADJU, PU, NEF, DPF, WF)");
}

std::string feature_set_name(const FeatureSet& set) {
    std::string out;
    for (auto f : set) {
        if (!out.empty()) {
            out += '+';
        }
        out += feature_name(f);
    }
    return out.empty() ? "none" : out;
}

bool AuthorFeatures::has(Feature f) const noexcept {
    switch (f) {
    case Feature::SP: return sp.has_value();
    case Feature::SUBJ: return subj.has_value();
    case Feature::SMOG: return smog.has_value();
    case Feature::ADVU: return advu.has_value();
    case Feature::ADJU: return adju.has_value();
    case Feature::PU: return pu.has_value();
    case Feature::NEF: return nef.has_value();
    case Feature::DPF: return dpf.has_value();
    case Feature::WF: return wf.has_value();
    }
    return false;
}

bool AuthorFeatures::empty() const noexcept {
    return std::none_of(kAllFeatures.begin(), kAllFeatures.end(), [this](Feature f) { return has(f); });
}

double smog_of(const AnnotatedDocument& doc) {
    if (doc.sentences.empty()) {
        throw PreconditionError("SMOG needs at least one sentence");
    }
    std::size_t polysyllables = 0;
    for (const auto& t : doc.tokens) {
        if (t.is_alpha && t.syllables >= 3) {
            ++polysyllables;
        }
    }
    return 3.1291 + 1.0430 * std::sqrt(30.0 * static_cast<double>(polysyllables) / static_cast<double>(doc.sentences.size()));
}

double pos_usage(const AnnotatedDocument& doc, Pos pos) {
    if (doc.tokens.empty()) {
        throw PreconditionError("POS usage needs at least one token");
    }
    const auto hits = std::count_if(doc.tokens.begin(), doc.tokens.end(), [pos](const Token& t) { return t.pos == pos; });
    return 100.0 * static_cast<double>(hits) / static_cast<double>(doc.tokens.size());
}

FrequencyList top_k(const std::map<std::string, std::size_t, std::less<>>& counts, std::size_t k) {
    FrequencyList items(counts.begin(), counts.end());
    // std::map iterates keys ascending, so a stable sort by count keeps ties lexicographic.
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (items.size() > k) {
        items.resize(k);
    }
    return items;
}

FrequencyList top_entities(const std::vector<const AnnotatedDocument*>& docs, std::size_t k) {
    std::map<std::string, std::size_t, std::less<>> counts;
    for (const auto* d : docs) {
        for (const auto& e : d->entities) {
            ++counts[text::to_lower_ascii(e.surface) + " (" + e.label + ")"];
        }
    }
    return top_k(counts, k);
}

FrequencyList top_dependency_patterns(const std::vector<const AnnotatedDocument*>& docs, std::size_t k) {
    std::map<std::string, std::size_t, std::less<>> counts;
    for (const auto* d : docs) {
        for (const auto& a : d->arcs) {
            std::string key(pos_name(d->tokens.at(a.child).pos));
            key += ':';
            key += a.relation;
            key += ':';
            key += pos_name(d->tokens.at(a.head).pos);
            ++counts[key];
        }
    }
    return top_k(counts, k);
}

FrequencyList top_words(const std::vector<const AnnotatedDocument*>& docs, std::size_t k) {
    std::map<std::string, std::size_t, std::less<>> counts;
    for (const auto* d : docs) {
        for (const auto& t : d->tokens) {
            if (t.is_alpha && !t.is_stopword) {
                ++counts[text::to_lower_ascii(t.surface)];
            }
        }
    }
    return top_k(counts, k);
}

AuthorFeatures compute_features(const AuthorProfile& profile, const AnnotationLookup& annotations,
                                const FeatureSet& selected, std::size_t k) {
    if (selected.empty()) {
        throw PreconditionError("compute_features needs at least one selected feature");
    }
    if (profile.documents.empty()) {
        throw PreconditionError("author '" + profile.author_id + "' has an empty profile");
    }
    std::vector<const AnnotatedDocument*> docs;
    docs.reserve(profile.documents.size());
    for (const auto& d : profile.documents) {
        const auto* a = annotations(d);
        if (a == nullptr) {
            throw FeatureError("missing annotation for (" + profile.author_id + ", " + d.doc_id + ")");
        }
        docs.push_back(a);
    }
    AuthorFeatures out;
    auto with_tokens = [&](Pos pos) {
        return mean_of(docs, [pos](const AnnotatedDocument& d) { return d.tokens.empty() ? 0.0 : pos_usage(d, pos); });
    };
    for (auto f : selected) {
        switch (f) {
        case Feature::SP: out.sp = mean_of(docs, [](const AnnotatedDocument& d) { return d.polarity; }); break;
        case Feature::SUBJ: out.subj = mean_of(docs, [](const AnnotatedDocument& d) { return d.subjectivity; }); break;
        case Feature::SMOG: out.smog = mean_of(docs, [](const AnnotatedDocument& d) { return smog_of(d); }); break;
        case Feature::ADVU: out.advu = with_tokens(Pos::ADV); break;
        case Feature::ADJU: out.adju = with_tokens(Pos::ADJ); break;
        case Feature::PU: out.pu = with_tokens(Pos::PRON); break;
        case Feature::NEF: out.nef = top_entities(docs, k); break;
        case Feature::DPF: out.dpf = top_dependency_patterns(docs, k); break;
        case Feature::WF: out.wf = top_words(docs, k); break;
        }
    }
    return out;
}

std::string feature_definition(Feature f) {
    switch (f) {
    case Feature::SP: return "The average sentiment polarity";
    case Feature::SUBJ: return "The average subjectivity";
    case Feature::SMOG: return "The SMOG readability index";
    case Feature::ADVU: return "The average adverb usage percentage";
    case Feature::ADJU: return "The average adjective usage percentage";
    case Feature::PU: return "The average pronoun usage percentage";
    case Feature::NEF: return "The most frequently used named entities";
    case Feature::DPF: return "The most frequently used dependency patterns";
    case Feature::WF: return "The most frequently used words";
    }
    return {};
}

std::string render_feature_sentences(const AuthorFeatures& features) {
    if (features.empty()) {
        throw PreconditionError("no features to render");
    }
    std::string out;
    auto line = [&](Feature f, const std::string& value) {
        if (!out.empty()) {
            out += '\n';
        }
        out += feature_definition(f);
        out += " for the writer is ";
        out += value;
    };
    if (features.sp) line(Feature::SP, text::format_fixed(*features.sp, 2));
    if (features.subj) line(Feature::SUBJ, text::format_fixed(*features.subj, 2));
    if (features.smog) line(Feature::SMOG, text::format_fixed(*features.smog, 2));
    if (features.advu) line(Feature::ADVU, text::format_fixed(*features.advu, 2) + "%");
    if (features.adju) line(Feature::ADJU, text::format_fixed(*features.adju, 2) + "%");
    if (features.pu) line(Feature::PU, text::format_fixed(*features.pu, 2) + "%");
    if (features.nef) line(Feature::NEF, render_list(*features.nef));
    if (features.dpf) line(Feature::DPF, render_list(*features.dpf));
    if (features.wf) line(Feature::WF, render_list(*features.wf));
    return out;
}

nlohmann::json to_json(const AuthorFeatures& f) {
    nlohmann::json j = nlohmann::json::object();
    if (f.sp) j["SP"] = *f.sp;
    if (f.subj) j["SUBJ"] = *f.subj;
    if (f.smog) j["SMOG"] = *f.smog;
    if (f.advu) j["ADVU"] = *f.advu;
    if (f.adju) j["ADJU"] = *f.adju;
    if (f.pu) j["PU"] = *f.pu;
    if (f.nef) j["NEF"] = list_to_json(*f.nef);
    if (f.dpf) j["DPF"] = list_to_json(*f.dpf);
    if (f.wf) j["WF"] = list_to_json(*f.wf);
    return j;
}

AuthorFeatures author_features_from_json(const nlohmann::json& j) {
    AuthorFeatures f;
    try {
        if (j.contains("SP")) f.sp = j.at("SP").get<double>();
        if (j.contains("SUBJ")) f.subj = j.at("SUBJ").get<double>();
        if (j.contains("SMOG")) f.smog = j.at("SMOG").get<double>();
        if (j.contains("ADVU")) f.advu = j.at("ADVU").get<double>();
        if (j.contains("ADJU")) f.adju = j.at("ADJU").get<double>();
        if (j.contains("PU")) f.pu = j.at("PU").get<double>();
        if (j.contains("NEF")) f.nef = list_from_json(j.at("NEF"));
        if (j.contains("DPF")) f.dpf = list_from_json(j.at("DPF"));
        if (j.contains("WF")) f.wf = list_from_json(j.at("WF"));
    } catch (const nlohmann::json::exception& e) {
        throw FeatureError(std::string("malformed feature record: ") + e.what());
    }
    return f;
}

FeatureCache::FeatureCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

std::string FeatureCache::key(std::string_view author_id, const FeatureSet& set, std::string_view backend_version,
                              std::size_t k) {
    std::string material = "features/1";
    const std::string set_name = feature_set_name(set);
    for (std::string_view part : {author_id, std::string_view(set_name), backend_version}) {
        material += '\0';
        material += part;
    }
    material += '\0';
    material += std::to_string(k);
    return sha256_hex(material);
}

std::filesystem::path FeatureCache::path_for(const std::string& key) const {
    return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<AuthorFeatures> FeatureCache::get(const std::string& key) const {
    const auto path = path_for(key);
    if (!std::filesystem::exists(path)) {
        return std::nullopt;
    }
    try {
        return author_features_from_json(nlohmann::json::parse(read_file(path)));
    } catch (const std::exception&) {
        return std::nullopt; // unreadable entries are recomputed and overwritten
    }
}

void FeatureCache::put(const std::string& key, const AuthorFeatures& features) const {
    write_file_atomic(path_for(key), to_json(features).dump() + "\n");
}

} // namespace authorrag
