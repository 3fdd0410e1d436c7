// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/annotate.hpp"
#include "authorrag/error.hpp"
#include "authorrag/resources.hpp"

#include <array>
#include <nlohmann/json.hpp>
#include <sstream>

namespace authorrag {
namespace {

constexpr std::array<std::string_view, 17> kPosNames = {"ADJ",  "ADP",  "ADV",   "AUX",   "CCONJ", "DET",
                                                        "INTJ", "NOUN", "NUM",   "PART",  "PRON",  "PROPN",
                                                        "PUNCT", "SCONJ", "SYM", "VERB",  "X"};

void fail(const std::string& what) { throw AnnotationError("invalid annotation: " + what); }

} // namespace

std::string_view pos_name(Pos pos) noexcept { return kPosNames[static_cast<std::size_t>(pos)]; }

Pos parse_pos(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kPosNames.size(); ++i) {
        if (kPosNames[i] == name) {
            return static_cast<Pos>(i);
        }
    }
    return Pos::X;
}

void AnnotatedDocument::validate() const {
    const auto n = tokens.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (tokens[i].syllables < 0) {
            fail("token " + std::to_string(i) + " has a negative syllable count");
        }
        if (tokens[i].surface.empty()) {
            fail("token " + std::to_string(i) + " is empty");
        }
    }
    if (!(polarity >= -1.0 && polarity <= 1.0)) {
        fail("polarity outside [-1, 1]");
    }
    if (!(subjectivity >= 0.0 && subjectivity <= 1.0)) {
        fail("subjectivity outside [0, 1]");
    }
    if (n == 0) {
        if (!sentences.empty() || !arcs.empty()) {
            fail("sentences or arcs without tokens");
        }
        return;
    }
    std::size_t expected = 0;
    std::vector<std::size_t> sentence_of(n);
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        const auto& span = sentences[s];
        if (span.begin != expected || span.end <= span.begin || span.end > n) {
            fail("sentence " + std::to_string(s) + " does not continue the previous span");
        }
        for (std::size_t i = span.begin; i < span.end; ++i) {
            sentence_of[i] = s;
        }
        expected = span.end;
    }
    if (expected != n) {
        fail("sentences do not cover all tokens");
    }
    std::vector<long> head(n, -1);
    for (const auto& arc : arcs) {
        if (arc.child >= n || arc.head >= n) {
            fail("arc index out of range");
        }
        if (arc.child == arc.head) {
            fail("self-loop at token " + std::to_string(arc.child));
        }
        if (head[arc.child] != -1) {
            fail("token " + std::to_string(arc.child) + " has two heads");
        }
        if (sentence_of[arc.child] != sentence_of[arc.head]) {
            fail("arc crosses a sentence boundary at token " + std::to_string(arc.child));
        }
        if (arc.relation.empty()) {
            fail("arc without relation at token " + std::to_string(arc.child));
        }
        head[arc.child] = static_cast<long>(arc.head);
    }
    for (std::size_t s = 0; s < sentences.size(); ++s) {
        std::size_t roots = 0;
        for (std::size_t i = sentences[s].begin; i < sentences[s].end; ++i) {
            roots += head[i] == -1 ? 1 : 0;
        }
        if (roots != 1) {
            fail("sentence " + std::to_string(s) + " has " + std::to_string(roots) + " roots");
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        long cur = static_cast<long>(i);
        std::size_t steps = 0;
        while (head[static_cast<std::size_t>(cur)] != -1) {
            cur = head[static_cast<std::size_t>(cur)];
            if (++steps > n) {
                fail("cycle through token " + std::to_string(i));
            }
        }
    }
}

nlohmann::json to_json(const AnnotatedDocument& doc) {
    nlohmann::json tokens = nlohmann::json::array();
    for (const auto& t : doc.tokens) {
        tokens.push_back({{"text", t.surface},
                          {"lemma", t.lemma},
                          {"pos", pos_name(t.pos)},
                          {"tag", t.tag},
                          {"alpha", t.is_alpha},
                          {"stop", t.is_stopword},
                          {"syllables", t.syllables}});
    }
    nlohmann::json sentences = nlohmann::json::array();
    for (const auto& s : doc.sentences) {
        sentences.push_back({s.begin, s.end});
    }
    nlohmann::json entities = nlohmann::json::array();
    for (const auto& e : doc.entities) {
        entities.push_back({{"text", e.surface}, {"label", e.label}});
    }
    nlohmann::json arcs = nlohmann::json::array();
    for (const auto& a : doc.arcs) {
        arcs.push_back({a.child, a.head, a.relation});
    }
    return {{"tokens", std::move(tokens)},     {"sentences", std::move(sentences)},
            {"entities", std::move(entities)}, {"arcs", std::move(arcs)},
            {"polarity", doc.polarity},        {"subjectivity", doc.subjectivity}};
}

AnnotatedDocument annotated_document_from_json(const nlohmann::json& j) {
    AnnotatedDocument doc;
    try {
        for (const auto& t : j.at("tokens")) {
            Token tok;
            tok.surface = t.at("text").get<std::string>();
            tok.lemma = t.value("lemma", tok.surface);
            tok.pos = parse_pos(t.at("pos").get<std::string>());
            tok.tag = t.value("tag", std::string());
            tok.is_alpha = t.at("alpha").get<bool>();
            tok.is_stopword = t.at("stop").get<bool>();
            tok.syllables = t.at("syllables").get<int>();
            doc.tokens.push_back(std::move(tok));
        }
        for (const auto& s : j.at("sentences")) {
            doc.sentences.push_back({s.at(0).get<std::size_t>(), s.at(1).get<std::size_t>()});
        }
        for (const auto& e : j.value("entities", nlohmann::json::array())) {
            doc.entities.push_back({e.at("text").get<std::string>(), e.at("label").get<std::string>()});
        }
        for (const auto& a : j.value("arcs", nlohmann::json::array())) {
            doc.arcs.push_back({a.at(0).get<std::size_t>(), a.at(1).get<std::size_t>(), a.at(2).get<std::string>()});
        }
        doc.polarity = j.at("polarity").get<double>();
        doc.subjectivity = j.at("subjectivity").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw AnnotationError(std::string("malformed annotation record: ") + e.what());
    }
    doc.validate();
    return doc;
}

PreannotatedStore PreannotatedStore::load(const std::filesystem::path& jsonl) {
    PreannotatedStore store;
    std::istringstream in(read_file(jsonl));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw AnnotationError(jsonl.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        if (j.contains("version") && !j.contains("annotation")) {
            store.version_ = j.at("version").get<std::string>();
            continue;
        }
        try {
            store.put(j.at("author_id").get<std::string>(), j.at("doc_id").get<std::string>(),
                      annotated_document_from_json(j.at("annotation")));
        } catch (const nlohmann::json::exception& e) {
            throw AnnotationError(jsonl.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return store;
}

void PreannotatedStore::put(std::string author_id, std::string doc_id, AnnotatedDocument doc) {
    auto key = std::make_pair(std::move(author_id), std::move(doc_id));
    if (docs_.count(key) > 0) {
        throw AnnotationError("duplicate pre-annotation for (" + key.first + ", " + key.second + ")");
    }
    docs_.emplace(std::move(key), std::move(doc));
}

const AnnotatedDocument* PreannotatedStore::find(std::string_view author_id, std::string_view doc_id) const {
    const auto it = docs_.find(std::make_pair(std::string(author_id), std::string(doc_id)));
    return it == docs_.end() ? nullptr : &it->second;
}

void PreannotatedStore::save(const std::filesystem::path& jsonl) const {
    std::string out = nlohmann::json{{"version", version_}}.dump() + "\n";
    for (const auto& [key, doc] : docs_) {
        out += nlohmann::json{{"author_id", key.first}, {"doc_id", key.second}, {"annotation", to_json(doc)}}.dump() + "\n";
    }
    write_file_atomic(jsonl, out);
}

} // namespace authorrag
