// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#include "authorrag/annotate.hpp"
#include "authorrag/digest.hpp"
#include "authorrag/error.hpp"
#include "authorrag/resources.hpp"
#include "authorrag/text.hpp"

#include <mutex>
#include <sstream>

namespace authorrag {
namespace {

std::vector<std::string> content_lines(const std::string& contents) {
    std::vector<std::string> lines;
    std::istringstream in(contents);
    std::string line;
    while (std::getline(in, line)) {
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || text::starts_with(trimmed, ";;;")) {
            continue;
        }
        lines.emplace_back(trimmed);
    }
    return lines;
}

bool is_have_or_do(std::string_view lower) {
    return lower == "have" || lower == "has" || lower == "had" || lower == "'ve" || lower == "do" ||
           lower == "does" || lower == "did";
}

// have/do directly introducing another verb ("has eaten", "did you see") are auxiliaries;
// "to" not followed by a base verb is a preposition.
void refine_pos(std::vector<Token>& tokens, SentenceSpan span) {
    for (std::size_t i = span.begin; i < span.end; ++i) {
        if (tokens[i].tag == "TO" && (i + 1 >= span.end || tokens[i + 1].tag != "VB")) {
            tokens[i].pos = Pos::ADP;
            continue;
        }
        if (tokens[i].pos != Pos::VERB || !is_have_or_do(text::to_lower_ascii(tokens[i].surface))) {
            continue;
        }
        for (std::size_t j = i + 1; j < span.end && j <= i + 3; ++j) {
            const auto p = tokens[j].pos;
            if (p == Pos::VERB || p == Pos::AUX) {
                tokens[i].pos = Pos::AUX;
                break;
            }
            if (p != Pos::ADV && p != Pos::PART && p != Pos::PRON) {
                break;
            }
        }
    }
}

// Splits at the last whitespace before `limit` bytes, preferring paragraph breaks.
std::vector<std::string_view> split_chunks(std::string_view text, std::size_t limit) {
    std::vector<std::string_view> chunks;
    while (text.size() > limit) {
        auto cut = text.rfind("\n\n", limit);
        if (cut == std::string_view::npos || cut < limit / 2) {
            cut = text.find_last_of(" \t\n", limit);
        }
        if (cut == std::string_view::npos || cut == 0) {
            cut = limit;
            while (cut < text.size() && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) {
                ++cut;
            }
        }
        chunks.push_back(text.substr(0, cut));
        text.remove_prefix(cut);
    }
    if (!text::trim(text).empty()) {
        chunks.push_back(text);
    }
    return chunks;
}

} // namespace

std::shared_ptr<const LanguageResources> LanguageResources::load(const std::filesystem::path& dir) {
    auto res = std::make_shared<LanguageResources>();
    std::string fingerprint_input;
    auto read = [&](const char* name) {
        const auto path = dir / name;
        if (!std::filesystem::exists(path)) {
            throw AnnotationError("missing language resource " + path.string());
        }
        auto contents = read_file(path);
        fingerprint_input += name;
        fingerprint_input += '\0';
        fingerprint_input += sha256_hex(contents);
        return contents;
    };
    for (const auto& line : content_lines(read("en-lexicon.txt"))) {
        const auto space = line.find(' ');
        if (space == std::string::npos) {
            continue;
        }
        const auto end = line.find(' ', space + 1);
        res->lexicon[line.substr(0, space)] = line.substr(space + 1, end == std::string::npos ? end : end - space - 1);
    }
    for (const auto& line : content_lines(read("en-morphology.txt"))) {
        res->morphology_rules.push_back(text::split_whitespace(line));
    }
    for (const auto& line : content_lines(read("en-context.txt"))) {
        res->context_rules.push_back(text::split_whitespace(line));
    }
    for (const auto& line : content_lines(read("en-entities.txt"))) {
        auto words = text::split_whitespace(text::to_lower_ascii(line));
        EntityPattern pattern;
        const auto& last = words.back();
        if (words.size() > 1 && (last == "pers" || last == "loc" || last == "org")) {
            pattern.label = "-" + text::to_lower_ascii(last);
            for (auto& c : pattern.label) {
                c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            }
            words.pop_back();
        }
        pattern.words = words;
        res->entities[words.front()].push_back(std::move(pattern));
    }
    for (const auto& line : content_lines(read("stopwords-en.txt"))) {
        res->stopwords[text::to_lower_ascii(line)] = 1;
    }
    read("en-sentiment.tsv");
    res->sentiment = SentimentLexicon::load(dir / "en-sentiment.tsv");
    res->fingerprint = sha256_hex(fingerprint_input);
    return res;
}

std::shared_ptr<const LanguageResources> LanguageResources::shared() {
    static const std::shared_ptr<const LanguageResources> instance = load(data_dir() / "lexicon");
    return instance;
}

BuiltinAnnotator::BuiltinAnnotator(std::shared_ptr<const LanguageResources> resources) : res_(std::move(resources)) {
    if (!res_) {
        throw PreconditionError("BuiltinAnnotator needs language resources");
    }
}

std::string BuiltinAnnotator::version() const { return "builtin/1:" + res_->fingerprint.substr(0, 16); }

AnnotatedDocument BuiltinAnnotator::annotate(std::string_view input) const {
    if (text::trim(input).empty()) {
        throw PreconditionError("cannot annotate empty text");
    }
    if (!text::is_valid_utf8(input)) {
        throw PreconditionError("cannot annotate text that is not valid UTF-8");
    }
    AnnotatedDocument doc;
    for (const auto chunk : split_chunks(input, kChunkBytes)) {
        if (text::trim(chunk).empty()) {
            continue;
        }
        auto part = annotate_chunk(chunk);
        const auto offset = doc.tokens.size();
        for (auto& s : part.sentences) {
            doc.sentences.push_back({s.begin + offset, s.end + offset});
        }
        for (auto& a : part.arcs) {
            doc.arcs.push_back({a.child + offset, a.head + offset, std::move(a.relation)});
        }
        std::move(part.tokens.begin(), part.tokens.end(), std::back_inserter(doc.tokens));
        std::move(part.entities.begin(), part.entities.end(), std::back_inserter(doc.entities));
    }
    std::vector<std::string> surfaces;
    surfaces.reserve(doc.tokens.size());
    for (const auto& t : doc.tokens) {
        surfaces.push_back(t.surface);
    }
    const auto sentiment = res_->sentiment.score(surfaces);
    doc.polarity = sentiment.polarity;
    doc.subjectivity = sentiment.subjectivity;
    return doc;
}

AnnotatedDocument BuiltinAnnotator::annotate_chunk(std::string_view input) const {
    AnnotatedDocument doc;
    for (const auto& sentence : tokenize_sentences(input)) {
        const auto tags = tag_sentence(*res_, sentence);
        const SentenceSpan span{doc.tokens.size(), doc.tokens.size() + sentence.size()};
        for (std::size_t i = 0; i < sentence.size(); ++i) {
            Token t;
            t.surface = sentence[i];
            t.tag = tags[i];
            t.pos = penn_to_universal(t.tag, t.surface);
            t.lemma = lemmatize(t.surface, t.tag);
            t.is_alpha = text::is_alpha_word(t.surface);
            t.is_stopword = res_->is_stopword(text::to_lower_ascii(t.surface));
            t.syllables = count_syllables(t.surface);
            doc.tokens.push_back(std::move(t));
        }
        refine_pos(doc.tokens, span);
        doc.sentences.push_back(span);
        auto entities = find_entities(doc.tokens, span);
        std::move(entities.begin(), entities.end(), std::back_inserter(doc.entities));
        auto arcs = parse_dependencies(doc.tokens, span);
        std::move(arcs.begin(), arcs.end(), std::back_inserter(doc.arcs));
    }
    return doc;
}

} // namespace authorrag
